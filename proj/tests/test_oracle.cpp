#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "unionbound/closed_bounds.hpp"
#include "unionbound/oracle.hpp"

#include <cmath>

using namespace unionbound;
using testsupport::moments;
using testsupport::two_event_fixture;

TEST_CASE("the two-moment program finds the known two-point optimum") {
  TwoMomentInstance<double> inst;
  inst.m1 = 1.0;
  inst.m2 = 1.5;
  inst.n = 2;
  const auto sol = two_moment_min(inst);
  CHECK(std::abs(sol.value - 0.75) < 1e-12);
  REQUIRE(sol.support.size() == 2);
  CHECK(sol.support.at(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.support.at(2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("boundary moments collapse to a single degree") {
  TwoMomentInstance<double> inst;
  inst.m1 = 0.8;
  inst.m2 = 3.2;  // m2 = n m1: all mass at the top degree
  inst.n = 4;
  const auto top = two_moment_min(inst);
  CHECK(std::abs(top.value - 0.2) < 1e-12);
  REQUIRE(top.support.size() == 1);
  CHECK(top.support.count(4) == 1);

  inst.m2 = 0.8;  // m2 = m1: all mass at degree one
  const auto bottom = two_moment_min(inst);
  CHECK(std::abs(bottom.value - 0.8) < 1e-12);
  CHECK(bottom.support.count(1) == 1);
}

TEST_CASE("objective weights steer the optimum") {
  TwoMomentInstance<double> inst;
  inst.m1 = 1.0;
  inst.m2 = 1.5;
  inst.n = 2;
  inst.objective_weights = Eigen::VectorXd(2);
  inst.objective_weights << 1.0, 0.0;  // degree 2 is free
  const auto sol = two_moment_min(inst);
  CHECK(std::abs(sol.value - 0.5) < 1e-12);
  inst.objective_weights = Eigen::VectorXd(1);
  CHECK_THROWS_AS(two_moment_min(inst), std::invalid_argument);
}

TEST_CASE("infeasible moments are rejected") {
  TwoMomentInstance<double> inst;
  inst.n = 3;
  inst.m1 = 0.0;
  inst.m2 = 0.0;
  CHECK_THROWS_AS(two_moment_min(inst), std::invalid_argument);
  inst.m1 = 1.0;
  inst.m2 = 0.5;  // below m1
  CHECK_THROWS_AS(two_moment_min(inst), std::invalid_argument);
  inst.m2 = 3.5;  // above n m1
  CHECK_THROWS_AS(two_moment_min(inst), std::invalid_argument);
}

TEST_CASE("the per-event program reproduces hand-checked values") {
  const auto sol = kat_subproblem_min(0.5, 0.75, 2);
  CHECK(std::abs(sol.value - 0.375) < 1e-12);
  CHECK(sol.support.at(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sol.support.at(2) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK(std::abs(kat_subproblem_min(0.3, 0.3, 5).value - 0.3) < 1e-12);
  CHECK(std::abs(kat_subproblem_min(0.3, 1.5, 5).value - 0.06) < 1e-12);
  CHECK(kat_subproblem_min(0.0, 0.0, 5).value == 0.0);
  CHECK_THROWS_AS(kat_subproblem_min(0.0, 0.5, 5), std::invalid_argument);
  CHECK_THROWS_AS(kat_subproblem_min(0.3, 0.2, 5), std::invalid_argument);
  CHECK_THROWS_AS(kat_subproblem_min(-0.1, 0.0, 5), std::invalid_argument);
}

TEST_CASE("closed forms agree with the vertex enumeration") {
  for (const auto& es : testsupport::property_instances(200, 555)) {
    const auto ms = summarize(es);
    TwoMomentInstance<double> inst;
    inst.m1 = ms.theta1;
    inst.m2 = 2 * ms.theta2 + ms.theta1;
    inst.n = int(ms.size());
    const auto lp = two_moment_min(inst);
    CHECK(std::abs(lp.value - ds_lower(ms).value) <= 1e-10);
    CHECK(lp.value >= inst.m1 * inst.m1 / inst.m2 - 1e-12);

    double kat_sum = 0;
    for (Eigen::Index i = 0; i < ms.size(); ++i)
      kat_sum += kat_subproblem_min(ms.alpha[i], ms.gamma[i], int(ms.size())).value;
    CHECK(std::abs(kat_sum - kat_lower(ms).value) <= 1e-10);
  }
}

TEST_CASE("the ds achiever realizes its own summary") {
  const auto ms = summarize(two_event_fixture());
  const auto ach = construct_ds_achiever(ms);
  CHECK(ach.atom_count() == 2);
  const auto back = summarize(ach);
  CHECK(std::abs(back.theta1 - ms.theta1) < 1e-12);
  CHECK(std::abs(back.theta2 - ms.theta2) < 1e-12);
  CHECK(std::abs(union_probability(ach) - 0.75) < 1e-12);
}

TEST_CASE("achiever round-trips hold on generated summaries") {
  for (const auto& es : testsupport::property_instances(200, 77)) {
    const auto ms = summarize(es);
    const auto ach = construct_ds_achiever(ms);
    const auto back = summarize(ach);
    CHECK(std::abs(back.theta1 - ms.theta1) <= 1e-10);
    CHECK(std::abs(back.theta2 - ms.theta2) <= 1e-10);
    CHECK(std::abs(union_probability(ach) - ds_lower(ms).value) <= 1e-12);
    CHECK(ach.atom_count() <= 2);
  }
}

TEST_CASE("the single-atom achiever hits the average bound") {
  const auto ach = construct_frac_achiever(1.0, 2);
  CHECK(std::abs(union_probability(ach) - 0.5) < 1e-12);
  CHECK(std::abs(summarize(ach).theta1 - 1.0) < 1e-12);
  CHECK(union_probability(construct_frac_achiever(0.0, 3)) == 0.0);
  CHECK_THROWS_AS(construct_frac_achiever(2.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(construct_frac_achiever(-0.1, 2), std::invalid_argument);
}

TEST_CASE("the nested-chain achiever hits the maximum bound") {
  Eigen::VectorXd alpha(3);
  alpha << 0.3, 0.5, 0.2;
  const auto ach = construct_max_achiever<double>(alpha);
  CHECK(std::abs(union_probability(ach) - 0.5) < 1e-12);
  const auto back = summarize(ach);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(back.alpha[i] - alpha[i]) < 1e-12);
  // Nesting: the pairwise mass of two events is the smaller alpha.
  CHECK(std::abs(back.sigma(0, 1) - 0.3) < 1e-12);
  CHECK(std::abs(back.sigma(0, 2) - 0.2) < 1e-12);

  Eigen::VectorXd bad(1);
  bad << 1.5;
  CHECK_THROWS_AS(construct_max_achiever<double>(bad), std::invalid_argument);
}

TEST_CASE("nested-chain round-trips hold for random alphas") {
  SeededRng rng(4242);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + int(rng.integer(8));
    Eigen::VectorXd alpha(n);
    for (int i = 0; i < n; ++i) alpha[i] = rng.unit();
    const auto ach = construct_max_achiever<double>(alpha);
    CHECK(std::abs(union_probability(ach) - alpha.maxCoeff()) <= 1e-12);
    const auto back = summarize(ach);
    CHECK((back.alpha - alpha).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
