#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "unionbound/core.hpp"

#include <cmath>

using namespace unionbound;
using testsupport::two_event_fixture;

namespace {

double binom2(int k) { return 0.5 * k * (k - 1); }

}  // namespace

TEST_CASE("union probability counts each covered atom once") {
  const auto es = two_event_fixture();
  CHECK(union_probability(es) == doctest::Approx(0.75).epsilon(1e-12));

  Eigen::VectorXd masses(2);
  masses << 0.3, 0.4;
  BoolMatrix memb(2, 2);
  memb << true, false, false, true;
  CHECK(std::abs(union_probability(EventSystem<double>(masses, memb)) - 0.7) < 1e-12);
}

TEST_CASE("atoms outside every event do not contribute") {
  Eigen::VectorXd masses(2);
  masses << 0.5, 0.3;
  BoolMatrix memb(1, 2);
  memb << true, false;
  const EventSystem<double> es(masses, memb);
  CHECK(union_probability(es) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(degree_spectrum(es).a[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("an event system may have no atoms at all") {
  const EventSystem<double> es(Eigen::VectorXd(0), BoolMatrix(2, 0));
  CHECK(union_probability(es) == 0.0);
  CHECK(summarize(es).theta1 == 0.0);
}

TEST_CASE("construction rejects malformed systems") {
  Eigen::VectorXd masses(2);
  masses << 0.5, 0.6;
  BoolMatrix memb(1, 2);
  memb << true, true;
  CHECK_THROWS_AS(EventSystem<double>(masses, memb), std::invalid_argument);  // sum > 1

  Eigen::VectorXd neg(1);
  neg << -0.1;
  CHECK_THROWS_AS(EventSystem<double>(neg, BoolMatrix(1, 1)), std::invalid_argument);

  Eigen::VectorXd ok(1);
  ok << 0.5;
  CHECK_THROWS_AS(EventSystem<double>(ok, BoolMatrix(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(EventSystem<double>(ok, BoolMatrix(0, 1)), std::invalid_argument);
}

TEST_CASE("degree spectrum splits the union by coverage count") {
  const auto s = degree_spectrum(two_event_fixture());
  REQUIRE(s.a.size() == 2);
  CHECK(s.a[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.a[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at_degree(2) == s.a[1]);
  CHECK(s.union_mass() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("per-event spectrum rows decompose each event") {
  const auto s = per_event_spectrum(two_event_fixture());
  CHECK(s.at(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at(0, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.at(1, 2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("summarize produces the pairwise moments") {
  const auto ms = summarize(two_event_fixture());
  CHECK(ms.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ms.alpha[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ms.sigma(0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ms.sigma(1, 0) == ms.sigma(0, 1));
  CHECK(ms.sigma(0, 0) == ms.alpha[0]);
  CHECK(ms.theta1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ms.theta2 == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(ms.gamma[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(ms.beta[0] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("summaries built from dyadic masses are exact") {
  // Masses in units of 1/64 add without rounding, so every aggregate must
  // come out bit-exact.
  Eigen::VectorXd masses(4);
  masses << 8.0 / 64, 12.0 / 64, 16.0 / 64, 4.0 / 64;
  BoolMatrix memb(3, 4);
  memb << true, true, false, true,
      false, true, true, true,
      true, false, true, false;
  const auto ms = summarize(EventSystem<double>(masses, memb));
  CHECK(ms.alpha[0] == 24.0 / 64);
  CHECK(ms.alpha[1] == 32.0 / 64);
  CHECK(ms.alpha[2] == 24.0 / 64);
  CHECK(ms.sigma(0, 1) == 16.0 / 64);
  CHECK(ms.sigma(0, 2) == 8.0 / 64);
  CHECK(ms.sigma(1, 2) == 16.0 / 64);
  CHECK(ms.theta1 == 80.0 / 64);
  CHECK(ms.theta2 == 40.0 / 64);
}

TEST_CASE("spectrum identities hold on generated instances") {
  for (const auto& es : testsupport::property_instances(200, 20260819)) {
    const auto ms = summarize(es);
    const auto spec = degree_spectrum(es);
    const auto per = per_event_spectrum(es);
    const double exact = union_probability(es);
    const Eigen::Index n = es.event_count();

    double sum_a = 0, sum_ka = 0, sum_k2a = 0, sum_pairs = 0;
    for (int k = 1; k <= n; ++k) {
      const double a = spec.a[k - 1];
      sum_a += a;
      sum_ka += k * a;
      sum_k2a += double(k) * k * a;
      sum_pairs += binom2(k) * a;
    }
    CHECK(std::abs(sum_a - exact) < 1e-12);
    CHECK(std::abs(sum_ka - ms.theta1) < 1e-12);
    CHECK(std::abs(sum_pairs - ms.theta2) < 1e-12);
    CHECK(std::abs(sum_k2a - (2 * ms.theta2 + ms.theta1)) < 1e-12);

    for (int k = 1; k <= n; ++k) {
      double col = 0;
      for (Eigen::Index i = 0; i < n; ++i) col += per.a(i, k - 1);
      CHECK(std::abs(spec.a[k - 1] - col / k) < 1e-12);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0, row_k = 0;
      for (int k = 1; k <= n; ++k) {
        row += per.a(i, k - 1);
        row_k += k * per.a(i, k - 1);
      }
      CHECK(std::abs(row - ms.alpha[i]) < 1e-12);
      CHECK(std::abs(row_k - ms.gamma[i]) < 1e-12);
    }
  }
}

TEST_CASE("summaries may be built directly from alpha and sigma") {
  const auto ms = testsupport::moments({0.5, 0.5}, {{0.5, 0.25}, {0.25, 0.5}});
  CHECK(ms.theta1 == 1.0);
  CHECK(ms.theta2 == 0.25);
  CHECK(ms.beta[1] == 0.25);
  CHECK(ms.gamma[1] == 0.75);
  // The test helper always shapes sigma square, so drive the shape check
  // directly.
  Eigen::VectorXd alpha(2);
  alpha << 0.5, 0.5;
  Eigen::MatrixXd tall(2, 1);
  tall << 0.5, 0.5;
  CHECK_THROWS_AS(make_moment_summary<double>(std::move(alpha), std::move(tall)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_moment_summary<double>(Eigen::VectorXd(), Eigen::MatrixXd()),
                  std::invalid_argument);
}

TEST_CASE("validate_summary reports each inconsistency") {
  CHECK(validate_summary(summarize(two_event_fixture())).empty());

  const auto bad_pair = testsupport::moments({0.5, 0.5}, {{0.5, 0.6}, {0.6, 0.5}});
  const auto v1 = validate_summary(bad_pair);
  REQUIRE(v1.size() == 2);
  CHECK(v1[0].find("exceeds min(alpha(0), alpha(1))") != std::string::npos);

  const auto asym = testsupport::moments({0.5, 0.5}, {{0.5, 0.2}, {0.1, 0.5}});
  CHECK(validate_summary(asym).size() == 1);

  const auto diag = testsupport::moments({0.5, 0.5}, {{0.4, 0.2}, {0.2, 0.5}});
  CHECK(validate_summary(diag).size() == 1);

  const auto neg = testsupport::moments({-0.5, 0.5}, {{-0.5, 0.0}, {0.0, 0.5}});
  const auto v4 = validate_summary(neg);
  CHECK(v4.size() >= 2);  // negative alpha and negative sigma diagonal

  // Tolerance: rounding noise below 1e-9 passes.
  const auto noisy =
      testsupport::moments({0.5, 0.5}, {{0.5, 0.25 + 1e-10}, {0.25, 0.5}});
  CHECK(validate_summary(noisy).empty());
}

TEST_CASE("bound results clamp reporting without touching the raw value") {
  const auto r = make_bound_result<double>("x", Direction::lower, -0.25);
  CHECK(r.value == -0.25);
  CHECK(r.clamped);
  CHECK(r.clamped_value() == 0.0);
  const auto ok = make_bound_result<double>("x", Direction::upper, 1.0);
  CHECK_FALSE(ok.clamped);
}

TEST_CASE("the core types work with other scalar types") {
  Eigen::VectorX<float> masses(3);
  masses << 0.25f, 0.25f, 0.25f;
  BoolMatrix memb(2, 3);
  memb << true, false, true, false, true, true;
  const EventSystem<float> es(masses, memb);
  CHECK(union_probability(es) == doctest::Approx(0.75f));
  const auto ms = summarize(es);
  CHECK(ms.theta2 == doctest::Approx(0.25f));
}
