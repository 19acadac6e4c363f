#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "unionbound/closed_bounds.hpp"

#include <cmath>

using namespace unionbound;
using testsupport::moments;
using testsupport::two_event_fixture;

namespace {

const MomentSummary<double> kFixture = summarize(two_event_fixture());

}  // namespace

TEST_CASE("two-event fixture values are reproduced exactly") {
  CHECK(std::abs(union_upper(kFixture).value - 1.0) < 1e-12);
  CHECK(std::abs(bonferroni_lower(kFixture).value - 0.75) < 1e-12);
  CHECK(std::abs(frac_lower(kFixture).value - 0.5) < 1e-12);
  CHECK(std::abs(max_lower(kFixture).value - 0.5) < 1e-12);
  CHECK(std::abs(cs_lower(kFixture).value - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(ds_lower(kFixture).value - 0.75) < 1e-12);
  CHECK(std::abs(dc_lower(kFixture).value - 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(kat_lower(kFixture).value - 0.75) < 1e-12);
  CHECK(std::abs(new1_upper(kFixture).value - 0.75) < 1e-12);
}

TEST_CASE("directions and names are wired correctly") {
  CHECK(union_upper(kFixture).direction == Direction::upper);
  CHECK(new1_upper(kFixture).direction == Direction::upper);
  CHECK(ds_lower(kFixture).direction == Direction::lower);
  CHECK(ds_lower(kFixture).name == "ds");
}

TEST_CASE("the two-point support is reported alongside the ds value") {
  const auto r = ds_lower(kFixture);
  const auto sp = std::get<SupportPair>(r.detail);
  // 2 theta2 / theta1 = 1/2, so the optimum splits mass over degrees 1 and 2.
  CHECK(sp.k1 == 1);
  CHECK(sp.k2 == 2);

  const auto identical = moments({0.2, 0.2}, {{0.2, 0.2}, {0.2, 0.2}});
  const auto r2 = ds_lower(identical);
  const auto sp2 = std::get<SupportPair>(r2.detail);
  // 2 theta2 / theta1 = 1 exactly: integer ratio, support starts at 2.
  CHECK(sp2.k1 == 2);
  CHECK(sp2.k2 == 3);
  CHECK(std::abs(r2.value - 0.2) < 1e-12);
}

TEST_CASE("disjoint events make every lower bound tight at theta1") {
  const auto ms = moments({0.3, 0.2}, {{0.3, 0.0}, {0.0, 0.2}});
  CHECK(std::abs(bonferroni_lower(ms).value - 0.5) < 1e-12);
  CHECK(std::abs(ds_lower(ms).value - 0.5) < 1e-12);
  CHECK(std::abs(dc_lower(ms).value - 0.5) < 1e-12);
  CHECK(std::abs(kat_lower(ms).value - 0.5) < 1e-12);
  CHECK(std::abs(new1_upper(ms).value - 0.5) < 1e-12);
}

TEST_CASE("identical events are recovered exactly by the per-event bounds") {
  // Four copies of one event of mass 0.2: gamma_i = 4 alpha_i.
  const double p = 0.2;
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(4, p);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(4, 4, p);
  const auto ms = make_moment_summary<double>(std::move(alpha), std::move(sigma));
  CHECK(std::abs(ds_lower(ms).value - p) < 1e-12);
  CHECK(std::abs(kat_lower(ms).value - p) < 1e-12);
  CHECK(std::abs(dc_lower(ms).value - p) < 1e-12);
  // theta1 - theta2 = 4p - 6p goes negative and must be flagged, not hidden.
  const auto bf = bonferroni_lower(ms);
  CHECK(std::abs(bf.value - (-2 * p)) < 1e-12);
  CHECK(bf.clamped);
}

TEST_CASE("ds rejects a negative pairwise total") {
  const auto bad = moments({0.5, 0.5}, {{0.5, -0.1}, {-0.1, 0.5}});
  CHECK_THROWS_AS(ds_lower(bad), std::invalid_argument);
}

TEST_CASE("kat rejects gamma below alpha") {
  const auto bad = moments({0.5, 0.5}, {{0.5, -0.1}, {-0.1, 0.5}});
  CHECK_THROWS_AS(kat_lower(bad), std::invalid_argument);
}

TEST_CASE("zero-probability events drop out of the per-event bounds") {
  const auto ms = moments({0.3, 0.0}, {{0.3, 0.0}, {0.0, 0.0}});
  CHECK(std::abs(dc_lower(ms).value - 0.3) < 1e-12);
  CHECK(std::abs(kat_lower(ms).value - 0.3) < 1e-12);
}

TEST_CASE("degenerate summaries fall back to zero by convention") {
  const auto ms = moments({0.0}, {{0.0}});
  CHECK(cs_lower(ms).value == 0.0);
  CHECK(ds_lower(ms).value == 0.0);
  CHECK(kat_lower(ms).value == 0.0);
}

TEST_CASE("ratios a hair below an integer are treated as that integer") {
  // gamma/alpha = 3 - 1e-13 must act like exactly 3: the optimal split sits
  // on a single degree and the value is alpha/3. A plain floor would pick
  // degree 2 and inflate the bound.
  const double a = 0.2;
  const double g = a * (3.0 - 1e-13);
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(3, a);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(3, 3);
  sigma.diagonal().setConstant(a);
  sigma(0, 1) = sigma(1, 0) = (g - a) / 2;
  sigma(0, 2) = sigma(2, 0) = (g - a) / 2;
  sigma(1, 2) = sigma(2, 1) = (g - a) / 2;
  const auto ms = make_moment_summary<double>(std::move(alpha), std::move(sigma));
  CHECK(ms.gamma[0] == doctest::Approx(g).epsilon(1e-14));
  CHECK(kat_lower(ms).value == doctest::Approx(3 * (a / 3)).epsilon(1e-11));

  // Same guard inside ds: 2 theta2/theta1 a hair below 1 snaps to 1.
  const double t2 = 0.5 * (1.0 - 1e-13);
  const auto near_int = moments({0.5, 0.5}, {{0.5, t2}, {t2, 0.5}});
  const auto sp = std::get<SupportPair>(ds_lower(near_int).detail);
  CHECK(sp.k1 == 2);
}

TEST_CASE("lower bounds stay below the union and order as proven") {
  for (const auto& es : testsupport::property_instances(300, 91117)) {
    const auto ms = summarize(es);
    const double exact = union_probability(es);
    const double ds = ds_lower(ms).value;
    const double dc = dc_lower(ms).value;
    const double kat = kat_lower(ms).value;
    const double cs = cs_lower(ms).value;
    const double frac = frac_lower(ms).value;
    const double mx = max_lower(ms).value;
    const double bf = bonferroni_lower(ms).value;
    const double uu = union_upper(ms).value;
    const double n1 = new1_upper(ms).value;

    for (double lower : {ds, dc, kat, cs, frac, mx, bf})
      CHECK(lower <= exact + 1e-9);
    for (double upper : {uu, n1}) CHECK(upper >= exact - 1e-9);

    CHECK(kat >= dc - 1e-12);
    CHECK(kat >= ds - 1e-12);
    CHECK(kat <= 1.125 * dc + 1e-12);
    CHECK(ds >= cs - 1e-12);
    CHECK(cs >= frac - 1e-12);
    CHECK(n1 <= uu + 1e-12);
  }
}

TEST_CASE("the 9/8 gap between kat and dc is attained") {
  const double kat = kat_lower(kFixture).value;
  const double dc = dc_lower(kFixture).value;
  CHECK(std::abs(kat / dc - 1.125) < 1e-12);
}

TEST_CASE("closed forms accept other scalar types") {
  Eigen::VectorX<long double> alpha(2);
  alpha << 0.5L, 0.5L;
  Eigen::MatrixX<long double> sigma(2, 2);
  sigma << 0.5L, 0.25L, 0.25L, 0.5L;
  const auto ms = make_moment_summary<long double>(std::move(alpha), std::move(sigma));
  CHECK(std::abs(double(ds_lower(ms).value) - 0.75) < 1e-15);
}
