#include <doctest.h>

#include "reeblab/oracles.hpp"
#include "reeblab/suspension.hpp"

using namespace reeblab;

TEST_CASE("matrix parsing") {
  TransitionMatrix M = parse_transition_matrix("2 1\n1 1\n");
  CHECK(M.size() == 2);
  CHECK(M.m(0, 0) == 2);
  CHECK(format_transition_matrix(M) == "2 1\n1 1\n");
  CHECK_THROWS_AS((void)parse_transition_matrix("1 2 3\n4 5\n"), LabError);
  CHECK_THROWS_AS((void)parse_transition_matrix("-1\n"), LabError);
  CHECK_THROWS_AS((void)parse_transition_matrix(""), LabError);
}

TEST_CASE("dominant eigenvalue") {
  CHECK(perron_root(parse_transition_matrix("2 1\n1 1")) ==
        doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(perron_root(parse_transition_matrix("1")) == doctest::Approx(1.0));
  CHECK(perron_root(parse_transition_matrix("0 1\n1 0")) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)perron_root(parse_transition_matrix("1 0\n0 1")), LabError);
}

TEST_CASE("necklace counting") {
  SUBCASE("full shift on two symbols at length three") {
    NecklaceCensus nc = necklace_count(parse_transition_matrix("1 1\n1 1"), 3);
    CHECK(nc.closed_walks[2] == 8);
    CHECK(nc.necklaces[2] == 4);
    CHECK(nc.aperiodic[2] == 2);
  }

  SUBCASE("length one counts the trace") {
    NecklaceCensus nc = necklace_count(parse_transition_matrix("2 1\n1 1"), 1);
    CHECK(nc.cumulative[0] == 3);
  }

  SUBCASE("counts match explicit enumeration and the divisor identity") {
    TransitionMatrix M = parse_transition_matrix("2 1\n1 1");
    NecklaceCensus nc = necklace_count(M, 12);
    auto brute = oracle::necklace_enumeration(M, 12);
    for (int k = 1; k <= 12; ++k) {
      CHECK(nc.necklaces[static_cast<std::size_t>(k - 1)] ==
            brute[static_cast<std::size_t>(k - 1)]);
      long long divisor_sum = 0;
      for (int d = 1; d <= k; ++d)
        if (k % d == 0)
          divisor_sum += d * nc.aperiodic[static_cast<std::size_t>(d - 1)];
      CHECK(divisor_sum == nc.closed_walks[static_cast<std::size_t>(k - 1)]);
    }
  }

  SUBCASE("growth rate within two percent of the spectral radius") {
    TransitionMatrix M = parse_transition_matrix("2 1\n1 1");
    NecklaceCensus nc = necklace_count(M, 12);
    double target = std::log(perron_root(M));
    CHECK(std::abs(nc.fit.a - target) <= 0.02 * target);
    // the raw cumulative exponent converges from below at the 2 log k / k scale
    double raw = std::log(static_cast<double>(nc.cumulative[11])) / 12.0;
    CHECK(raw <= target);
    CHECK(raw >= target - 2.0 * std::log(12.0) / 12.0);
  }

  SUBCASE("budget guard") {
    CHECK_THROWS_AS((void)necklace_count(parse_transition_matrix("2 1\n1 1"), 21),
                    LabError);
  }
}

TEST_CASE("suspension periods with the unit roof") {
  NecklaceCensus nc = necklace_count(parse_transition_matrix("2 1\n1 1"), 8);
  SuspensionPeriods table = suspension_periods(nc);
  REQUIRE(table.counts.size() == 8);
  CHECK(table.counts[4].first == doctest::Approx(5.0));
  for (int k = 1; k <= 8; ++k)
    CHECK(table.counts[static_cast<std::size_t>(k - 1)].second ==
          nc.cumulative[static_cast<std::size_t>(k - 1)]);
  CHECK(table.fit.a == doctest::Approx(nc.fit.a).epsilon(1e-12));
}

TEST_CASE("mapping torus equivariance") {
  MappingTorusModel model;
  model.monodromy << 2, 1, 1, 1;

  SUBCASE("degenerate form parameter is flagged") {
    MappingTorusModel bad = model;
    bad.eps_form = 0.0;
    CHECK_THROWS_AS(validate_model(bad), LabError);
  }

  SUBCASE("pullback invariance and the flat normal form") {
    EquivarianceReport rep = check_equivariance(model, 500, 71);
    CHECK(rep.max_pullback_err < 1e-9);
    CHECK(rep.max_flat_err < 1e-12);
    CHECK(rep.max_reeb_dt_err < 1e-9);
    CHECK(rep.min_contact_volume > 0.0);
  }

  SUBCASE("flat strips carry the exact product form") {
    // below the ramp the form is dt + eps * beta with beta = x dy
    Eigen::Vector3d low = model.form(0.005, Eigen::Vector2d(0.3, 0.7));
    CHECK(low(0) == 1.0);
    CHECK(low(1) == doctest::Approx(0.0));
    CHECK(low(2) == doctest::Approx(model.eps_form * 0.3));
    // above it the primitive is pulled back through the monodromy once
    Eigen::Vector3d high = model.form(0.5, Eigen::Vector2d(0.3, 0.7));
    Eigen::Vector2d image = model.monodromy * Eigen::Vector2d(0.3, 0.7);
    CHECK(high(1) == doctest::Approx(model.eps_form * image.x()));
    CHECK(high(2) == doctest::Approx(model.eps_form * image.x()));
  }
}
