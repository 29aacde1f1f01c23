#include <doctest.h>

#include <cmath>

#include "reeblab/census.hpp"
#include "reeblab/oracles.hpp"
#include "test_support.hpp"

using namespace reeblab;

TEST_CASE("handle classes match the brute-force cyclic-word oracle") {
  const auto& s = testing::default_surface();
  for (int handle : {1, 2}) {
    for (int len : {3, 8}) {
      auto records = enumerate_handle_classes(s, handle, len);
      auto expected = oracle::free_cyclic_classes(handle, len);
      REQUIRE(records.size() == expected.size());
      for (const auto& rec : records) {
        bool found = false;
        for (const auto& e : expected) found = found || e == rec.cyclic_word;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("census horizon and counting") {
  const auto& s = testing::default_surface();

  SUBCASE("empty below the systole") {
    auto census = enumerate_classes(s, 1.5, {});
    CHECK(census.records.empty());
    CHECK(census.count_n(1.0) == 0);
  }

  SUBCASE("counts at the systole") {
    // within one handle the two generators realize the shortest geodesics
    auto records = enumerate_handle_classes(s, 1, 4);
    double systole = 2.0 * std::acosh(1.5);
    std::size_t at_systole = 0;
    for (const auto& r : records)
      if (r.length <= systole + 1e-9) ++at_systole;
    CHECK(at_systole == 2);
  }

  SUBCASE("monotone counts and orbit bound") {
    auto census = enumerate_classes(s, 6.0, {});
    std::size_t prev = 0;
    for (double t = 2.0; t <= 6.0; t += 0.5) {
      std::size_t n = census.count_n(t);
      CHECK(n >= prev);
      CHECK(census.count_p(t) >= n);
      prev = n;
    }
    CHECK_THROWS_AS((void)census.count_n(7.0), LabError);
  }

  SUBCASE("stability under a wider word ball") {
    auto base = enumerate_classes(s, 6.0, {});
    CensusOptions wide;
    wide.extra_margin = 2;
    wide.node_budget = 120000000;
    auto check = enumerate_classes(s, 6.0, wide);
    CHECK(base.records.size() == check.records.size());
    CHECK(base.count_n(6.0) == check.count_n(6.0));
  }
}

TEST_CASE("growth fits") {
  SUBCASE("planted exponential count") {
    // records placed so that N(T) = floor(exp(0.7 T)) on the window
    CensusTable synthetic;
    synthetic.t_max = 9.5;
    for (int c = 1; c <= static_cast<int>(std::exp(0.7 * 9.2)); ++c) {
      ConjugacyClassRecord rec;
      rec.length = std::log(static_cast<double>(c)) / 0.7;
      synthetic.records.push_back(rec);
    }
    GrowthFit fit = fit_growth(synthetic, 4.0, 9.0, 0.25);
    CHECK(fit.a > 0.68);
    CHECK(fit.a < 0.72);
  }

  SUBCASE("constant counts give zero slope") {
    CensusTable synthetic;
    synthetic.t_max = 10.0;
    for (int i = 0; i < 5; ++i) {
      ConjugacyClassRecord rec;
      rec.length = 0.5;
      synthetic.records.push_back(rec);
    }
    GrowthFit fit = fit_growth(synthetic, 2.0, 9.0, 1.0);
    CHECK(std::abs(fit.a) < 1e-6);
  }

  SUBCASE("insufficient data is reported") {
    CensusTable synthetic;
    synthetic.t_max = 10.0;
    CHECK_THROWS_AS((void)fit_growth(synthetic, 2.0, 9.0, 1.0), LabError);
  }

  SUBCASE("default surface rate and super-linearity") {
    const auto& s = testing::default_surface();
    auto census = enumerate_classes(s, 8.0, {});
    GrowthFit fit = fit_growth(census, 4.0, 8.0);
    CHECK(fit.a > 0.5);
    CHECK(fit.a < 1.1);
    double ratio = static_cast<double>(census.count_n(8.0)) /
                   static_cast<double>(census.count_n(6.0));
    CHECK(ratio > std::exp(0.5 * 2.0));
  }
}

TEST_CASE("subsurface filtering") {
  const auto& s = testing::default_surface();
  auto census = enumerate_classes(s, 6.0, {});

  // the boundary class is never in a filtered table
  for (Side side : {Side::S1, Side::S2}) {
    auto sub = filter_subsurface(census, side);
    for (const auto& r : sub.records) {
      CHECK(r.side == side);
      CHECK(!r.boundary_parallel);
    }
  }

  // generator a belongs to the first handle
  CHECK(conjugate_into_handle(s.group(), parse_word("a"), 1));
  CHECK(!conjugate_into_handle(s.group(), parse_word("a"), 2));
  CHECK(is_boundary_parallel(s.group(), parse_word("abAB")));
  CHECK(is_boundary_parallel(s.group(), parse_word("abABabAB")));
  CHECK(!is_boundary_parallel(s.group(), parse_word("ab")));

  // membership agrees with a conjugator search against handle classes of
  // the same holonomy trace
  auto handle1 = enumerate_handle_classes(s, 1, 6);
  for (const auto& r : census.records) {
    if (r.length > 5.0) continue;
    bool via_oracle = false;
    for (const auto& h : handle1) {
      if (std::abs(h.trace - r.trace) > 1e-6) continue;
      if (oracle::conjugate_by_search(s.group(), r.cyclic_word, h.cyclic_word, 4) ||
          oracle::conjugate_by_search(s.group(), inverse(r.cyclic_word),
                                      h.cyclic_word, 4))
        via_oracle = true;
    }
    bool via_filter = r.side == Side::S1;
    CHECK(via_filter == via_oracle);
  }
}
