#include <doctest.h>

#include "reeblab/entropy.hpp"
#include "test_support.hpp"

using namespace reeblab;

TEST_CASE("phase metric") {
  const auto& s = testing::default_surface();
  PhaseMetric metric(s, 2.0);
  Rng rng(53);

  SUBCASE("symmetry and triangle inequality on sampled triples") {
    std::vector<UnitTangentFrame> pts;
    for (int i = 0; i < 30; ++i) {
      UnitTangentFrame u = random_frame(s, rng);
      s.reduce_frame(u);
      pts.push_back(u);
    }
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto& a = pts[pick(rng)];
      const auto& b = pts[pick(rng)];
      const auto& c = pts[pick(rng)];
      double ab = metric(a, b), ba = metric(b, a);
      CHECK(std::abs(ab - ba) < 1e-9);
      CHECK(metric(a, c) <= ab + metric(b, c) + 1e-9);
    }
  }

  SUBCASE("agrees with base distance along the flow") {
    UnitTangentFrame u = random_frame(s, rng);
    s.reduce_frame(u);
    for (double t : {0.01, 0.05, 0.2}) {
      UnitTangentFrame v = geodesic_step(u, t);
      double d = metric(u, v);
      CHECK(d == doctest::Approx(t).epsilon(0.02));
    }
  }

  SUBCASE("deck moves do not change the quotient distance") {
    UnitTangentFrame u = random_frame(s, rng);
    s.reduce_frame(u);
    UnitTangentFrame v = geodesic_step(u, 0.3);
    double base = metric(u, v);
    UnitTangentFrame moved{s.generator(2) * v.frame, ChartTag::Bundle};
    CHECK(metric(u, moved) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("greedy separated sets") {
  const auto& s = testing::default_surface();

  SUBCASE("single seed") {
    BowenOptions opts;
    opts.sample_budget = 1;
    SeparatedSetResult res = bowen_count(s, 2.0, 0.1, opts);
    CHECK(res.n == 1);
  }

  SUBCASE("two distant seeds both admitted") {
    BowenOptions opts;
    opts.sample_budget = 2;
    opts.ball_radius = 0.06;
    opts.rng_seed = 9;
    // delta far below the typical seed spacing inside the ball
    SeparatedSetResult res = bowen_count(s, 1.0, 0.01, opts);
    CHECK(res.n == 2);
    CHECK(verify_separated_set(s, res));
  }

  SUBCASE("certificates and monotonicity in delta") {
    BowenOptions opts;
    opts.sample_budget = 400;
    opts.rng_seed = 4;
    std::vector<double> deltas{0.2, 0.1};
    BowenLab lab(s, 5.0, deltas, opts);
    SeparatedSetResult coarse = lab.count(5.0, 0.2);
    SeparatedSetResult fine = lab.count(5.0, 0.1);
    CHECK(fine.n >= coarse.n);
    CHECK(lab.verify(coarse));
    CHECK(lab.verify(fine));
  }
}

TEST_CASE("slope fits") {
  SUBCASE("planted exponential") {
    std::vector<BowenGridEntry> grid;
    for (double t = 2.0; t <= 7.0; t += 1.0)
      grid.push_back({t, 0.1, static_cast<std::size_t>(std::llround(std::exp(0.9 * t)))});
    GrowthFit fit = h_delta_fit(grid, 0.1);
    CHECK(fit.a == doctest::Approx(0.9).epsilon(0.03));
  }

  SUBCASE("constant counts") {
    std::vector<BowenGridEntry> grid;
    for (double t = 2.0; t <= 7.0; t += 1.0) grid.push_back({t, 0.1, 17});
    GrowthFit fit = h_delta_fit(grid, 0.1);
    CHECK(std::abs(fit.a) < 1e-9);
  }

  SUBCASE("default surface entropy in the expected window") {
    const auto& s = testing::default_surface();
    BowenOptions opts;
    opts.sample_budget = 900;
    std::vector<double> tg{3, 4, 5, 6}, dg{0.1};
    EntropyEstimate est = estimate_entropy(s, tg, dg, opts);
    CHECK(est.h_top_estimate > 0.6);
    CHECK(est.h_top_estimate < 1.3);
  }
}

TEST_CASE("orbit-built separated sets") {
  const auto& s = testing::default_surface();
  auto census = enumerate_classes(s, 6.5, {});
  std::vector<OrbitSeparationInput> inputs;
  double horizon = 0.0;
  for (const auto& r : census.records) {
    if (r.boundary_parallel || inputs.size() >= 55) continue;
    Mobius m = s.evaluate(r.cyclic_word);
    AxisEndpoints e = axis_endpoints(m);
    if (!e.repelling || !e.attracting) continue;
    OrbitSeparationInput in;
    double c = 0.5 * (*e.repelling + *e.attracting);
    double rad = 0.5 * std::abs(*e.attracting - *e.repelling);
    in.seed = frame_from(Complex(c, rad), *e.attracting > *e.repelling ? 0.0 : kPi);
    in.period = r.length;
    in.class_word = r.cyclic_word;
    inputs.push_back(in);
    horizon = std::max(horizon, r.length);
  }
  REQUIRE(inputs.size() >= 50);

  SUBCASE("single orbit") {
    std::vector<OrbitSeparationInput> one{inputs[0]};
    SeparatedSetResult res = orbit_separated_set(s, one, inputs[0].period, 0.05);
    CHECK(res.n == 1);
  }

  SUBCASE("class collision is rejected") {
    std::vector<OrbitSeparationInput> dup{inputs[0], inputs[0]};
    CHECK_THROWS_AS(
        (void)orbit_separated_set(s, dup, inputs[0].period, 0.05), LabError);
  }

  SUBCASE("full set is certified") {
    SeparatedSetResult res = orbit_separated_set(s, inputs, horizon, 0.05);
    CHECK(res.n >= 40);
    CHECK(verify_separated_set(s, res));
  }
}

TEST_CASE("component counts") {
  const auto& s = testing::default_surface();
  Complex p = s.base_point();

  SUBCASE("short segments stay in one component") {
    UnitTangentFrame seed = frame_from(p, 0.7);
    ComponentCount c = component_count(s, seed, p, 0.05, 0.1);
    CHECK(c.count <= 1);
  }

  SUBCASE("closed geodesics grow at most linearly") {
    Mobius a = s.generator(1);
    AxisEndpoints e = axis_endpoints(a);
    double c0 = 0.5 * (*e.repelling + *e.attracting);
    double r0 = 0.5 * std::abs(*e.attracting - *e.repelling);
    UnitTangentFrame seed = frame_from(Complex(c0, r0), 0.0);
    double len = translation_length(a);
    std::size_t prev = 0;
    for (int k = 1; k <= 3; ++k) {
      ComponentCount c = component_count(s, seed, p, 0.05, k * len);
      CHECK(c.count >= prev);
      CHECK(c.count <= static_cast<std::size_t>(4 * k + 2));
      prev = c.count;
    }
  }

  SUBCASE("an affine bound covers random trajectories") {
    Rng rng(59);
    double k_hat = 0.0;
    std::vector<ComponentCount> runs;
    for (int i = 0; i < 12; ++i) {
      UnitTangentFrame seed = random_frame(s, rng);
      runs.push_back(component_count(s, seed, p, 0.05, 8.0));
      k_hat = std::max(k_hat, runs.back().rate);
    }
    for (const auto& c : runs)
      CHECK(static_cast<double>(c.count) < k_hat * 8.0 + 1.0 + 1e-9);
  }
}

TEST_CASE("growth-entropy comparison") {
  GrowthFit fit;
  fit.a = 1.5;
  EntropyEstimate est;
  est.h_top_estimate = 0.9;
  CHECK_THROWS_AS((void)check_growth_entropy_bound(fit, est, 0.3), LabError);
  fit.a = 0.8;
  ConsistencyReport rep = check_growth_entropy_bound(fit, est, 0.3);
  CHECK(rep.pass);
}
