#include <doctest.h>

#include "reeblab/oracles.hpp"
#include "reeblab/surgery.hpp"
#include "test_support.hpp"

using namespace reeblab;

TEST_CASE("parameter validation") {
  SUBCASE("the fibre-width bound") {
    SurgeryParams p;
    p.q = 2;
    p.eta = 0.1;
    CHECK(p.epsilon_max() == doctest::Approx(0.1 / (8.0 * kPi)).epsilon(1e-12));
    p.epsilon = 0.003;
    ParamReport rep = validate_params(p);
    CHECK(rep.ok);
    CHECK(rep.sup_dt_r < 1.0);

    p.epsilon = 2.0 * p.epsilon_max();
    CHECK_THROWS_AS((void)validate_params(p), LabError);
  }

  SUBCASE("surgery-free case") {
    SurgeryParams p;
    p.q = 0;
    p.epsilon = 0.05;
    CHECK(validate_params(p).ok);
    TwistData twist(p);
    for (double w = -0.09; w <= 0.09; w += 0.01) {
      CHECK(twist.f(w) == 0.0);
      CHECK(twist.r(0.0, w) == 0.0);
    }
  }

  SUBCASE("profile contracts") {
    RampProfile ramp;
    CHECK(ramp.height() <= 4.0);
    CHECK(ramp.value(-1.0) == 0.0);
    CHECK(ramp.value(1.0) == doctest::Approx(kTwoPi).epsilon(1e-12));
    for (double x = -1.0; x <= 1.0; x += 0.01) {
      CHECK(ramp.deriv(x) >= 0.0);
      CHECK(ramp.deriv(x) <= 4.0 + 1e-12);
      CHECK(ramp.deriv(x) == doctest::Approx(ramp.deriv(-x)).epsilon(1e-14));
    }
    CollarProfile beta;
    beta.eta = 0.1;
    CHECK(beta.max_abs_deriv() <= kPi / beta.eta);
    CHECK(beta.value(0.2) == 1.0);
    CHECK(beta.value(-0.2) == 1.0);
    CHECK(beta.value(0.3) == 0.0);
  }
}

TEST_CASE("twist data") {
  SurgeryParams p;  // q = 1 defaults
  TwistData twist(p);

  SUBCASE("shear is locked outside the core") {
    CHECK(twist.f(-2.0 * p.epsilon) == 0.0);
    CHECK(twist.f(-p.epsilon) == 0.0);
    CHECK(twist.f(p.epsilon) == doctest::Approx(-kTwoPi));
    CHECK(twist.f(2.0 * p.epsilon) == doctest::Approx(-kTwoPi));
    // twist integral vanishes off the core by the even symmetry
    CHECK(twist.twist_integral(-1.5 * p.epsilon) == 0.0);
    CHECK(std::abs(twist.twist_integral(1.5 * p.epsilon)) < 1e-15);
    CHECK(std::abs(twist.twist_integral(2.0 * p.epsilon)) < 1e-15);
  }

  SUBCASE("half shear at the centre") {
    CHECK(twist.f(0.0) == doctest::Approx(-kPi).epsilon(1e-12));
    // quadrature of the ramp derivative is the independent route
    double quad = 0.0;
    int n = 200000;
    for (int i = 0; i < n; ++i) {
      double x = -1.0 + (i + 0.5) / n;
      quad += twist.ramp.deriv(x) / n;
    }
    CHECK(twist.f(0.0) == doctest::Approx(-quad).epsilon(1e-8));
  }
}

TEST_CASE("box traversal closed form") {
  SUBCASE("no surgery, no delay") {
    SurgeryParams p;
    p.q = 0;
    p.epsilon = 0.01;
    TwistData twist(p);
    BoxTraverseResult res = box_traverse(1.0, 0.005, twist, p);
    CHECK(res.s_out == doctest::Approx(1.0));
    CHECK(res.tau == doctest::Approx(6.0 * p.eta));
  }

  SUBCASE("edge of the fibre window") {
    SurgeryParams p;
    TwistData twist(p);
    BoxTraverseResult res = box_traverse(0.3, -2.0 * p.epsilon, twist, p);
    CHECK(res.s_out == doctest::Approx(0.3));
    CHECK(res.tau == doctest::Approx(6.0 * p.eta));
  }

  SUBCASE("matches quadrature across coefficients") {
    for (int q : {-3, -1, 1, 2, 3}) {
      SurgeryParams p;
      p.q = q;
      p.epsilon = 0.9 * p.epsilon_max();
      TwistData twist(p);
      for (int i = 0; i < 25; ++i) {
        double w = -2.0 * p.epsilon + 4.0 * p.epsilon * (i + 0.5) / 25.0;
        BoxTraverseResult res = box_traverse(0.0, w, twist, p);
        double tau = oracle::box_time_quadrature(twist, p, w);
        CHECK(std::abs(tau - res.tau) < 1e-8);
      }
    }
  }
}

TEST_CASE("collar chart") {
  const auto& s = testing::default_surface();
  SurgeryParams p;
  ChartMap chart(s, p);

  SUBCASE("the zero section is the Legendrian lift") {
    for (double sc : {0.0, 1.3, 4.4}) {
      UnitTangentFrame u = chart.frame(0.0, sc, 0.0);
      CHECK(std::abs(u.base_point() - Complex(0.0, std::exp(sc * chart.scale()))) <
            1e-12);
      CHECK(std::abs(u.direction_angle()) < 1e-12);
    }
  }

  SUBCASE("round trip") {
    Rng rng(37);
    std::uniform_real_distribution<double> ut(-0.29, 0.29), us(0.0, kTwoPi),
        uw(-0.0059, 0.0059);
    for (int i = 0; i < 500; ++i) {
      double t = ut(rng), sc = us(rng), w = uw(rng);
      auto c = chart.coords_checked(chart.frame(t, sc, w));
      CHECK(std::abs(c.t - t) < 1e-9);
      CHECK(std::abs(wrap_angle(c.s - sc)) < 1e-9);
      CHECK(std::abs(c.w - w) < 1e-9);
    }
  }

  SUBCASE("frames away from the wall are rejected") {
    // direction along the axis: the geodesic never crosses it
    UnitTangentFrame parallel = frame_from(Complex(0.0, 1.0), kPi / 2.0);
    CHECK_THROWS_AS((void)chart.coords_checked(parallel), LabError);
  }
}

TEST_CASE("hybrid flow") {
  const auto& s = testing::default_surface();

  SUBCASE("q = 0 reproduces the geodesic flow") {
    SurgeryParams p0;
    p0.q = 0;
    SurgeredFlow flow(s, p0);
    Rng rng(41);
    FlowOptions fo;
    fo.record_samples = false;
    for (int i = 0; i < 20; ++i) {
      UnitTangentFrame seed = random_frame(s, rng);
      UnitTangentFrame seed_red = seed;
      s.reduce_frame(seed_red);
      Trajectory t = flow.flow(seed, 20.0, fo);
      UnitTangentFrame ref = geodesic_step(seed_red, 20.0);
      // identical products: the anchor representation is untouched
      CHECK(t.exact_endpoint().frame.dist_to(ref.frame) < 1e-12);
    }
  }

  SUBCASE("wall seed scatters once with the half shear") {
    SurgeryParams p;  // q = 1
    SurgeredFlow flow(s, p);
    ChartMap chart(s, p);
    UnitTangentFrame seed = chart.frame(-0.31, 2.0, 0.0);
    Trajectory t = flow.flow(seed, 1.0, {});
    REQUIRE(t.count(EventKind::BoxEntry) == 1);
    REQUIRE(t.count(EventKind::BoxExit) == 1);
    REQUIRE(t.count(EventKind::TorusCrossing) == 1);
    const TrajectoryEvent* entry = nullptr;
    const TrajectoryEvent* exit = nullptr;
    const TrajectoryEvent* cross = nullptr;
    for (const auto& e : t.events) {
      if (e.kind == EventKind::BoxEntry) entry = &e;
      if (e.kind == EventKind::BoxExit) exit = &e;
      if (e.kind == EventKind::TorusCrossing) cross = &e;
    }
    TwistData twist(p);
    CHECK(std::abs(wrap_angle(exit->s_out - exit->s - twist.f(entry->w))) < 1e-9);
    // entry at the wall, exit after the closed-form Reeb time
    double iw = twist.twist_integral(entry->w);
    CHECK(exit->time - entry->time ==
          doctest::Approx(6.0 * p.eta + 2.0 * iw).epsilon(1e-10));
    CHECK(cross->time - entry->time ==
          doctest::Approx(3.0 * p.eta + iw).epsilon(1e-10));
    CHECK(cross->direction == +1);
  }

  SUBCASE("no events away from the collar") {
    SurgeryParams p;
    SurgeredFlow flow(s, p);
    // a short run from the first handle's systole stays clear
    Mobius a = s.generator(1);
    AxisEndpoints e = axis_endpoints(a);
    double c = 0.5 * (*e.repelling + *e.attracting);
    double r = 0.5 * std::abs(*e.attracting - *e.repelling);
    UnitTangentFrame seed = frame_from(Complex(c, r), 0.0);
    Trajectory t = flow.flow(seed, 0.5, {});
    CHECK(t.events.empty());
  }

  SUBCASE("backward flow undoes the forward flow through the box") {
    SurgeryParams p;
    SurgeredFlow flow(s, p);
    ChartMap chart(s, p);
    Rng rng(43);
    std::uniform_real_distribution<double> us(0.0, kTwoPi), uw(-0.005, 0.005);
    FlowOptions fo;
    fo.record_samples = false;
    int traversals = 0;
    for (int i = 0; i < 10; ++i) {
      UnitTangentFrame seed = chart.frame(-1.0, us(rng), uw(rng));
      Trajectory fwd = flow.flow(seed, 4.0, fo);
      traversals += static_cast<int>(fwd.count(EventKind::BoxExit));
      Trajectory bwd = flow.flow(fwd.exact_endpoint(), -fwd.total_time, fo);
      UnitTangentFrame back = bwd.exact_endpoint();
      s.reduce_frame(back);
      UnitTangentFrame seed_red = seed;
      s.reduce_frame(seed_red);
      double best = 1e9;
      for (const auto& [g, w] : s.near_deck(1.0))
        best = std::min(best, (g * back.frame).dist_to(seed_red.frame));
      CHECK(best / fwd.total_time < 1e-7);
    }
    CHECK(traversals >= 8);  // the seeds were aimed at the box
  }
}

TEST_CASE("periodic orbits") {
  const auto& s = testing::default_surface();
  SurgeryParams p;  // q = 1
  SurgeredFlow flow(s, p);
  auto census = enumerate_classes(s, 6.0, {});

  OrbitSearchOptions opts;
  opts.seeds = 0;
  auto orbits = find_periodic_orbits(flow, census.records, opts, nullptr);

  SUBCASE("handle generator keeps its exact period") {
    bool found = false;
    for (const auto& o : orbits) {
      if (!o.census_word || word_to_string(*o.census_word) != "A") continue;
      found = true;
      CHECK(o.period == doctest::Approx(2.0 * std::acosh(1.5)).epsilon(1e-14));
      CHECK(o.avoids_box);
      CHECK(o.residual < 1e-8);
    }
    CHECK(found);
  }

  SUBCASE("the separating orbits survive with their period") {
    int torus_orbits = 0;
    for (const auto& o : orbits) {
      if (!o.on_torus || !o.census_word) continue;
      if (inverse(*o.census_word) == *o.census_word) continue;
      if (o.period < 3.0) {
        CHECK(o.period == doctest::Approx(s.separating_length()).epsilon(1e-12));
        ++torus_orbits;
      }
    }
    CHECK(torus_orbits == 2);
  }

  SUBCASE("close returns at q = 0 land on census lengths") {
    SurgeryParams p0;
    p0.q = 0;
    SurgeredFlow flow0(s, p0);
    auto full = enumerate_classes(s, 8.0, {});
    OrbitSearchOptions ro;
    ro.seeds = 6;
    ro.search_time = 30.0;
    ro.rng_seed = 5;
    auto found = find_periodic_orbits(flow0, {}, ro, nullptr);
    CHECK(found.size() >= 1);
    for (const auto& o : found) {
      double best = 1e9;
      for (const auto& r : full.records)
        for (int k = 1; k * r.length < o.period + 1.0 && k <= 6; ++k)
          best = std::min(best, std::abs(o.period - k * r.length));
      CHECK(best < 1e-6);
    }
  }
}
