#include <doctest.h>

#include "reeblab/surface.hpp"
#include "test_support.hpp"

using namespace reeblab;

TEST_CASE("default genus-2 build") {
  const auto& s = testing::default_surface();

  // Fricke identity fixes the boundary trace of the (3,3,4) handle
  CHECK(FenchelNielsen{}.handle1.boundary_trace() == doctest::Approx(-4.0));
  CHECK(s.separating_length() ==
        doctest::Approx(2.0 * std::acosh(2.0)).epsilon(1e-14));

  // relator vanishes
  CHECK(s.evaluate(s.relator()).dist_to(Mobius::identity()) < 1e-9);

  // separating element is hyperbolic and inverse to the second boundary word
  CHECK(classify(s.separating_axis()) == IsometryKind::Hyperbolic);
  Mobius second = s.evaluate(parse_word("cdCD"));
  CHECK((s.separating_axis() * second).dist_to(Mobius::identity()) < 1e-9);

  CHECK(s.faces().size() >= 12);
  CHECK(s.min_generator_length() == doctest::Approx(2.0 * std::acosh(1.5)));
}

TEST_CASE("bad parameters are rejected") {
  FenchelNielsen fn;
  fn.handle2.tr_ab = 4.5;  // different boundary length
  CHECK_THROWS_AS((void)FuchsianSurface::build(fn), LabError);

  FenchelNielsen flat;
  flat.handle1 = {3.0, 3.0, 3.0};  // boundary trace -2: cusp, not a geodesic
  flat.handle2 = {3.0, 3.0, 3.0};
  CHECK_THROWS_AS((void)FuchsianSurface::build(flat), LabError);
}

TEST_CASE("twisted gluing stays discrete") {
  FenchelNielsen fn;
  fn.twist = 0.61;
  SurfaceOptions opts;
  opts.discreteness_word_len = 8;
  auto s = FuchsianSurface::build(fn, opts);
  CHECK(s.separating_length() == doctest::Approx(2.0 * std::acosh(2.0)));
}

TEST_CASE("domain reduction") {
  const auto& s = testing::default_surface();

  SUBCASE("base point is fixed") {
    auto r = s.reduce_to_domain(s.base_point());
    CHECK(r.word.empty());
    CHECK(std::abs(r.point - s.base_point()) < 1e-12);
  }

  SUBCASE("single deck move is recovered") {
    Complex moved = s.generator(1).apply(s.base_point());
    auto r = s.reduce_to_domain(moved);
    CHECK(word_to_string(r.word) == "a");
    CHECK(std::abs(r.point - s.base_point()) < 1e-9);
  }

  SUBCASE("round trip from far away") {
    Rng rng(23);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi);
    for (int i = 0; i < 10; ++i) {
      // a point at hyperbolic distance 20 in a random direction
      UnitTangentFrame u = frame_from(s.base_point(), ua(rng));
      Complex far = geodesic_step(u, 20.0).base_point();
      auto r = s.reduce_to_domain(far);
      CHECK(s.in_domain(r.point, 1e-9));
      CHECK(std::abs(s.evaluate(r.word).apply(r.point) - far) /
                (1.0 + std::abs(far)) < 1e-9);
      // word length is controlled by distance over systole
      double bound = 4.0 * std::ceil(20.0 / s.systole_lower_bound()) + 8.0;
      CHECK(static_cast<double>(r.word.size()) <= bound);
    }
  }

  SUBCASE("deck equivariance of the reduced point") {
    Rng rng(29);
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), ut(0.0, 3.0);
    for (int i = 0; i < 8; ++i) {
      Complex p =
          geodesic_step(frame_from(s.base_point(), ua(rng)), ut(rng)).base_point();
      auto base = s.reduce_to_domain(p);
      for (Letter l = 1; l <= 4; ++l) {
        auto moved = s.reduce_to_domain(s.generator(l).apply(p));
        CHECK(std::abs(base.point - moved.point) < 1e-9);
      }
    }
  }
}

TEST_CASE("collar chart bijectivity") {
  const auto& s = testing::default_surface();
  FermiChart chart = s.collar_chart(0.05);
  CHECK(chart.period == doctest::Approx(s.separating_length()));
  Rng rng(31);
  std::uniform_real_distribution<double> us(0.0, kTwoPi), ur(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    double sc = us(rng), rho = ur(rng);
    Complex z = chart.to_plane(sc, rho);
    double s2, rho2;
    chart.from_plane(z, s2, rho2);
    CHECK(std::abs(rho2 - rho) < 1e-12);
    CHECK(std::abs(s2 - sc) < 1e-12);
  }
}

TEST_CASE("axis lifts cover the domain neighbourhood") {
  const auto& s = testing::default_surface();
  CHECK(s.axis_lifts().size() >= 3);
  // the imaginary axis itself is among the lifts
  bool found_identity = false;
  for (const auto& lift : s.axis_lifts())
    if (lift.deck.dist_to(Mobius::identity()) < 1e-12) found_identity = true;
  CHECK(found_identity);
  // distance to the lifts vanishes on the axis
  CHECK(s.distance_to_separating_lifts(Complex(0.0, 1.3)) < 1e-12);
}
