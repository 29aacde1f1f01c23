#include <doctest.h>

#include "reeblab/mobius.hpp"
#include "reeblab/oracles.hpp"
#include "test_support.hpp"

using namespace reeblab;

TEST_CASE("composition basics") {
  Mobius m(2, 1, 1, 1);
  CHECK(( Mobius::identity() * m).dist_to(m) == doctest::Approx(0.0));
  CHECK((m * m.inverse()).dist_to(Mobius::identity()) < 1e-15);

  // hand-multiplied square
  Mobius sq = m * m;
  CHECK(sq.dist_to(Mobius(5, 3, 3, 2)) < 1e-15);

  Rng rng(3);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 4.0),
      ua(0.0, kTwoPi);
  auto random_isometry = [&]() {
    return Mobius::point_translation(Complex(ux(rng), uy(rng))) *
           Mobius::rotation(ua(rng));
  };
  for (int i = 0; i < 50; ++i) {
    Mobius a = random_isometry(), b = random_isometry(), c = random_isometry();
    CHECK(((a * b) * c).dist_to(a * (b * c)) < 1e-12);
  }
}

TEST_CASE("classification is a function of the trace") {
  CHECK(classify(Mobius(2, 1, 1, 1)) == IsometryKind::Hyperbolic);
  CHECK(classify(Mobius(1, 1, 0, 1)) == IsometryKind::Parabolic);
  CHECK(classify(Mobius::rotation(1.0)) == IsometryKind::Elliptic);
}

TEST_CASE("translation length") {
  Mobius m(2, 1, 1, 1);
  double len = translation_length(m);
  CHECK(len == doctest::Approx(2.0 * std::acosh(1.5)).epsilon(1e-14));

  // displacement oracle: move a point of the axis and measure
  CHECK(std::abs(len - oracle::axis_displacement_length(m)) < 1e-12);

  CHECK_THROWS_AS((void)translation_length(Mobius::identity()), LabError);

  // power law
  Mobius p = m;
  for (int n = 2; n <= 5; ++n) {
    p = p * m;
    CHECK(translation_length(p) == doctest::Approx(n * len).epsilon(1e-12));
  }

  // conjugation invariance
  Rng rng(5);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int i = 0; i < 100; ++i) {
    Mobius g(1.5 + u(rng), u(rng), u(rng), 1.0 + 0.2 * u(rng));
    Mobius conj = g * m * g.inverse();
    CHECK(std::abs(translation_length(conj) - len) < 1e-10);
  }
}

TEST_CASE("frames and geodesic flow") {
  UnitTangentFrame u = frame_from(Complex(0.4, 2.3), 1.1);
  CHECK(std::abs(u.base_point() - Complex(0.4, 2.3)) < 1e-10);
  CHECK(std::abs(u.direction_angle() - 1.1) < 1e-10);

  SUBCASE("zero time is the identity") {
    CHECK(geodesic_step(u, 0.0).frame.dist_to(u.frame) == 0.0);
  }

  SUBCASE("identity frame flows by the diagonal subgroup") {
    UnitTangentFrame id{Mobius::identity(), ChartTag::Bundle};
    UnitTangentFrame moved = geodesic_step(id, 0.8);
    CHECK(moved.frame.dist_to(Mobius(std::exp(0.4), 0, 0, std::exp(-0.4))) < 1e-15);
  }

  SUBCASE("flow property and distance exactness") {
    Rng rng(7);
    std::uniform_real_distribution<double> ut(-3.0, 3.0);
    for (int i = 0; i < 30; ++i) {
      double s = ut(rng), t = ut(rng);
      UnitTangentFrame a = geodesic_step(geodesic_step(u, s), t);
      UnitTangentFrame b = geodesic_step(u, s + t);
      CHECK(a.frame.dist_to(b.frame) < 1e-12);
    }
    for (double t : {0.5, 3.0, 20.0, 100.0}) {
      UnitTangentFrame moved = geodesic_step(u, t);
      CHECK(std::abs(hyp_distance(u.base_point(), moved.base_point()) - t) < 1e-10);
    }
  }

  SUBCASE("closed geodesic returns after one period") {
    const auto& surface = testing::default_surface();
    Mobius a = surface.generator(1);
    AxisEndpoints e = axis_endpoints(a);
    double c = 0.5 * (*e.repelling + *e.attracting);
    double r = 0.5 * std::abs(*e.attracting - *e.repelling);
    UnitTangentFrame on_axis =
        frame_from(Complex(c, r), *e.attracting > *e.repelling ? 0.0 : kPi);
    UnitTangentFrame flowed = geodesic_step(on_axis, translation_length(a));
    // the deck element a^-1 carries the flowed frame back to the start
    CHECK((a.inverse() * flowed.frame).dist_to(on_axis.frame) < 1e-9);
  }
}

TEST_CASE("projective model round trips") {
  Rng rng(11);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.1, 5.0);
  for (int i = 0; i < 200; ++i) {
    Complex z(ux(rng), uy(rng));
    Complex back = from_klein(to_klein(z));
    CHECK(std::abs(z - back) < 1e-10 * (1.0 + std::abs(z)));
  }
}
