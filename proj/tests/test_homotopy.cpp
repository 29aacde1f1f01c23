#include <doctest.h>

#include "reeblab/homotopy.hpp"
#include "test_support.hpp"

using namespace reeblab;

namespace {

const SurgeredFlow& default_flow() {
  static const SurgeredFlow flow(testing::default_surface(), SurgeryParams{});
  return flow;
}

UnitTangentFrame axis_seed(const FuchsianSurface& s, const Word& w) {
  Mobius m = s.evaluate(w);
  AxisEndpoints e = axis_endpoints(m);
  double c = 0.5 * (*e.repelling + *e.attracting);
  double r = 0.5 * std::abs(*e.attracting - *e.repelling);
  return frame_from(Complex(c, r), *e.attracting > *e.repelling ? 0.0 : kPi);
}

}  // namespace

TEST_CASE("word recording") {
  const auto& s = testing::default_surface();
  SurgeryParams p0;
  p0.q = 0;
  SurgeredFlow flow(s, p0);

  SUBCASE("closed geodesics record their class") {
    auto census = enumerate_classes(s, 5.0, {});
    int checked = 0;
    for (const auto& r : census.records) {
      if (r.boundary_parallel || checked >= 8) continue;
      UnitTangentFrame seed = axis_seed(s, r.cyclic_word);
      Trajectory t = flow.flow(seed, r.length, {});
      Word recorded = record_word(t);
      // the recorded deck word lies in the class of the census word, up to
      // orientation
      bool ok = s.group().conjugate(recorded, r.cyclic_word) ||
                s.group().conjugate(recorded, inverse(r.cyclic_word));
      CHECK(ok);
      ++checked;
    }
    CHECK(checked >= 6);
  }

  SUBCASE("short arcs inside the domain record nothing") {
    UnitTangentFrame seed = frame_from(s.base_point(), 0.3);
    Trajectory t = flow.flow(seed, 0.05, {});
    CHECK(record_word(t).empty());
  }

  SUBCASE("out and back is contractible") {
    Rng rng(47);
    for (int i = 0; i < 5; ++i) {
      UnitTangentFrame seed = random_frame(s, rng);
      Trajectory fwd = flow.flow(seed, 4.0, {});
      Trajectory bwd = flow.flow(fwd.exact_endpoint(), -4.0, {});
      Word loop = free_reduce(concat(record_word(fwd), record_word(bwd)));
      CHECK(s.group().is_trivial(loop));
    }
  }

  SUBCASE("base-point independence along a closed orbit") {
    auto census = enumerate_classes(s, 5.0, {});
    const ConjugacyClassRecord* pick = nullptr;
    for (const auto& r : census.records)
      if (!r.boundary_parallel && r.length > 3.0) pick = &r;
    REQUIRE(pick != nullptr);
    UnitTangentFrame seed = axis_seed(s, pick->cyclic_word);
    Word reference = record_word(flow.flow(seed, pick->length, {}));
    for (int k = 1; k <= 6; ++k) {
      UnitTangentFrame shifted = geodesic_step(seed, 0.13 * k);
      Word w = record_word(flow.flow(shifted, pick->length, {}));
      CHECK(s.group().conjugate(w, reference));
    }
  }
}

TEST_CASE("conjugacy dispatcher") {
  CHECK(conjugate_eq(parse_word("ab"), parse_word("ba"), nullptr));
  CHECK(!conjugate_eq(parse_word("a"), parse_word("b"), nullptr));
  SurfaceGroup g;
  CHECK(conjugate_eq(parse_word("abAB"), parse_word("dcDC"), &g));
}

TEST_CASE("orbit classification") {
  const auto& s = testing::default_surface();
  const SurgeredFlow& flow = default_flow();
  double delta = flow.params().delta;
  FlowOptions fo;
  fo.sample_dt = 0.0125;

  SUBCASE("one-sided class") {
    UnitTangentFrame seed = axis_seed(s, parse_word("ab"));
    Trajectory t =
        flow.flow(seed, translation_length(s.evaluate(parse_word("ab"))), fo);
    OrbitClass cls = surgered_class(s, t, delta);
    CHECK(!cls.has_crossings);
    CHECK(cls.side == Side::S1);
    CHECK(!cls.tangent_to_torus);
    CHECK(!is_contractible(cls));
  }

  SUBCASE("separating orbits carry the tangency flag") {
    UnitTangentFrame seed = frame_from(Complex(0.0, 1.0), kPi / 2.0);
    Trajectory t = flow.flow(seed, s.separating_length(), fo);
    OrbitClass cls = surgered_class(s, t, delta);
    CHECK(!cls.has_crossings);
    CHECK(cls.tangent_to_torus);
    CHECK(!is_contractible(cls));
  }

  SUBCASE("crossing classes alternate and stay essential") {
    auto census = enumerate_classes(s, 7.0, {});
    int classified = 0;
    for (const auto& r : census.records) {
      if (r.side != Side::Crossing || classified >= 4) continue;
      UnitTangentFrame seed = axis_seed(s, r.cyclic_word);
      Trajectory probe;
      try {
        probe = flow.flow(seed, r.length, fo);
      } catch (const LabError&) {
        continue;  // the geodesic runs through the removed core
      }
      if (probe.count(EventKind::BoxEntry) > 0) continue;  // scattered class
      OrbitClass cls = surgered_class(s, probe, delta);
      REQUIRE(cls.has_crossings);
      CHECK(cls.sequence.crossing_count() % 2 == 0);
      CHECK(cls.sequence.crossing_count() >= 2);
      for (const auto& arc : cls.sequence.arcs) CHECK(arc.nontrivial);
      CHECK(!is_contractible(cls));

      // discrete stability: a nearby start yields the same sequence
      UnitTangentFrame nudged = geodesic_step(seed, delta / 20.0);
      OrbitClass again = surgered_class(s, flow.flow(nudged, r.length, fo), delta);
      REQUIRE(again.has_crossings);
      CHECK(crossing_sequences_equal(cls.sequence, again.sequence));
      ++classified;
    }
    CHECK(classified >= 2);
  }

  SUBCASE("boxed orbit crosses through the surgery") {
    // aim a trajectory through the box and classify a synthetic closed run
    ChartMap chart(s, flow.params());
    UnitTangentFrame seed = chart.frame(-0.4, 1.0, 0.001);
    Trajectory t = flow.flow(seed, 8.0, fo);
    if (t.count(EventKind::TorusCrossing) >= 2) {
      // classification of non-closed runs is outside the contract, but the
      // event stream itself must alternate
      int last = 0;
      for (const auto& e : t.events) {
        if (e.kind != EventKind::TorusCrossing) continue;
        if (last != 0) CHECK(e.direction == -last);
        last = e.direction;
      }
    }
  }
}

TEST_CASE("contractibility rules") {
  OrbitClass empty;
  empty.word = Word{};
  CHECK(is_contractible(empty));

  OrbitClass one_sided;
  one_sided.word = parse_word("a");
  CHECK(!is_contractible(one_sided));

  OrbitClass crossing;
  crossing.has_crossings = true;
  crossing.sequence.arcs.resize(2);
  CHECK(!is_contractible(crossing));
}

TEST_CASE("flat torus counterexample") {
  auto [a, b] = torus_counterexample(0.05);
  double d = torus_sup_distance(a, b);
  CHECK(d < 0.05);
  CHECK(a.winding != b.winding);
  CHECK(a.primitive());
  CHECK(b.primitive());

  auto [c, e] = torus_counterexample(0.005);
  double d2 = torus_sup_distance(c, e);
  CHECK(d2 < 0.005);
  CHECK(d / d2 >= 5.0);
}
