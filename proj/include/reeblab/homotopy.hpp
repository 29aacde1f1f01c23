#pragma once

#include <Eigen/Dense>

#include "reeblab/surgery.hpp"

namespace reeblab {

// Deck word recorded along a trajectory: the transformation mapping the
// initial lift to the final lift, read off the domain-letter events.
Word record_word(const Trajectory& traj);

// Conjugacy decision; pass the surface group for words that may leave a
// handle subgroup, nullptr for free-group comparison.
bool conjugate_eq(const Word& w1, const Word& w2, const SurfaceGroup* group);

// ---------------------------------------------------------------------------
// Classification of closed orbits in the surgered manifold. Orbits crossing
// the separating torus carry a cyclic alternating sequence of sides and
// relative classes; orbits confined to one side carry a handle-group word.

struct CrossingArc {
  Side side;           // component the arc runs through
  Word relative_word;  // deck element from the entry lift to the exit lift
  bool nontrivial;     // not a power of the separating-axis element
};

struct CrossingSequence {
  std::vector<CrossingArc> arcs;  // arc k follows crossing k, cyclically
  std::size_t crossing_count() const { return arcs.size(); }
};

bool crossing_sequences_equal(const CrossingSequence& a, const CrossingSequence& b);

struct OrbitClass {
  bool has_crossings = false;
  CrossingSequence sequence;  // when has_crossings
  Word word;                  // one-sided class word (reduced)
  Side side = Side::Crossing;
  bool tangent_to_torus = false;  // the two orbits over the separating geodesic
};

// Requires a closed trajectory flowed over one period with samples recorded.
// Verifies side alternation and, for every inter-crossing arc, that the arc
// leaves the collar of the separating torus (CollarEscapeViolation otherwise).
OrbitClass surgered_class(const FuchsianSurface& surface, const Trajectory& traj,
                          double collar_delta);

bool is_contractible(const OrbitClass& cls);

// ---------------------------------------------------------------------------
// Flat 3-torus construction: two closed curves that stay uniformly close in
// sup distance over a common time window yet lie in distinct primitive free
// homotopy classes.

struct TorusLoop {
  std::vector<Eigen::Vector3d> lift_points;  // polyline in R^3, closes up to
                                             // the winding translation
  double period = 0.0;                       // arclength of one period
  Eigen::Vector3i winding;

  Eigen::Vector3d at(double t) const;  // point in [0,1)^3, periodic extension
  bool primitive() const;
};

std::pair<TorusLoop, TorusLoop> torus_counterexample(double delta);

// sup over [0, max period] of the flat-torus distance between the two
// arclength parametrizations
double torus_sup_distance(const TorusLoop& a, const TorusLoop& b,
                          double sample_dt = 1e-3);

}  // namespace reeblab
