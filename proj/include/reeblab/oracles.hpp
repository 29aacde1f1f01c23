#pragma once

#include "reeblab/census.hpp"
#include "reeblab/surgery.hpp"
#include "reeblab/suspension.hpp"

namespace reeblab {

// Independent reference computations used by the verification suite. Each
// oracle takes a different route than the implementation it checks.

namespace oracle {

// Translation length by displacement measurement: move a point of the
// invariant geodesic and measure the hyperbolic distance.
double axis_displacement_length(const Mobius& m);

// Conjugacy classes of the free group on two letters up to rotation and
// inversion, by exhaustive canonicalization of every cyclically reduced
// word. Letters are those of the requested handle.
std::vector<Word> free_cyclic_classes(int handle, int max_len);

// Brute-force search for a conjugator of bounded length over the full
// generator alphabet, deciding conjugacy in the surface group through the
// word problem only.
bool conjugate_by_search(const SurfaceGroup& group, const Word& w1,
                         const Word& w2, int max_conjugator_len);

// Cyclic admissible words of the transition matrix counted by explicit
// enumeration with rotation dedup; index k-1 holds the count of length k.
std::vector<long long> necklace_enumeration(const TransitionMatrix& M, int k_max);

// Reeb time through the surgery box by midpoint quadrature of
// dt/dtau = 1/(1 +- dr/dt) across the three collar slabs.
double box_time_quadrature(const TwistData& twist, const SurgeryParams& p,
                           double w, int steps = 20000);

}  // namespace oracle

}  // namespace reeblab
