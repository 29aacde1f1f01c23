#pragma once

#include <optional>

#include "reeblab/surface.hpp"
#include "reeblab/words.hpp"

namespace reeblab {

enum class Side { S1, S2, Crossing };

const char* side_name(Side s);

// A free homotopy class carrying a closed geodesic. Classes are unoriented:
// a word and its inverse label the same geodesic, and the canonical cyclic
// word is minimized over rotations and inversion.
struct ConjugacyClassRecord {
  Word cyclic_word;
  double trace = 0.0;
  double length = 0.0;
  bool primitive = true;
  Side side = Side::Crossing;
  bool boundary_parallel = false;
};

struct CensusTable {
  std::vector<ConjugacyClassRecord> records;  // sorted by length
  double t_max = 0.0;

  // number of distinct classes with geodesic length <= T
  std::size_t count_n(double t) const;
  // number of periodic flow orbits (oriented, iterates included) with
  // period <= T
  std::size_t count_p(double t) const;
};

struct GrowthFit {
  double a = 0.0;
  double b = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;
};

struct CensusOptions {
  std::size_t node_budget = 20000000;
  int extra_margin = 0;  // widen the word ball beyond the derived radius
  double grid_step = 0.5;
};

// Every conjugacy class of translation length <= t_max, found by walking
// the cyclically reduced word ball of radius ceil(t_max / l_min) + 2 and
// deduplicating conjugates. Completeness is checked by rerunning with a
// wider ball (extra_margin).
CensusTable enumerate_classes(const FuchsianSurface& surface, double t_max,
                              const CensusOptions& opts = {});

// Conjugacy classes of one handle subgroup up to the given word length,
// with geodesic data. The handle groups are free, so the canonical form is
// the cyclic rotation/inversion minimum.
std::vector<ConjugacyClassRecord> enumerate_handle_classes(
    const FuchsianSurface& surface, int handle, int max_word_len);

std::size_t count_N(const CensusTable& census, double t);

GrowthFit fit_growth(const CensusTable& census, double t_lo, double t_hi,
                     double grid_step = 0.5);

// Least-squares slope of log(values) against abscissae; shared by the
// growth fits.
GrowthFit fit_log_linear(const std::vector<double>& ts,
                         const std::vector<double>& logs);

CensusTable filter_subsurface(const CensusTable& census, Side side);

// Class membership helpers (exact, via the conjugacy closure).
bool conjugate_into_handle(const SurfaceGroup& group, const Word& w, int handle);
bool is_boundary_parallel(const SurfaceGroup& group, const Word& w);

}  // namespace reeblab
