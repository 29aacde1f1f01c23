#pragma once

#include "reeblab/surgery.hpp"

namespace reeblab {

// Quotient metric on the unit tangent bundle: a frame embeds as its base
// point together with a probe point half a unit ahead along its geodesic;
// distances are clamped at the cutoff, which keeps the truncated deck
// minimization an honest metric.
class PhaseMetric {
 public:
  PhaseMetric(const FuchsianSurface& surface, double cutoff);

  struct Embedded {
    Complex base;
    Complex front;
  };
  Embedded embed(const UnitTangentFrame& u) const;

  double operator()(const Embedded& a, const Embedded& b) const;
  double operator()(const UnitTangentFrame& a, const UnitTangentFrame& b) const {
    return (*this)(embed(a), embed(b));
  }

  double cutoff() const { return cutoff_; }

 private:
  const FuchsianSurface* surface_;
  double cutoff_;
  // deck candidates sorted by displacement, with displacements cached
  std::vector<Mobius> deck_;
  std::vector<double> displacement_;
};

enum class SeparationMethod { GreedySampling, OrbitConstruction };

struct SeparatedSetResult {
  double horizon = 0.0;  // T
  double delta = 0.0;
  std::vector<UnitTangentFrame> points;
  std::size_t n = 0;
  SeparationMethod method = SeparationMethod::GreedySampling;
  double threshold = 0.0;  // admission threshold delta * (1 + margin)
  bool budget_exhausted = false;
};

struct BowenOptions {
  std::size_t sample_budget = 2500;
  double ball_radius = 0.025;    // seeds drawn from one metric ball
  double admission_margin = 0.5; // separation threshold delta * (1 + margin)
  double sample_dt_factor = 0.25;
  double rescale = 1.0;  // lambda = c * lambda0: the flow parametrization slows by c
  std::uint64_t rng_seed = 2;
};

// Greedy maximal separated set for the (rescaled) geodesic flow; a valid
// lower bound for the maximal cardinality.
SeparatedSetResult bowen_count(const FuchsianSurface& surface, double T,
                               double delta, const BowenOptions& opts);

// Shared-seed grid driver: flows the seed ball once and reruns the greedy
// selection per (T, delta) cell.
struct BowenGridEntry {
  double horizon;
  double delta;
  std::size_t n;
};

class BowenLab {
 public:
  BowenLab(const FuchsianSurface& surface, double t_max,
           const std::vector<double>& deltas, const BowenOptions& opts);

  SeparatedSetResult count(double T, double delta) const;

  // independent full pairwise re-check of an emitted separated set
  bool verify(const SeparatedSetResult& result) const;

  const FuchsianSurface& surface() const { return *surface_; }
  double rescale() const { return opts_.rescale; }

 private:
  const FuchsianSurface* surface_;
  BowenOptions opts_;
  double t_max_;
  double finest_dt_;
  std::vector<UnitTangentFrame> seeds_;
  std::vector<std::vector<PhaseMetric::Embedded>> tracks_;
  std::vector<double> min_delta_;
};

struct EntropyEstimate {
  std::vector<BowenGridEntry> grid;
  std::vector<std::pair<double, GrowthFit>> h_delta;  // (delta, fit)
  double h_top_estimate = 0.0;  // slope at the finest delta
  double k_hat = 0.0;  // affine component-count rate over sample trajectories
};

GrowthFit h_delta_fit(const std::vector<BowenGridEntry>& grid, double delta);

EntropyEstimate estimate_entropy(const FuchsianSurface& surface,
                                 const std::vector<double>& t_grid,
                                 const std::vector<double>& delta_grid,
                                 const BowenOptions& opts);

// Separated set built from periodic orbits in pairwise distinct free
// homotopy classes; ClassCollision when two inputs share a class.
struct OrbitSeparationInput {
  UnitTangentFrame seed;
  double period;
  Word class_word;  // canonical class label
};

SeparatedSetResult orbit_separated_set(const FuchsianSurface& surface,
                                       const std::vector<OrbitSeparationInput>& orbits,
                                       double T, double delta,
                                       double admission_margin = 0.5);

bool verify_separated_set(const FuchsianSurface& surface,
                          const SeparatedSetResult& result, double rescale = 1.0);

// Number of distinct deck components of the 4 delta neighbourhood of the
// fibre over p visited by the lifted trajectory, plus the empirical rate.
struct ComponentCount {
  std::size_t count = 0;
  double rate = 0.0;  // (count - 1) / T
};

ComponentCount component_count(const FuchsianSurface& surface,
                               const UnitTangentFrame& seed, Complex p,
                               double delta, double T);

struct ConsistencyReport {
  bool pass = false;
  double fitted_a = 0.0;
  double h_estimate = 0.0;
  double tolerance = 0.0;
  double rescaled_h = 0.0;  // when a rescaled estimate was supplied
  double rescale = 1.0;
};

// Growth-vs-entropy consistency: fitted orbit-class growth rate must not
// exceed the Bowen estimate by more than the tolerance. When a rescaled
// estimate is supplied (form scaled by c, flow slowed by c), it must stay
// above fit.a / c - tol.
ConsistencyReport check_growth_entropy_bound(const GrowthFit& fit, const EntropyEstimate& est,
                              double tol,
                              const EntropyEstimate* rescaled = nullptr,
                              double rescale = 1.0);

}  // namespace reeblab
