#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "reeblab/census.hpp"
#include "reeblab/util.hpp"

namespace reeblab {

// Non-negative integer transition data of a symbolic model (train-track or
// Markov partition matrix).
struct TransitionMatrix {
  Eigen::MatrixXi m;

  int size() const { return static_cast<int>(m.rows()); }
  bool irreducible() const;  // strong connectivity of the digraph
};

TransitionMatrix parse_transition_matrix(const std::string& text);
std::string format_transition_matrix(const TransitionMatrix& M);

// Dominant eigenvalue by power iteration (on M + I so that periodic
// structure cannot stall convergence), relative residual 1e-12.
double perron_root(const TransitionMatrix& M);

// Closed-walk and necklace counts. necklaces(k) counts admissible cyclic
// words of length k up to rotation (Burnside over the rotation action);
// aperiodic(k) counts primitive ones (Moebius inversion). The growth fit
// regresses log(k * aperiodic(k)) on k over the upper half window, which
// cancels the 1/k prefactor of the rotation quotient.
struct NecklaceCensus {
  int k_max = 0;
  std::vector<long long> closed_walks;  // index k-1: trace of M^k
  std::vector<long long> necklaces;
  std::vector<long long> aperiodic;
  std::vector<long long> cumulative;  // c(k): cyclic words of length <= k
  GrowthFit fit;
};

NecklaceCensus necklace_count(const TransitionMatrix& M, int k_max);

// Suspension with constant roof: symbolic length k becomes period k * roof.
struct SuspensionPeriods {
  double roof = 1.0;
  std::vector<std::pair<double, long long>> counts;  // (period, classes)
  GrowthFit fit;
};

SuspensionPeriods suspension_periods(const NecklaceCensus& census, double roof = 1.0);

// ---------------------------------------------------------------------------
// Linear mapping-torus model: monodromy A in SL(2,Z) acting on the plane,
// interpolation profile F_0 stitching the pullback primitives across each
// fundamental strip t in [i, i+1).

struct MappingTorusModel {
  Eigen::Matrix2d monodromy;
  double eps_form = 5e-4;
  double ramp_lo = 0.01;  // F0 = 0 below, rises on [ramp_lo, ramp_hi]
  double ramp_hi = 0.02;

  double f0(double t) const;
  double f0_deriv(double t) const;

  // coefficients (dt, dx, dy) of the interpolated 1-form at (t, p) on the
  // infinite cyclic cover R x R^2
  Eigen::Vector3d form(double t, const Eigen::Vector2d& p) const;

  // Reeb direction from a finite-difference exterior derivative, normalized
  // so the form evaluates to 1
  Eigen::Vector3d reeb(double t, const Eigen::Vector2d& p) const;

  // volume coefficient of form ^ d(form); positive means contact
  double contact_volume(double t, const Eigen::Vector2d& p) const;
};

// Throws BadParams when eps_form is degenerate (zero) or the contact
// condition fails on a sample grid.
void validate_model(const MappingTorusModel& model);

struct EquivarianceReport {
  double max_pullback_err = 0.0;   // sup |H* form - form| over samples
  double max_flat_err = 0.0;       // same restricted to flat strips
  double max_reeb_dt_err = 0.0;    // |X_t - 1| at flat-region samples
  double min_contact_volume = 0.0;
  std::size_t samples = 0;
};

// Verifies H* pullback invariance of the form on random samples and the
// surface-of-section normal form of the Reeb field on the flat strips;
// EquivarianceViolation if a tolerance fails.
EquivarianceReport check_equivariance(const MappingTorusModel& model,
                                      std::size_t samples, std::uint64_t rng_seed,
                                      double tol = 1e-9);

}  // namespace reeblab
