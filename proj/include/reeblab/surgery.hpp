#pragma once

#include <optional>

#include "reeblab/census.hpp"
#include "reeblab/surface.hpp"

namespace reeblab {

// Smoothstep-based bump profiles. R' is an even C^1 plateau with
// 0 <= R' <= 4 and integral 2pi; R rises from 0 at -1 to 2pi at 1 and is
// extended constantly outside [-1,1]. beta equals 1 on a neighbourhood of
// [-2 eta, 2 eta], is supported in (-3 eta, 3 eta) and obeys
// |beta'| <= pi/eta.
struct RampProfile {
  double flat = 0.08;      // R' vanishes for |x| >= 1 - flat
  double shoulder = 0.30;  // smoothstep shoulder ends at |x| = 1 - shoulder
  double height() const;   // plateau height fixed by the 2pi normalization

  double deriv(double x) const;  // R'
  double value(double x) const;  // R, constant outside [-1,1]
};

struct CollarProfile {
  double eta = 0.1;
  double margin_out = 0.15;  // rise starts at -(3 - margin_out) eta
  double margin_in = 0.15;   // rise ends at -(2 + margin_in) eta

  double value(double t) const;  // beta
  double deriv(double t) const;  // beta'
  double max_abs_deriv() const;
};

struct SurgeryParams {
  int q = 1;
  double eta = 0.1;
  double epsilon = 0.003;
  double delta = 0.05;  // collar width used for event bookkeeping
  RampProfile ramp;
  CollarProfile collar;  // collar.eta kept in sync with eta by validate

  double epsilon_max() const {
    return q == 0 ? eta : eta / (4.0 * std::abs(q) * kPi);
  }
};

struct ParamReport {
  bool ok = true;
  double epsilon_max = 0.0;
  double sup_dt_r = 0.0;  // grid maximum of |d r / d t|
  std::string violation;  // empty when ok
};

// Checks the epsilon bound, the profile constraints and grid-evaluates
// sup |d r/d t| over a 200x200 (t,w) grid. Throws ParamViolation when a
// constraint fails; the returned report carries the numbers either way.
ParamReport validate_params(const SurgeryParams& p, bool throw_on_violation = true);

// Shear data of the gluing: f is the fibre-dependent angle shift, the twist
// integral is the half-moment of f' that enters both the contact form
// correction r(t,w) = beta(t) I(w) and the traversal time.
struct TwistData {
  explicit TwistData(const SurgeryParams& p);

  double f(double w) const;               // -q R(w / epsilon)
  double twist_integral(double w) const;  // I(w) = 1/2 int_{-2eps}^w x f'(x) dx
  double r(double t, double w) const { return collar.value(t) * twist_integral(w); }
  double dt_r(double t, double w) const { return collar.deriv(t) * twist_integral(w); }

  int q;
  double epsilon;
  RampProfile ramp;
  CollarProfile collar;
};

// Exact collar chart around the Legendrian lift of the separating geodesic:
// Psi(t,s,w) applies the geodesic flow for time t to the unit vector at
// arclength position s * len/2pi along the geodesic, turned so that the
// canonical contact form pulls back to dt + w ds.
class ChartMap {
 public:
  ChartMap(const FuchsianSurface& surface, const SurgeryParams& p);

  // Frame of the lift over the imaginary axis (callers compose with a deck
  // element to reach other lifts).
  UnitTangentFrame frame(double t, double s, double w) const;

  struct BoxCoords {
    double t, s, w;
    double angle;    // crossing angle of the underlying geodesic
    bool rightward;  // crossing the separating wall from S1 into S2
  };

  // Chart coordinates of a frame whose geodesic crosses the imaginary axis
  // transversally; nullopt otherwise. Exact: no iteration involved.
  std::optional<BoxCoords> coords(const UnitTangentFrame& u) const;

  // Throwing wrapper used by the public surface: OutOfChart when the frame
  // is not carried by the chart.
  BoxCoords coords_checked(const UnitTangentFrame& u) const;

  double scale() const { return scale_; }      // len / 2pi
  double period() const { return period_; }    // len of the separating geodesic

 private:
  double period_;
  double scale_;
  double w_max_;  // chart carries |w| < w_max = scale
};

// Scattering map of the surgery box in closed form: the fibre coordinate is
// preserved, the angle shifts by f(w) and the Reeb time spent between the
// walls is 6 eta + 2 I(w).
struct BoxTraverseResult {
  double s_out;
  double w;
  double tau;
};
BoxTraverseResult box_traverse(double s, double w, const TwistData& twist,
                               const SurgeryParams& p);

// ---------------------------------------------------------------------------
// Hybrid flow of the surgered Reeb field: exact geodesic flow outside the
// box, closed-form scattering inside, with wall and torus events resolved by
// bisection on sign functions.

enum class EventKind { BoxEntry, BoxExit, TorusCrossing, DomainLetter };

struct TrajectoryEvent {
  EventKind kind;
  double time = 0.0;
  double s = 0.0, w = 0.0;   // crossing data where applicable
  double s_out = 0.0;        // box exit angle
  int direction = 0;         // +1: S1 -> S2, -1: S2 -> S1
  int lift_index = -1;       // index into surface.axis_lifts()
  Word letters;              // deck letters for DomainLetter events
};

struct FlowState {
  UnitTangentFrame frame;
  double time = 0.0;
};

struct Trajectory {
  std::vector<FlowState> samples;
  std::vector<TrajectoryEvent> events;
  double total_time = 0.0;
  UnitTangentFrame initial;
  UnitTangentFrame final_state;

  // The state between box handoffs is the exact group product
  // anchor * a_(+-(t - anchor_time)); the final anchor lets callers
  // reproduce the endpoint without any accumulated reduction noise.
  Mobius final_anchor;
  double final_anchor_time = 0.0;
  int direction = +1;  // -1 for backward runs; times are elapsed either way
  UnitTangentFrame exact_endpoint() const {
    return UnitTangentFrame{
        final_anchor * Mobius::axis_translation(
                           direction * (total_time - final_anchor_time)),
        ChartTag::Bundle};
  }

  // deck word accumulated over the whole run (concatenated letters)
  Word total_word() const;
  std::size_t count(EventKind k) const;
};

struct FlowOptions {
  double sample_dt = 0.0125;
  bool record_samples = true;
  double time_cap = 400.0;
};

class SurgeredFlow {
 public:
  SurgeredFlow(const FuchsianSurface& surface, const SurgeryParams& params);

  const FuchsianSurface& surface() const { return *surface_; }
  const SurgeryParams& params() const { return params_; }
  const ChartMap& chart() const { return chart_; }
  const TwistData& twist() const { return twist_; }

  Trajectory flow(const UnitTangentFrame& start, double T,
                  const FlowOptions& opts = {}) const;

 private:
  struct LiftView {
    std::optional<ChartMap::BoxCoords> coords;
    double side = 0.0;  // sign function of the wall for crossing detection
  };
  LiftView view(const UnitTangentFrame& u, const AxisLift& lift) const;

  const FuchsianSurface* surface_;
  SurgeryParams params_;
  TwistData twist_;
  ChartMap chart_;
};

// ---------------------------------------------------------------------------
// Periodic orbits.

enum class OrbitSource { CensusGeodesic, CloseReturn };

struct SurgeredOrbit {
  UnitTangentFrame seed;
  double period = 0.0;
  bool avoids_box = false;
  double residual = 0.0;
  OrbitSource source = OrbitSource::CloseReturn;
  std::optional<Word> census_word;  // canonical class when census-sourced
  bool on_torus = false;            // the two orbits parametrizing the
                                    // separating geodesic
};

struct OrbitSearchOptions {
  std::size_t seeds = 400;
  double search_time = 12.0;
  double return_threshold = 0.05;
  std::size_t max_candidates = 400;
  std::size_t max_orbits = 200;
  double refine_tolerance = 1e-8;
  std::uint64_t rng_seed = 1;
  double min_period = 0.5;
};

struct OrbitSearchStats {
  std::size_t candidates = 0;
  std::size_t refined = 0;
  std::size_t diverged = 0;
  std::size_t duplicates = 0;
};

// Refine a close-return candidate to a true periodic orbit by shooting on
// (frame, period). Returns nullopt when the iteration diverges.
std::optional<SurgeredOrbit> refine_orbit(const SurgeredFlow& flow,
                                          const UnitTangentFrame& seed,
                                          double period_guess,
                                          double tolerance);

// Periodic orbits from the two sources: census geodesics whose trajectories
// stay clear of the surgery region (exact periods), and refined close
// returns of sampled seeds.
std::vector<SurgeredOrbit> find_periodic_orbits(
    const SurgeredFlow& flow, const std::vector<ConjugacyClassRecord>& census,
    const OrbitSearchOptions& opts, OrbitSearchStats* stats = nullptr);

// Quotient distance between two frames: left-invariant two-point embedding
// minimized over nearby deck motions. Shared with the entropy module.
double frame_distance(const FuchsianSurface& surface, const UnitTangentFrame& a,
                      const UnitTangentFrame& b, double cutoff = 2.0);

// Deterministic random frame with base point in the fundamental domain.
UnitTangentFrame random_frame(const FuchsianSurface& surface, Rng& rng);

}  // namespace reeblab
