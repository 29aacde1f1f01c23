#include "reeblab/surgery.hpp"

#include <algorithm>
#include <cmath>

namespace reeblab {

namespace {

// quintic smoothstep and its derivative
double smoothstep(double t) {
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_deriv(double t) {
  if (t <= 0 || t >= 1) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

// Gauss-Legendre(5), exact through degree 9; the profile integrands are
// piecewise polynomial of degree <= 6, so splitting at the breakpoints
// makes these integrals exact to machine precision.
constexpr double kGlNode[5] = {0.0, 0.5384693101056831, -0.5384693101056831,
                               0.9061798459386640, -0.9061798459386640};
constexpr double kGlWeight[5] = {0.5688888888888889, 0.4786286704993665,
                                 0.4786286704993665, 0.2369268850561891,
                                 0.2369268850561891};

template <typename F>
double gl5(const F& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += kGlWeight[i] * f(mid + half * kGlNode[i]);
  return acc * half;
}

template <typename F>
double integrate_piecewise(const F& f, double a, double b,
                           const std::vector<double>& breaks) {
  if (b <= a) return b == a ? 0.0 : -integrate_piecewise(f, b, a, breaks);
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a + 1e-15 && c < b - 1e-15) cuts.push_back(c);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += gl5(f, cuts[i], cuts[i + 1]);
  return acc;
}

}  // namespace

double RampProfile::height() const {
  return kTwoPi / (2.0 - flat - shoulder);
}

double RampProfile::deriv(double x) const {
  double u = std::abs(x);
  double p0 = 1.0 - flat, p1 = 1.0 - shoulder;
  if (u >= p0) return 0.0;
  if (u <= p1) return height();
  return height() * smoothstep((p0 - u) / (p0 - p1));
}

double RampProfile::value(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return kTwoPi;
  double p0 = 1.0 - flat, p1 = 1.0 - shoulder;
  std::vector<double> breaks{-p0, -p1, p1, p0};
  return integrate_piecewise([this](double u) { return deriv(u); }, -1.0, x,
                             breaks);
}

double CollarProfile::value(double t) const {
  double u = std::abs(t) / eta;
  double lo = 2.0 + margin_in, hi = 3.0 - margin_out;
  if (u <= lo) return 1.0;
  if (u >= hi) return 0.0;
  return smoothstep((hi - u) / (hi - lo));
}

double CollarProfile::deriv(double t) const {
  double u = std::abs(t) / eta;
  double lo = 2.0 + margin_in, hi = 3.0 - margin_out;
  if (u <= lo || u >= hi) return 0.0;
  double d = smoothstep_deriv((hi - u) / (hi - lo)) / ((hi - lo) * eta);
  return t > 0 ? -d : d;
}

double CollarProfile::max_abs_deriv() const {
  return 1.875 / ((1.0 - margin_out - margin_in) * eta);
}

ParamReport validate_params(const SurgeryParams& p, bool throw_on_violation) {
  ParamReport rep;
  rep.epsilon_max = p.epsilon_max();
  auto violate = [&](const std::string& msg) {
    rep.ok = false;
    if (rep.violation.empty()) rep.violation = msg;
    if (throw_on_violation) fail(ErrorCode::ParamViolation, msg);
  };

  if (!(p.eta > 0)) violate("eta must be positive");
  if (!(p.epsilon > 0)) violate("epsilon must be positive");
  if (!(p.delta > 0)) violate("delta must be positive");
  if (!(p.epsilon < rep.epsilon_max))
    violate("epsilon must satisfy epsilon < eta / (4 |q| pi)");

  // ramp profile contract
  if (!(p.ramp.flat > 0 && p.ramp.shoulder > p.ramp.flat && p.ramp.shoulder < 1))
    violate("ramp profile shape parameters out of range");
  if (p.ramp.height() > 4.0 + 1e-12)
    violate("ramp derivative exceeds 4");
  for (int i = 0; i <= 100; ++i) {
    double x = -1.0 + 2.0 * i / 100.0;
    double d = p.ramp.deriv(x);
    if (d < -1e-12 || d > 4.0 + 1e-12) violate("ramp derivative out of [0,4]");
    if (std::abs(d - p.ramp.deriv(-x)) > 1e-12) violate("ramp derivative not even");
  }
  if (std::abs(p.ramp.value(-1.0)) > 1e-12 ||
      std::abs(p.ramp.value(1.0) - kTwoPi) > 1e-10)
    violate("ramp endpoints wrong");

  // collar profile contract
  CollarProfile beta = p.collar;
  beta.eta = p.eta;
  if (beta.max_abs_deriv() > kPi / p.eta + 1e-12)
    violate("collar profile slope exceeds pi/eta");
  if (std::abs(beta.value(2.0 * p.eta) - 1.0) > 1e-12 ||
      std::abs(beta.value(-2.0 * p.eta) - 1.0) > 1e-12)
    violate("collar profile not 1 on [-2 eta, 2 eta]");
  if (std::abs(beta.value(3.0 * p.eta)) > 1e-12 ||
      std::abs(beta.value(-3.0 * p.eta)) > 1e-12)
    violate("collar profile support leaks");

  // contact condition: grid supremum of |dr/dt| must stay below 1
  if (rep.ok) {
    SurgeryParams q = p;
    q.collar.eta = p.eta;
    TwistData twist(q);
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
      double t = -3.0 * p.eta + 6.0 * p.eta * (i + 0.5) / 200.0;
      for (int j = 0; j < 200; ++j) {
        double w = -2.0 * p.epsilon + 4.0 * p.epsilon * (j + 0.5) / 200.0;
        sup = std::max(sup, std::abs(twist.dt_r(t, w)));
      }
    }
    rep.sup_dt_r = sup;
    if (!(sup < 1.0)) violate("contact condition |dr/dt| < 1 fails on grid");
  }
  return rep;
}

TwistData::TwistData(const SurgeryParams& p)
    : q(p.q), epsilon(p.epsilon), ramp(p.ramp), collar(p.collar) {
  collar.eta = p.eta;
}

double TwistData::f(double w) const {
  double x = std::clamp(w / epsilon, -1.0, 1.0);
  return -static_cast<double>(q) * ramp.value(x);
}

double TwistData::twist_integral(double w) const {
  if (q == 0) return 0.0;
  if (w <= -epsilon) return 0.0;
  double hi = std::min(w, epsilon);
  double p0 = 1.0 - ramp.flat, p1 = 1.0 - ramp.shoulder;
  std::vector<double> breaks{-epsilon * p0, -epsilon * p1, epsilon * p1,
                             epsilon * p0};
  auto integrand = [this](double x) {
    // x f'(x) with f(w) = -q R(w/eps)
    return x * (-static_cast<double>(q) / epsilon) * ramp.deriv(x / epsilon);
  };
  return 0.5 * integrate_piecewise(integrand, -epsilon, hi, breaks);
}

// ---------------------------------------------------------------------------

ChartMap::ChartMap(const FuchsianSurface& surface, const SurgeryParams& p) {
  (void)p;
  period_ = surface.separating_length();
  scale_ = period_ / kTwoPi;
  w_max_ = scale_;
}

UnitTangentFrame ChartMap::frame(double t, double s, double w) const {
  if (!(std::abs(w) < w_max_))
    fail(ErrorCode::OutOfChart, "fibre coordinate outside the chart");
  double theta = s * scale_;
  double chi = std::asin(w / scale_);
  UnitTangentFrame u = frame_from(Complex(0.0, std::exp(theta)), chi);
  return geodesic_step(u, t);
}

std::optional<ChartMap::BoxCoords> ChartMap::coords(const UnitTangentFrame& u) const {
  AxisEndpoints e = frame_geodesic_endpoints(u);
  if (!e.repelling || !e.attracting) return std::nullopt;
  double xr = *e.repelling, xa = *e.attracting;
  if (!(xr * xa < 0)) return std::nullopt;  // no transversal crossing
  double yc = std::sqrt(-xr * xa);
  Complex zc(0.0, yc);
  double m = 0.5 * (xr + xa);
  Complex tangent = Complex(0.0, -1.0) * (zc - Complex(m, 0.0));
  if (xa < xr) tangent = -tangent;
  double chi = std::atan2(tangent.imag(), tangent.real());
  BoxCoords c;
  c.angle = chi;
  c.rightward = std::abs(chi) < kPi / 2.0;
  c.w = scale_ * std::sin(chi);
  c.s = std::log(yc) / scale_;
  Complex zeta = u.frame.inverse().apply(zc);
  c.t = -std::log(std::abs(zeta));
  return c;
}

ChartMap::BoxCoords ChartMap::coords_checked(const UnitTangentFrame& u) const {
  auto c = coords(u);
  if (!c || !c->rightward)
    fail(ErrorCode::OutOfChart, "frame not carried by the surgery chart");
  return *c;
}

BoxTraverseResult box_traverse(double s, double w, const TwistData& twist,
                               const SurgeryParams& p) {
  BoxTraverseResult r;
  r.w = w;
  r.s_out = s + twist.f(w);
  r.tau = 6.0 * p.eta + 2.0 * twist.twist_integral(w);
  return r;
}

// ---------------------------------------------------------------------------

Word Trajectory::total_word() const {
  Word w;
  for (const auto& e : events)
    if (e.kind == EventKind::DomainLetter) w = concat(w, e.letters);
  return free_reduce(w);
}

std::size_t Trajectory::count(EventKind k) const {
  std::size_t n = 0;
  for (const auto& e : events)
    if (e.kind == k) ++n;
  return n;
}

SurgeredFlow::SurgeredFlow(const FuchsianSurface& surface,
                           const SurgeryParams& params)
    : surface_(&surface), params_(params), twist_(params), chart_(surface, params) {
  validate_params(params_);
  params_.collar.eta = params_.eta;
}

namespace {

// signed side function of the lift geodesic: changes sign exactly at a
// transversal crossing of the base point
double lift_side(const AxisLift& lift, Complex z) {
  if (lift.repelling_infinite || lift.attracting_infinite) {
    double x = lift.repelling_infinite ? lift.x_attracting : lift.x_repelling;
    return z.real() - x;
  }
  double m = 0.5 * (lift.x_repelling + lift.x_attracting);
  double r = 0.5 * std::abs(lift.x_attracting - lift.x_repelling);
  return std::norm(z - Complex(m, 0.0)) - r * r;
}

}  // namespace

Trajectory SurgeredFlow::flow(const UnitTangentFrame& start, double T,
                              const FlowOptions& opts) const {
  // negative T runs the flow backwards; times in the result are elapsed
  const double sigma = T >= 0 ? 1.0 : -1.0;
  const double total = std::abs(T);
  if (total > opts.time_cap)
    fail(ErrorCode::BudgetExceeded, "flow time exceeds cap");

  const auto& lifts = surface_->axis_lifts();
  const double eta = params_.eta;
  const double two_eps = 2.0 * params_.epsilon;
  const double step = std::min(eta, params_.delta) / 4.0;

  Trajectory traj;
  UnitTangentFrame u = start;
  surface_->reduce_frame(u);  // silent: fixes the initial lift
  traj.initial = u;
  double tau = 0.0;
  double next_sample = 0.0;

  // Two representations run in parallel. The anchor is the exact group
  // product anchor * a_(+-(tau - t0)): it is touched only by box handoffs,
  // so with q = 0 the endpoint is bit-identical to the plain geodesic flow
  // of the reduced seed. The incremental state u_inc tracks the reduced
  // representative step by step; it stays well-conditioned for arbitrarily
  // long runs and drives the event detection.
  Mobius anchor = u.frame;
  double anchor_time = 0.0;
  UnitTangentFrame u_inc = u;

  auto record_letters = [&](const Word& w) {
    if (w.empty()) return;
    TrajectoryEvent e;
    e.kind = EventKind::DomainLetter;
    e.time = tau;
    e.letters = w;
    traj.events.push_back(e);
  };

  auto reduce_state = [&]() { record_letters(surface_->reduce_frame(u_inc)); };

  // samples between the current time and the limit come from short exact
  // steps off the incremental state
  auto emit_samples_until = [&](double limit) {
    if (!opts.record_samples) return;
    while (next_sample <= limit + 1e-12 && next_sample <= total + 1e-12) {
      UnitTangentFrame s = geodesic_step(u_inc, sigma * (next_sample - tau));
      surface_->reduce_frame(s);
      traj.samples.push_back({s, next_sample});
      next_sample += opts.sample_dt;
    }
  };

  auto advance = [&](double dt) {
    emit_samples_until(tau + dt);
    u_inc = geodesic_step(u_inc, sigma * dt);
    tau += dt;
    reduce_state();
  };

  // elapsed Reeb time from the entry wall to box coordinate t
  auto wall_elapsed = [&](double t_box, double iw) {
    const double handoff = 1.5 * eta;
    double fwd = t_box <= handoff
                     ? (t_box + 3.0 * eta) + iw * twist_.collar.value(t_box)
                     : (t_box + 3.0 * eta) + iw * (2.0 - twist_.collar.value(t_box));
    return sigma > 0 ? fwd : (6.0 * eta + 2.0 * iw) - fwd;
  };

  // box traversal bookkeeping starting at the entry wall; for q = 0 the
  // scattering is the identity and the state is left untouched
  auto traverse_box = [&](std::size_t lift_index, const ChartMap::BoxCoords& c) {
    const AxisLift& lift = lifts[lift_index];
    BoxTraverseResult fwd = box_traverse(c.s, c.w, twist_, params_);
    BoxTraverseResult res = fwd;
    if (sigma < 0) res.s_out = c.s - twist_.f(c.w);
    TrajectoryEvent entry;
    entry.kind = EventKind::BoxEntry;
    entry.time = tau;
    entry.s = wrap_two_pi(c.s);
    entry.w = c.w;
    entry.lift_index = static_cast<int>(lift_index);
    traj.events.push_back(entry);

    const double half_time = 3.0 * eta + twist_.twist_integral(c.w);
    TrajectoryEvent crossing;
    crossing.kind = EventKind::TorusCrossing;
    crossing.time = tau + half_time;
    crossing.s = wrap_two_pi(c.s);
    crossing.w = c.w;
    crossing.direction = +1;
    crossing.lift_index = static_cast<int>(lift_index);
    traj.events.push_back(crossing);

    TrajectoryEvent exit;
    exit.kind = EventKind::BoxExit;
    exit.time = tau + res.tau;
    exit.s = wrap_two_pi(c.s);
    exit.s_out = wrap_two_pi(res.s_out);
    exit.w = c.w;
    exit.lift_index = static_cast<int>(lift_index);
    traj.events.push_back(exit);

    if (params_.q == 0) {
      // identity scattering: the plain flow already is the traversal
      advance(std::min(res.tau, total - tau));
      return;
    }

    // interior samples: invert the Reeb-time relation piecewise
    if (opts.record_samples) {
      const double handoff = 1.5 * eta;
      double iw = twist_.twist_integral(c.w);
      while (next_sample <= tau + res.tau + 1e-12 && next_sample <= total + 1e-12) {
        double dtau = next_sample - tau;
        if (dtau < 0) { next_sample += opts.sample_dt; continue; }
        double lo = -3.0 * eta, hi = 3.0 * eta;
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
          double mid = 0.5 * (lo + hi);
          if (sigma > 0) {
            (wall_elapsed(mid, iw) < dtau ? lo : hi) = mid;
          } else {
            (wall_elapsed(mid, iw) < dtau ? hi : lo) = mid;
          }
        }
        double t_box = 0.5 * (lo + hi);
        bool entry_side = sigma > 0 ? t_box <= handoff : t_box > handoff;
        double s_here = entry_side ? c.s : res.s_out;
        UnitTangentFrame sample_frame{
            lift.deck * chart_.frame(t_box, s_here, c.w).frame,
            ChartTag::SurgeryBox};
        surface_->reduce_frame(sample_frame);
        traj.samples.push_back({sample_frame, next_sample});
        next_sample += opts.sample_dt;
      }
    }

    tau += res.tau;
    UnitTangentFrame handoff_frame{
        lift.deck * chart_.frame(sigma * 3.0 * eta, res.s_out, c.w).frame,
        ChartTag::Bundle};
    record_letters(surface_->reduce_frame(handoff_frame));
    u_inc = handoff_frame;
    anchor = handoff_frame.frame;
    anchor_time = tau;
  };

  // initial state inside the box region: finish the traversal first
  {
    for (std::size_t j = 0; j < lifts.size(); ++j) {
      UnitTangentFrame rel{lifts[j].to_axis * u_inc.frame, ChartTag::Bundle};
      auto c = chart_.coords(rel);
      if (!c || !c->rightward || std::abs(c->w) >= two_eps) continue;
      if (c->t <= -3.0 * eta + 1e-12 || c->t >= 3.0 * eta - 1e-12) continue;
      if (params_.q != 0 && std::abs(c->t) < eta && std::abs(c->w) < params_.epsilon)
        fail(ErrorCode::BadParams, "seed lies inside the removed surgery core");
      const double handoff = 1.5 * eta;
      double iw = twist_.twist_integral(c->w);
      double tau_so_far = wall_elapsed(c->t, iw);
      double tau_full = 6.0 * eta + 2.0 * iw;
      double tau_rest = tau_full - tau_so_far;
      bool before_twist = sigma > 0 ? c->t < handoff : c->t >= handoff;
      double s_out = before_twist ? c->s + sigma * twist_.f(c->w) : c->s;
      bool crossing_ahead = sigma > 0 ? c->t < 0 : c->t > 0;
      if (crossing_ahead) {
        TrajectoryEvent crossing;
        crossing.kind = EventKind::TorusCrossing;
        crossing.time = tau + (wall_elapsed(0.0, iw) - tau_so_far);
        crossing.s = wrap_two_pi(c->s);
        crossing.w = c->w;
        crossing.direction = sigma > 0 ? +1 : -1;
        crossing.lift_index = static_cast<int>(j);
        traj.events.push_back(crossing);
      }
      TrajectoryEvent exit;
      exit.kind = EventKind::BoxExit;
      exit.time = tau + tau_rest;
      exit.s = wrap_two_pi(c->s);
      exit.s_out = wrap_two_pi(s_out);
      exit.w = c->w;
      exit.lift_index = static_cast<int>(j);
      traj.events.push_back(exit);
      if (params_.q != 0) {
        emit_samples_until(tau);
        tau += tau_rest;
        UnitTangentFrame handoff_frame{
            lifts[j].deck * chart_.frame(sigma * 3.0 * eta, s_out, c->w).frame,
            ChartTag::Bundle};
        record_letters(surface_->reduce_frame(handoff_frame));
        u_inc = handoff_frame;
        anchor = handoff_frame.frame;
        anchor_time = tau;
      } else {
        advance(std::min(tau_rest, total));
      }
      break;
    }
  }

  while (tau < total - 1e-12) {
    double dt = std::min(step, total - tau);
    const UnitTangentFrame& u = u_inc;

    // closed-form event predictions for this segment
    double best_time = dt + 1.0;
    int best_lift = -1;
    bool best_is_entry = false;
    ChartMap::BoxCoords best_coords{};
    for (std::size_t j = 0; j < lifts.size(); ++j) {
      UnitTangentFrame rel{lifts[j].to_axis * u.frame, ChartTag::Bundle};
      auto c = chart_.coords(rel);
      if (!c) continue;
      bool boxbound = c->rightward && std::abs(c->w) < two_eps;
      if (boxbound) {
        double to_entry = sigma > 0 ? -3.0 * eta - c->t : c->t - 3.0 * eta;
        if (to_entry > 1e-11 && to_entry <= dt && to_entry < best_time) {
          best_time = to_entry;
          best_lift = static_cast<int>(j);
          best_is_entry = true;
          best_coords = *c;
        }
      } else {
        double to_cross = sigma > 0 ? -c->t : c->t;
        if (to_cross > 1e-11 && to_cross <= dt && to_cross < best_time) {
          best_time = to_cross;
          best_lift = static_cast<int>(j);
          best_is_entry = false;
          best_coords = *c;
        }
      }
    }

    if (best_lift < 0) {
      advance(dt);
      continue;
    }

    const AxisLift& lift = lifts[static_cast<std::size_t>(best_lift)];
    if (best_is_entry) {
      // refine the wall hit by bisection on the t-coordinate sign function
      auto wall_fn = [&](double s_) {
        UnitTangentFrame probe = geodesic_step(u, sigma * s_);
        UnitTangentFrame rel{lift.to_axis * probe.frame, ChartTag::Bundle};
        auto c = chart_.coords(rel);
        if (!c) return -1.0;
        return sigma > 0 ? c->t + 3.0 * eta : 3.0 * eta - c->t;
      };
      double lo = std::max(0.0, best_time - 1e-9);
      double hi = std::min(dt, best_time + 1e-9);
      int it = 0;
      while (wall_fn(lo) > 0 && it++ < 100) lo = std::max(0.0, lo - 1e-9);
      while (wall_fn(hi) < 0 && it++ < 100) hi = std::min(dt, hi + 1e-9);
      if (it >= 100)
        fail(ErrorCode::EventResolutionFailure, "wall bracketing failed");
      for (int k = 0; k < 100 && hi - lo > 1e-13; ++k) {
        double mid = 0.5 * (lo + hi);
        (wall_fn(mid) < 0 ? lo : hi) = mid;
      }
      advance(0.5 * (lo + hi));
      UnitTangentFrame rel{lift.to_axis * u_inc.frame, ChartTag::Bundle};
      auto c = chart_.coords(rel);
      if (!c) fail(ErrorCode::EventResolutionFailure, "entry chart lookup failed");
      traverse_box(static_cast<std::size_t>(best_lift), *c);
      continue;
    }

    // free torus crossing: bisection on the side sign function
    double side0 = lift_side(lift, u.base_point());
    auto side_fn = [&](double s_) {
      return lift_side(lift, geodesic_step(u, sigma * s_).base_point());
    };
    if (side0 == 0.0) {
      advance(std::min(dt, best_time + 1e-9));
      continue;
    }
    double lo = 0.0, hi = std::min(dt, best_time + 1e-9);
    int it = 0;
    while (side_fn(hi) * side0 > 0 && it++ < 100 && hi < dt) hi = std::min(dt, hi + 1e-9);
    if (side_fn(hi) * side0 > 0) {
      advance(hi);
      continue;
    }
    for (int k = 0; k < 100 && hi - lo > 1e-13; ++k) {
      double mid = 0.5 * (lo + hi);
      (side_fn(mid) * side0 > 0 ? lo : hi) = mid;
    }
    advance(0.5 * (lo + hi));
    TrajectoryEvent e;
    e.kind = EventKind::TorusCrossing;
    e.time = tau;
    e.s = wrap_two_pi(best_coords.s);
    e.w = best_coords.w;
    e.direction = (best_coords.rightward ? +1 : -1) * (sigma > 0 ? +1 : -1);
    e.lift_index = best_lift;
    traj.events.push_back(e);
    advance(std::min(1e-9, total - tau));  // step past the wall
  }

  emit_samples_until(total);
  traj.final_state = u_inc;
  // a traversal begun shortly before the horizon runs to the exit wall, so
  // the flow may overshoot slightly
  traj.total_time = std::max(total, tau);
  traj.final_anchor = anchor;
  traj.final_anchor_time = anchor_time;
  traj.direction = sigma > 0 ? +1 : -1;
  std::erase_if(traj.events, [&](const TrajectoryEvent& e) {
    return e.time > traj.total_time + 1e-9;
  });
  std::stable_sort(traj.events.begin(), traj.events.end(),
                   [](const TrajectoryEvent& a, const TrajectoryEvent& b) {
                     return a.time < b.time;
                   });
  return traj;
}

// ---------------------------------------------------------------------------

double frame_distance(const FuchsianSurface& surface, const UnitTangentFrame& a,
                      const UnitTangentFrame& b, double cutoff) {
  const double probe = 0.5;
  Complex pa = a.base_point();
  Complex pfa = geodesic_step(a, probe).base_point();
  Complex pb = b.base_point();
  Complex pfb = geodesic_step(b, probe).base_point();
  double da = hyp_distance(pa, surface.base_point());
  double db = hyp_distance(pb, surface.base_point());
  const auto& cands = surface.near_deck(cutoff + 2.0 * surface.domain_circumradius() + 0.2);
  double best = cutoff;
  for (const auto& [g, w] : cands) {
    (void)w;
    double disp = hyp_distance(g.apply(surface.base_point()), surface.base_point());
    if (disp - da - db >= best) break;  // candidates are sorted by displacement
    double d1 = hyp_distance(pa, g.apply(pb));
    if (d1 >= best) continue;
    double d2 = hyp_distance(pfa, g.apply(pfb));
    best = std::min(best, std::max(d1, d2));
  }
  return best;
}

UnitTangentFrame random_frame(const FuchsianSurface& surface, Rng& rng) {
  // bounding box of the fundamental polygon in Klein coordinates
  double x0 = 1, x1 = -1, y0 = 1, y1 = -1;
  for (const auto& f : surface.faces()) {
    x0 = std::min(x0, f.v0.x());
    x1 = std::max(x1, f.v0.x());
    y0 = std::min(y0, f.v0.y());
    y1 = std::max(y1, f.v0.y());
  }
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1),
      ua(0.0, kTwoPi);
  for (int tries = 0; tries < 100000; ++tries) {
    Eigen::Vector2d k(ux(rng), uy(rng));
    bool ok = true;
    for (const auto& f : surface.faces())
      if (!f.inside(k)) { ok = false; break; }
    double angle = ua(rng);
    if (!ok) continue;
    return frame_from(from_klein(k), angle);
  }
  fail(ErrorCode::NonTermination, "rejection sampling failed");
}

namespace {

Eigen::Vector3d closure_residual(const FuchsianSurface& surface,
                                 const UnitTangentFrame& start,
                                 const UnitTangentFrame& end, Mobius* best_deck) {
  // find the deck move matching the reduced endpoint to the start
  const auto& cands = surface.near_deck(1.5);
  double best = std::numeric_limits<double>::infinity();
  Mobius pick = Mobius::identity();
  for (const auto& [g, w] : cands) {
    (void)w;
    double d = (g * end.frame).dist_to(start.frame);
    if (d < best) {
      best = d;
      pick = g;
    }
  }
  if (best_deck != nullptr) *best_deck = pick;
  Eigen::Matrix2d rel =
      (start.frame.inverse() * (pick * end.frame)).matrix();
  if (rel(0, 0) + rel(1, 1) < 0) rel = -rel;
  return Eigen::Vector3d(rel(0, 1), rel(1, 0), rel(0, 0) - rel(1, 1));
}

}  // namespace

std::optional<SurgeredOrbit> refine_orbit(const SurgeredFlow& flow,
                                          const UnitTangentFrame& seed,
                                          double period_guess, double tolerance) {
  const FuchsianSurface& surface = flow.surface();
  FlowOptions fo;
  fo.record_samples = false;

  UnitTangentFrame frame = seed;
  surface.reduce_frame(frame);
  double T = period_guess;

  auto evaluate = [&](const UnitTangentFrame& fr, double period,
                      Mobius* deck) -> Eigen::Vector3d {
    Trajectory t = flow.flow(fr, period, fo);
    return closure_residual(surface, t.initial, t.final_state, deck);
  };

  Mobius deck;
  Eigen::Vector3d r = evaluate(frame, T, &deck);
  double norm = r.norm();
  for (int iter = 0; iter < 40 && norm > tolerance; ++iter) {
    const double h = 1e-7;
    Eigen::Matrix<double, 3, 4> J;
    for (int k = 0; k < 3; ++k) {
      Eigen::Matrix2d xi = Eigen::Matrix2d::Zero();
      if (k == 0) { xi(0, 0) = h; xi(1, 1) = -h; }
      if (k == 1) xi(0, 1) = h;
      if (k == 2) xi(1, 0) = h;
      UnitTangentFrame pf{Mobius(Eigen::Matrix2d(frame.frame.matrix() *
                                                 (Eigen::Matrix2d::Identity() + xi))),
                          frame.chart_tag};
      J.col(k) = (evaluate(pf, T, nullptr) - r) / h;
    }
    J.col(3) = (evaluate(frame, T + h, nullptr) - r) / h;

    Eigen::Vector4d delta = J.completeOrthogonalDecomposition().solve(-r);
    double scale = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 8; ++bt) {
      Eigen::Matrix2d xi = Eigen::Matrix2d::Zero();
      xi(0, 0) = scale * delta(0);
      xi(1, 1) = -scale * delta(0);
      xi(0, 1) = scale * delta(1);
      xi(1, 0) = scale * delta(2);
      Eigen::Matrix2d stepped =
          frame.frame.matrix() * (Eigen::Matrix2d::Identity() + xi);
      double nT = T + scale * delta(3);
      if (nT < 0.05 || !(stepped.determinant() > 0) ||
          !stepped.allFinite()) {
        scale *= 0.5;
        continue;
      }
      UnitTangentFrame nf{Mobius(stepped), frame.chart_tag};
      Eigen::Vector3d nr = evaluate(nf, nT, &deck);
      if (nr.norm() < norm) {
        frame = nf;
        T = nT;
        r = nr;
        norm = nr.norm();
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }
  if (!(norm <= tolerance) || !(T > 0.05)) return std::nullopt;

  SurgeredOrbit orbit;
  orbit.seed = frame;
  orbit.period = T;
  orbit.residual = norm;
  orbit.source = OrbitSource::CloseReturn;
  Trajectory t = flow.flow(frame, T, fo);
  orbit.avoids_box = t.count(EventKind::BoxEntry) == 0;
  return orbit;
}

std::vector<SurgeredOrbit> find_periodic_orbits(
    const SurgeredFlow& flow, const std::vector<ConjugacyClassRecord>& census,
    const OrbitSearchOptions& opts, OrbitSearchStats* stats) {
  const FuchsianSurface& surface = flow.surface();
  std::vector<SurgeredOrbit> orbits;
  OrbitSearchStats st;

  FlowOptions quiet;
  quiet.record_samples = false;

  std::vector<Trajectory> accepted_tracks;
  FlowOptions tracking;
  tracking.sample_dt = 0.05;

  // (i) census geodesics clear of the surgery region keep their exact period
  for (const auto& rec : census) {
    if (orbits.size() >= opts.max_orbits) break;
    Mobius m = surface.evaluate(rec.cyclic_word);
    if (classify(m) != IsometryKind::Hyperbolic) continue;
    std::vector<UnitTangentFrame> seeds;
    if (rec.boundary_parallel) {
      // both parametrizations of the separating geodesic survive the surgery
      seeds.push_back(frame_from(Complex(0.0, 1.0), kPi / 2.0));
      seeds.push_back(frame_from(Complex(0.0, 1.0), -kPi / 2.0));
    } else {
      AxisEndpoints e = axis_endpoints(m);
      if (e.repelling && e.attracting) {
        double c = 0.5 * (*e.repelling + *e.attracting);
        double r = 0.5 * std::abs(*e.attracting - *e.repelling);
        double angle = *e.attracting > *e.repelling ? 0.0 : kPi;
        seeds.push_back(frame_from(Complex(c, r), angle));
      } else {
        double x = e.repelling ? *e.repelling : *e.attracting;
        bool up = !e.attracting;
        seeds.push_back(frame_from(Complex(x, 1.0), up ? kPi / 2.0 : -kPi / 2.0));
      }
    }
    for (const auto& seed : seeds) {
      if (orbits.size() >= opts.max_orbits) break;
      if (flow.params().q != 0) {
        // classes whose geodesic passes through the removed core are
        // scattered by the surgery and carry no corresponding orbit
        UnitTangentFrame probe = seed;
        surface.reduce_frame(probe);
        bool in_core = false;
        for (const auto& lift : surface.axis_lifts()) {
          UnitTangentFrame rel{lift.to_axis * probe.frame, ChartTag::Bundle};
          auto c = flow.chart().coords(rel);
          if (c && c->rightward && std::abs(c->w) < flow.params().epsilon &&
              std::abs(c->t) < flow.params().eta) {
            in_core = true;
            break;
          }
        }
        if (in_core) continue;
      }
      Trajectory t = flow.flow(seed, rec.length, tracking);
      bool entered = t.count(EventKind::BoxEntry) > 0;
      if (entered && flow.params().q != 0) continue;  // scattered by the box
      Eigen::Vector3d r = closure_residual(surface, t.initial, t.final_state, nullptr);
      if (r.norm() > 1e-7) continue;
      SurgeredOrbit orbit;
      orbit.seed = t.initial;
      orbit.period = rec.length;
      orbit.avoids_box = !entered;
      orbit.residual = r.norm();
      orbit.source = OrbitSource::CensusGeodesic;
      orbit.census_word = rec.cyclic_word;
      orbit.on_torus = rec.boundary_parallel;
      orbits.push_back(orbit);
      accepted_tracks.push_back(std::move(t));
    }
  }

  // (ii) close returns harvested from long sample tracks: any pair of
  // samples closer than the threshold seeds a shooting refinement. Seeds
  // scan in parallel; the merge respects the seed order so results do not
  // depend on the worker count.
  Rng rng(opts.rng_seed);
  FlowOptions sampling;
  sampling.record_samples = true;
  sampling.sample_dt = 0.05;

  std::vector<UnitTangentFrame> scan_seeds;
  for (std::size_t i = 0; i < opts.seeds; ++i)
    scan_seeds.push_back(random_frame(surface, rng));

  std::vector<std::vector<std::pair<UnitTangentFrame, double>>> per_seed(
      scan_seeds.size());
  parallel_for(scan_seeds.size(), [&](std::size_t i) {
    Trajectory t = flow.flow(scan_seeds[i], opts.search_time, sampling);

    // spatial hash on reduced Klein position; hyperbolic distance dominates
    // the Euclidean one, so neighbouring cells cover every close pair
    const double cell = opts.return_threshold;
    std::map<std::pair<long, long>, std::vector<std::size_t>> grid;
    auto key_of = [&](const UnitTangentFrame& f) {
      Eigen::Vector2d k = to_klein(f.base_point());
      return std::pair<long, long>(std::lround(std::floor(k.x() / cell)),
                                   std::lround(std::floor(k.y() / cell)));
    };
    std::size_t found_here = 0;
    for (std::size_t j = 0; j < t.samples.size(); ++j) {
      auto key = key_of(t.samples[j].frame);
      for (long dx = -1; dx <= 1 && found_here < 4; ++dx) {
        for (long dy = -1; dy <= 1 && found_here < 4; ++dy) {
          auto it = grid.find({key.first + dx, key.second + dy});
          if (it == grid.end()) continue;
          for (std::size_t idx : it->second) {
            double dt = t.samples[j].time - t.samples[idx].time;
            if (dt < opts.min_period) continue;
            double d = frame_distance(surface, t.samples[idx].frame,
                                      t.samples[j].frame,
                                      4.0 * opts.return_threshold);
            if (d < opts.return_threshold) {
              per_seed[i].emplace_back(t.samples[idx].frame, dt);
              ++found_here;
              break;
            }
          }
        }
      }
      grid[key].push_back(j);
    }
  });

  std::vector<std::pair<UnitTangentFrame, double>> candidates;
  for (const auto& bucket : per_seed)
    for (const auto& cand : bucket)
      if (candidates.size() < opts.max_candidates) candidates.push_back(cand);
  st.candidates = candidates.size();

  for (auto& [seed, guess] : candidates) {
    if (orbits.size() >= opts.max_orbits) break;
    auto orbit = refine_orbit(flow, seed, guess, opts.refine_tolerance);
    if (!orbit) {
      ++st.diverged;
      continue;
    }
    ++st.refined;
    bool dup = false;
    for (const auto& track : accepted_tracks) {
      if (std::abs(track.total_time - orbit->period) > 1e-4) continue;
      for (const auto& s : track.samples) {
        if (frame_distance(surface, s.frame, orbit->seed, 0.1) < 1e-3) {
          dup = true;
          break;
        }
      }
      if (dup) break;
    }
    if (dup) {
      ++st.duplicates;
      continue;
    }
    accepted_tracks.push_back(flow.flow(orbit->seed, orbit->period, tracking));
    orbits.push_back(*orbit);
  }

  if (stats != nullptr) *stats = st;
  return orbits;
}

}  // namespace reeblab
