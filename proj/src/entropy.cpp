#include "reeblab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace reeblab {

PhaseMetric::PhaseMetric(const FuchsianSurface& surface, double cutoff)
    : surface_(&surface), cutoff_(cutoff) {
  double radius = cutoff + 2.0 * surface.domain_circumradius() + 0.2;
  for (const auto& [g, w] : surface.near_deck(radius)) {
    (void)w;
    deck_.push_back(g);
    displacement_.push_back(hyp_distance(g.apply(surface.base_point()),
                                         surface.base_point()));
  }
}

PhaseMetric::Embedded PhaseMetric::embed(const UnitTangentFrame& u) const {
  return {u.base_point(), geodesic_step(u, 0.5).base_point()};
}

double PhaseMetric::operator()(const Embedded& a, const Embedded& b) const {
  double da = hyp_distance(a.base, surface_->base_point());
  double db = hyp_distance(b.base, surface_->base_point());
  double best = cutoff_;
  for (std::size_t i = 0; i < deck_.size(); ++i) {
    if (displacement_[i] - da - db >= best) break;  // sorted by displacement
    double d1 = hyp_distance(a.base, deck_[i].apply(b.base));
    if (d1 >= best) continue;
    double d2 = hyp_distance(a.front, deck_[i].apply(b.front));
    best = std::min(best, std::max(d1, d2));
  }
  return best;
}

namespace {

UnitTangentFrame reduced_geodesic_point(const FuchsianSurface& surface,
                                        const UnitTangentFrame& seed, double t) {
  UnitTangentFrame u = geodesic_step(seed, t);
  surface.reduce_frame(u);
  return u;
}

// separation walk: true when some sampled time separates the pair beyond
// the threshold; checks the late samples first since separation grows
bool pair_separated(const PhaseMetric& metric,
                    const std::vector<PhaseMetric::Embedded>& a,
                    const std::vector<PhaseMetric::Embedded>& b,
                    std::size_t first, std::size_t last, std::size_t stride,
                    double threshold) {
  for (std::size_t i = last; i >= first && i != static_cast<std::size_t>(-1);
       i -= stride) {
    if (metric(a[i], b[i]) > threshold) return true;
    if (i < first + stride) break;
  }
  return false;
}

}  // namespace

BowenLab::BowenLab(const FuchsianSurface& surface, double t_max,
                   const std::vector<double>& deltas, const BowenOptions& opts)
    : surface_(&surface), opts_(opts), t_max_(t_max) {
  if (deltas.empty()) fail(ErrorCode::BadParams, "empty delta grid");
  double delta_min = *std::min_element(deltas.begin(), deltas.end());
  min_delta_.assign(deltas.begin(), deltas.end());
  finest_dt_ = opts.sample_dt_factor * delta_min;

  Rng rng(opts.rng_seed);
  PhaseMetric metric(surface, 4.0 * opts.ball_radius);
  UnitTangentFrame center = random_frame(surface, rng);
  surface.reduce_frame(center);
  PhaseMetric::Embedded ec = metric.embed(center);

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double rho = opts.ball_radius;
  seeds_.reserve(opts.sample_budget);
  std::size_t guard = 0;
  while (seeds_.size() < opts.sample_budget) {
    if (++guard > 200 * opts.sample_budget)
      fail(ErrorCode::NonTermination, "seed ball sampling stalled");
    Complex z = center.base_point();
    Complex dz(unit(rng) * rho, unit(rng) * rho);
    double dth = unit(rng) * 2.0 * rho;
    UnitTangentFrame cand =
        frame_from(z + dz * z.imag(), center.direction_angle() + dth);
    if (metric(metric.embed(cand), ec) <= rho) seeds_.push_back(cand);
  }

  // flow every seed once at the finest discretization; greedy runs per
  // (T, delta) reuse these tracks with a stride
  std::size_t samples = static_cast<std::size_t>(std::ceil(t_max / finest_dt_)) + 1;
  tracks_.assign(seeds_.size(), {});
  PhaseMetric embed_metric(surface, 1.0);
  parallel_for(seeds_.size(), [&](std::size_t i) {
    auto& track = tracks_[i];
    track.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      double t = static_cast<double>(k) * finest_dt_;
      // constant rescaling slows the parametrization
      UnitTangentFrame u =
          reduced_geodesic_point(*surface_, seeds_[i], t / opts_.rescale);
      track.push_back(embed_metric.embed(u));
    }
  });
}

SeparatedSetResult BowenLab::count(double T, double delta) const {
  if (T > t_max_ + 1e-9)
    fail(ErrorCode::HorizonExceeded, "grid horizon exceeds precomputed tracks");
  SeparatedSetResult res;
  res.horizon = T;
  res.delta = delta;
  res.method = SeparationMethod::GreedySampling;
  res.threshold = delta * (1.0 + opts_.admission_margin);

  PhaseMetric metric(*surface_, 2.0 * res.threshold + 0.5);
  std::size_t stride = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(opts_.sample_dt_factor * delta / finest_dt_)));
  std::size_t last = std::min(
      tracks_.empty() ? 0 : tracks_[0].size() - 1,
      static_cast<std::size_t>(std::floor(T / finest_dt_)));

  std::vector<std::size_t> admitted;
  for (std::size_t i = 0; i < seeds_.size(); ++i) {
    bool ok = true;
    for (std::size_t j : admitted) {
      if (!pair_separated(metric, tracks_[i], tracks_[j], 0, last, stride,
                          res.threshold)) {
        ok = false;
        break;
      }
    }
    if (ok) admitted.push_back(i);
  }
  for (std::size_t i : admitted) res.points.push_back(seeds_[i]);
  res.n = admitted.size();
  // every seed admitted: a larger budget could only grow the set
  res.budget_exhausted = res.n == seeds_.size();
  return res;
}

bool BowenLab::verify(const SeparatedSetResult& result) const {
  return verify_separated_set(*surface_, result, opts_.rescale);
}

bool verify_separated_set(const FuchsianSurface& surface,
                          const SeparatedSetResult& result, double rescale) {
  PhaseMetric metric(surface, 2.0 * result.threshold + 0.5);
  double dt = 0.25 * result.delta;
  std::size_t samples =
      static_cast<std::size_t>(std::ceil(result.horizon / dt)) + 1;
  std::vector<std::vector<PhaseMetric::Embedded>> tracks(result.points.size());
  parallel_for(result.points.size(), [&](std::size_t i) {
    tracks[i].reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      double t = static_cast<double>(k) * dt;
      tracks[i].push_back(metric.embed(
          reduced_geodesic_point(surface, result.points[i], t / rescale)));
    }
  });
  for (std::size_t i = 0; i < tracks.size(); ++i)
    for (std::size_t j = i + 1; j < tracks.size(); ++j)
      if (!pair_separated(metric, tracks[i], tracks[j], 0, samples - 1, 1,
                          result.threshold))
        return false;
  return true;
}

SeparatedSetResult bowen_count(const FuchsianSurface& surface, double T,
                               double delta, const BowenOptions& opts) {
  BowenLab lab(surface, T, {delta}, opts);
  return lab.count(T, delta);
}

GrowthFit h_delta_fit(const std::vector<BowenGridEntry>& grid, double delta) {
  std::vector<double> ts, logs;
  for (const auto& e : grid) {
    if (std::abs(e.delta - delta) > 1e-12 || e.n == 0) continue;
    ts.push_back(e.horizon);
    logs.push_back(std::log(static_cast<double>(e.n)));
  }
  if (ts.size() < 4)
    fail(ErrorCode::InsufficientData, "slope fit needs at least 4 horizons");
  return fit_log_linear(ts, logs);
}

EntropyEstimate estimate_entropy(const FuchsianSurface& surface,
                                 const std::vector<double>& t_grid,
                                 const std::vector<double>& delta_grid,
                                 const BowenOptions& opts) {
  if (t_grid.empty() || delta_grid.empty())
    fail(ErrorCode::BadParams, "empty entropy grid");
  double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  BowenLab lab(surface, t_max, delta_grid, opts);

  EntropyEstimate est;
  for (double delta : delta_grid)
    for (double T : t_grid)
      est.grid.push_back({T, delta, lab.count(T, delta).n});

  double finest = *std::min_element(delta_grid.begin(), delta_grid.end());
  for (double delta : delta_grid)
    est.h_delta.emplace_back(delta, h_delta_fit(est.grid, delta));
  for (const auto& [delta, fit] : est.h_delta)
    if (std::abs(delta - finest) < 1e-12) est.h_top_estimate = fit.a;

  // empirical component-count rate over a handful of sample trajectories
  Rng rng(opts.rng_seed + 7);
  for (int i = 0; i < 8; ++i) {
    UnitTangentFrame seed = random_frame(surface, rng);
    ComponentCount c = component_count(surface, seed, surface.base_point(),
                                       finest, t_max);
    est.k_hat = std::max(est.k_hat, c.rate);
  }
  return est;
}

SeparatedSetResult orbit_separated_set(const FuchsianSurface& surface,
                                       const std::vector<OrbitSeparationInput>& orbits,
                                       double T, double delta,
                                       double admission_margin) {
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t j = i + 1; j < orbits.size(); ++j)
      if (orbits[i].class_word == orbits[j].class_word)
        fail(ErrorCode::ClassCollision, "two orbits share a free homotopy class");
  for (const auto& o : orbits)
    if (o.period > T + 1e-9)
      fail(ErrorCode::BadParams, "orbit period exceeds the horizon");

  SeparatedSetResult res;
  res.horizon = T;
  res.delta = delta;
  res.method = SeparationMethod::OrbitConstruction;
  res.threshold = delta * (1.0 + admission_margin);

  PhaseMetric metric(surface, 2.0 * res.threshold + 0.5);
  double dt = 0.25 * delta;
  std::size_t samples = static_cast<std::size_t>(std::ceil(T / dt)) + 1;
  std::vector<std::vector<PhaseMetric::Embedded>> tracks(orbits.size());
  parallel_for(orbits.size(), [&](std::size_t i) {
    tracks[i].reserve(samples);
    for (std::size_t k = 0; k < samples; ++k)
      tracks[i].push_back(metric.embed(reduced_geodesic_point(
          surface, orbits[i].seed, static_cast<double>(k) * dt)));
  });

  std::vector<std::size_t> admitted;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    bool ok = true;
    for (std::size_t j : admitted)
      if (!pair_separated(metric, tracks[i], tracks[j], 0, samples - 1, 1,
                          res.threshold)) {
        ok = false;
        break;
      }
    if (ok) admitted.push_back(i);
  }
  for (std::size_t i : admitted) res.points.push_back(orbits[i].seed);
  res.n = admitted.size();
  // direct pairwise certificate of the emitted set
  if (!verify_separated_set(surface, res))
    fail(ErrorCode::AssertionFailed, "orbit separated set failed its certificate");
  return res;
}

ComponentCount component_count(const FuchsianSurface& surface,
                               const UnitTangentFrame& seed, Complex p,
                               double delta, double T) {
  Complex p_tilde = surface.reduce_to_domain(p).point;
  double reach = 2.0 * surface.domain_circumradius() + 4.0 * delta + 0.3;
  const auto& cands = surface.near_deck(reach);

  // walk the lifted trajectory and label visited deck copies of the ball
  SurgeryParams trivial;
  trivial.q = 0;
  SurgeredFlow flow(surface, trivial);
  FlowOptions fo;
  fo.sample_dt = std::min(0.5 * delta, 0.05);
  Trajectory traj = flow.flow(seed, T, fo);

  Mobius deck_accum = Mobius::identity();
  std::size_t next_event = 0;
  std::set<std::array<long long, 4>> labels;
  for (const auto& s : traj.samples) {
    while (next_event < traj.events.size() &&
           traj.events[next_event].time <= s.time + 1e-12) {
      const auto& e = traj.events[next_event++];
      if (e.kind == EventKind::DomainLetter)
        deck_accum = deck_accum * surface.evaluate(e.letters);
    }
    for (const auto& [mu, w] : cands) {
      (void)w;
      if (hyp_distance(s.frame.base_point(), mu.apply(p_tilde)) < 4.0 * delta) {
        Mobius label = deck_accum * mu;
        const Eigen::Matrix2d& m = label.matrix();
        auto q = [](double v) { return static_cast<long long>(std::llround(v * 1e7)); };
        labels.insert({q(m(0, 0)), q(m(0, 1)), q(m(1, 0)), q(m(1, 1))});
      }
    }
  }
  ComponentCount out;
  out.count = labels.size();
  out.rate = T > 0 ? (static_cast<double>(labels.size()) - 1.0) / T : 0.0;
  return out;
}

ConsistencyReport check_growth_entropy_bound(const GrowthFit& fit, const EntropyEstimate& est,
                              double tol, const EntropyEstimate* rescaled,
                              double rescale) {
  ConsistencyReport rep;
  rep.fitted_a = fit.a;
  rep.h_estimate = est.h_top_estimate;
  rep.tolerance = tol;
  rep.pass = fit.a <= est.h_top_estimate + tol;
  if (!rep.pass)
    fail(ErrorCode::AssertionFailed,
         "growth rate " + std::to_string(fit.a) + " exceeds entropy estimate " +
             std::to_string(est.h_top_estimate) + " + " + std::to_string(tol));
  if (rescaled != nullptr) {
    rep.rescaled_h = rescaled->h_top_estimate;
    rep.rescale = rescale;
    if (!(rescaled->h_top_estimate >= fit.a / rescale - tol)) {
      rep.pass = false;
      fail(ErrorCode::AssertionFailed,
           "rescaled estimate " + std::to_string(rescaled->h_top_estimate) +
               " falls below a/c - tol");
    }
  }
  return rep;
}

}  // namespace reeblab
