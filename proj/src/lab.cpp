#include "reeblab/lab.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "reeblab/oracles.hpp"

namespace reeblab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// crash isolation: artifacts land under their final name only when complete
void atomic_write(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IOError, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IOError, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json frame_to_json(const UnitTangentFrame& u) {
  const Eigen::Matrix2d& m = u.frame.matrix();
  return json::array({m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
}

json class_to_json(const OrbitClass& cls) {
  json j;
  if (cls.has_crossings) {
    json arcs = json::array();
    for (const auto& arc : cls.sequence.arcs)
      arcs.push_back({{"side", side_name(arc.side)},
                      {"word", word_to_string(arc.relative_word)},
                      {"nontrivial", arc.nontrivial}});
    j["kind"] = "crossing_sequence";
    j["crossing_count"] = cls.sequence.crossing_count();
    j["arcs"] = arcs;
  } else {
    j["kind"] = "one_sided";
    j["word"] = word_to_string(cls.word);
    j["side"] = side_name(cls.side);
    j["tangent_to_torus"] = cls.tangent_to_torus;
  }
  j["contractible"] = is_contractible(cls);
  return j;
}

// finite-difference pullback of the canonical contact form through the
// collar chart; returns the (dt, ds, dw) components at a chart point
Eigen::Vector3d chart_pullback(const ChartMap& chart, double t, double s,
                               double w) {
  const double h = 1e-6;
  Eigen::Vector3d out;
  UnitTangentFrame u0 = chart.frame(t, s, w);
  Complex z0 = u0.base_point();
  double ang = u0.direction_angle();
  Complex dir(std::cos(ang), std::sin(ang));
  for (int k = 0; k < 3; ++k) {
    double tp = t + (k == 0 ? h : 0), sp = s + (k == 1 ? h : 0),
           wp = w + (k == 2 ? h : 0);
    double tm = t - (k == 0 ? h : 0), sm = s - (k == 1 ? h : 0),
           wm = w - (k == 2 ? h : 0);
    Complex zp = chart.frame(tp, sp, wp).base_point();
    Complex zm = chart.frame(tm, sm, wm).base_point();
    Complex v = (zp - zm) / (2.0 * h);
    out(k) = (v.real() * dir.real() + v.imag() * dir.imag()) / z0.imag();
  }
  return out;
}

// endpoint discrepancy free of acosh cancellation: chordal distance of the
// base and probe points, minimized over nearby deck motions
double endpoint_error(const FuchsianSurface& surface, const UnitTangentFrame& a,
                      const UnitTangentFrame& b) {
  auto chordal = [](Complex z, Complex w) {
    return std::abs(z - w) / std::sqrt(z.imag() * w.imag());
  };
  Complex pa = a.base_point(), fa = geodesic_step(a, 0.5).base_point();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [g, word] : surface.near_deck(1.0)) {
    (void)word;
    UnitTangentFrame gb{g * b.frame, ChartTag::Bundle};
    double d = std::max(chordal(pa, gb.base_point()),
                        chordal(fa, geodesic_step(gb, 0.5).base_point()));
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

Lab::Lab(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}
Lab::~Lab() = default;

const FuchsianSurface& Lab::surface() {
  if (!surface_) {
    SurfaceOptions opts;
    opts.discreteness_word_len = cfg_.discreteness_word_len;
    surface_ = FuchsianSurface::build(cfg_.surface, opts);
  }
  return *surface_;
}

const CensusTable& Lab::census() {
  if (!census_) {
    CensusOptions opts;
    opts.node_budget = cfg_.census.node_budget;
    opts.grid_step = cfg_.census.grid_step;
    census_ = enumerate_classes(surface(), cfg_.census.t_max, opts);
  }
  return *census_;
}

const SurgeredFlow& Lab::flow() {
  if (!flow_) flow_ = std::make_unique<SurgeredFlow>(surface(), cfg_.surgery);
  return *flow_;
}

const std::vector<SurgeredOrbit>& Lab::orbits() {
  if (!orbits_) {
    OrbitSearchOptions opts;
    opts.seeds = cfg_.orbits.seeds;
    opts.search_time = cfg_.orbits.search_time;
    opts.return_threshold = cfg_.orbits.return_threshold;
    opts.max_orbits = cfg_.orbits.max_orbits;
    opts.refine_tolerance = cfg_.orbits.refine_tolerance;
    opts.rng_seed = cfg_.rng_seed;
    orbits_ = find_periodic_orbits(flow(), census().records, opts, nullptr);
  }
  return *orbits_;
}

// ---------------------------------------------------------------------------
// artifact writers

std::vector<std::string> Lab::write_data_artifacts(const std::string& dir) {
  return write_data_artifacts(dir, {"census", "entropy", "orbits", "suspension", "torus"});
}

std::vector<std::string> Lab::write_data_artifacts(
    const std::string& dir, const std::vector<std::string>& groups) {
  std::vector<std::string> written;
  fs::path base(dir);
  auto wants = [&](const char* g) {
    return std::find(groups.begin(), groups.end(), g) != groups.end();
  };

  // census database and counts
  if (wants("census")) {
    std::ostringstream jsonl;
    for (const auto& r : census().records) {
      json j{{"cyclic_word", word_to_string(r.cyclic_word)},
             {"trace", r.trace},
             {"length", r.length},
             {"side", side_name(r.side)},
             {"primitive", r.primitive},
             {"boundary_parallel", r.boundary_parallel}};
      jsonl << j.dump() << '\n';
    }
    atomic_write(base / "census.jsonl", jsonl.str());
    written.push_back((base / "census.jsonl").string());

    std::ostringstream csv;
    csv << "T,N,P\n";
    for (double t = cfg_.census.grid_step; t <= cfg_.census.t_max + 1e-9;
         t += cfg_.census.grid_step)
      csv << fmt(t) << ',' << census().count_n(t) << ',' << census().count_p(t)
          << '\n';
    atomic_write(base / "census_counts.csv", csv.str());
    written.push_back((base / "census_counts.csv").string());
  }

  // entropy grids and fits
  if (wants("entropy")) {
    if (!entropy_) {
      BowenOptions bo;
      bo.sample_budget = cfg_.entropy.sample_budget;
      bo.ball_radius = cfg_.entropy.ball_radius;
      bo.admission_margin = cfg_.entropy.admission_margin;
      bo.rng_seed = cfg_.rng_seed + 1;
      entropy_ = estimate_entropy(surface(), cfg_.entropy.t_grid,
                                  cfg_.entropy.delta_grid, bo);
    }
    std::ostringstream csv;
    csv << "T,delta,n,method\n";
    for (const auto& e : entropy_->grid)
      csv << fmt(e.horizon) << ',' << fmt(e.delta) << ',' << e.n
          << ",greedy_sampling\n";
    atomic_write(base / "entropy_grid.csv", csv.str());
    written.push_back((base / "entropy_grid.csv").string());

    std::ostringstream fits;
    fits << "delta,a,b,residual\n";
    for (const auto& [delta, fit] : entropy_->h_delta)
      fits << fmt(delta) << ',' << fmt(fit.a) << ',' << fmt(fit.b) << ','
           << fmt(fit.residual) << '\n';
    atomic_write(base / "entropy_fits.csv", fits.str());
    written.push_back((base / "entropy_fits.csv").string());
  }

  // orbit database with classifications
  if (wants("orbits")) {
    std::ostringstream jsonl;
    FlowOptions fo;
    fo.sample_dt = 0.0125;
    for (const auto& o : orbits()) {
      Trajectory t = flow().flow(o.seed, o.period, fo);
      OrbitClass cls = surgered_class(surface(), t, cfg_.surgery.delta);
      json j{{"seed", frame_to_json(o.seed)},
             {"period", o.period},
             {"avoids_box", o.avoids_box},
             {"residual", o.residual},
             {"source", o.source == OrbitSource::CensusGeodesic ? "census"
                                                                : "close_return"},
             {"on_torus", o.on_torus},
             {"classification", class_to_json(cls)}};
      if (o.census_word) j["class"] = word_to_string(*o.census_word);
      jsonl << j.dump() << '\n';
    }
    atomic_write(base / "orbits.jsonl", jsonl.str());
    written.push_back((base / "orbits.jsonl").string());
  }

  // suspension census
  if (wants("suspension")) {
    TransitionMatrix M = parse_transition_matrix(cfg_.suspension.matrix);
    NecklaceCensus nc = necklace_count(M, cfg_.suspension.k_max);
    std::ostringstream csv;
    csv << "k,closed_walks,necklaces,aperiodic,cumulative\n";
    for (int k = 1; k <= nc.k_max; ++k) {
      std::size_t i = static_cast<std::size_t>(k - 1);
      csv << k << ',' << nc.closed_walks[i] << ',' << nc.necklaces[i] << ','
          << nc.aperiodic[i] << ',' << nc.cumulative[i] << '\n';
    }
    atomic_write(base / "necklace_census.csv", csv.str());
    written.push_back((base / "necklace_census.csv").string());
  }

  // torus demonstration loops
  if (wants("torus")) {
    auto [la, lb] = torus_counterexample(cfg_.torus_demo.delta);
    auto loop_json = [](const TorusLoop& l) {
      json pts = json::array();
      for (const auto& p : l.lift_points) pts.push_back({p.x(), p.y(), p.z()});
      return json{{"winding", {l.winding.x(), l.winding.y(), l.winding.z()}},
                  {"period", l.period},
                  {"lift_points", pts},
                  {"primitive", l.primitive()}};
    };
    json j{{"delta", cfg_.torus_demo.delta},
           {"sup_distance", torus_sup_distance(la, lb)},
           {"loops", {loop_json(la), loop_json(lb)}}};
    atomic_write(base / "torus_demo.json", j.dump(2) + "\n");
    written.push_back((base / "torus_demo.json").string());
  }

  return written;
}

void Lab::append_manifest(const std::string& subcommand,
                          const std::vector<std::string>& artifacts,
                          const std::vector<CheckResult>& checks) {
  fs::path path = fs::path(cfg_.output_dir) / "manifest.json";
  json manifest = json::array();
  if (fs::exists(path)) {
    json parsed = json::parse(read_file(path), nullptr, false);
    if (parsed.is_array()) manifest = parsed;
  }
  json run{{"subcommand", subcommand},
           {"config_hash", cfg_.hash()},
           {"version", "reeblab 0.1.0"},
           {"timestamp", static_cast<long long>(std::time(nullptr))},
           {"artifacts", artifacts}};
  if (!checks.empty()) {
    json cj = json::array();
    for (const auto& c : checks)
      cj.push_back({{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    run["checks"] = cj;
  }
  manifest.push_back(run);
  atomic_write(path, manifest.dump(2) + "\n");
}

void Lab::write_report(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  out << "reeblab run report\n";
  out << "config hash: " << cfg_.hash() << "\n\n";
  if (census_) {
    out << "census: " << census_->records.size() << " classes up to T = "
        << cfg_.census.t_max << "\n";
    if (census_fit_)
      out << "  growth fit on [" << cfg_.census.fit_lo << ", " << cfg_.census.fit_hi
          << "]: a = " << census_fit_->a << ", b = " << census_fit_->b
          << " (rms " << census_fit_->residual << ")\n";
  }
  if (entropy_) {
    out << "entropy estimate: h = " << entropy_->h_top_estimate << "\n";
    for (const auto& [delta, fit] : entropy_->h_delta)
      out << "  h_delta(" << delta << ") = " << fit.a << "\n";
    out << "  component-count rate K = " << entropy_->k_hat << "\n";
  }
  if (census_fit_ && entropy_)
    out << "growth vs entropy: a_fit = " << census_fit_->a
        << " <= h + 0.3 = " << entropy_->h_top_estimate + 0.3 << "\n";
  if (orbits_) {
    std::size_t boxless = 0;
    for (const auto& o : *orbits_)
      if (o.avoids_box) ++boxless;
    out << "orbits: " << orbits_->size() << " (" << boxless
        << " avoid the surgery box)\n";
    if (cfg_.surgery.q == 0) out << "  degenerate: geodesic flow\n";
  }
  if (!checks.empty()) {
    out << "\nchecks:\n";
    for (const auto& c : checks)
      out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": "
          << c.details << "\n";
  }
  atomic_write(fs::path(cfg_.output_dir) / "report.txt", out.str());
}

// ---------------------------------------------------------------------------
// subcommands

int Lab::run_census() {
  census();
  census_fit_ = fit_growth(census(), cfg_.census.fit_lo, cfg_.census.fit_hi,
                           cfg_.census.grid_step);
  auto artifacts = write_data_artifacts(cfg_.output_dir, {"census"});
  append_manifest("census", artifacts, {});
  write_report({});
  return 0;
}

int Lab::run_entropy() {
  BowenOptions bo;
  bo.sample_budget = cfg_.entropy.sample_budget;
  bo.ball_radius = cfg_.entropy.ball_radius;
  bo.admission_margin = cfg_.entropy.admission_margin;
  bo.rng_seed = cfg_.rng_seed + 1;
  entropy_ = estimate_entropy(surface(), cfg_.entropy.t_grid,
                              cfg_.entropy.delta_grid, bo);
  auto artifacts = write_data_artifacts(cfg_.output_dir, {"entropy"});
  append_manifest("entropy", artifacts, {});
  write_report({});
  return 0;
}

int Lab::run_surgery() {
  validate_params(cfg_.surgery);
  orbits();
  auto artifacts = write_data_artifacts(cfg_.output_dir, {"orbits"});
  append_manifest("surgery", artifacts, {});
  write_report({});
  return 0;
}

int Lab::run_suspend() {
  TransitionMatrix M = parse_transition_matrix(cfg_.suspension.matrix);
  necklace_count(M, cfg_.suspension.k_max);
  MappingTorusModel model;
  model.monodromy = M.m.cast<double>();
  model.eps_form = cfg_.suspension.eps_form;
  check_equivariance(model, 500, cfg_.rng_seed + 2);
  auto artifacts = write_data_artifacts(cfg_.output_dir, {"suspension"});
  append_manifest("suspend", artifacts, {});
  write_report({});
  return 0;
}

int Lab::run_demo_torus() {
  auto artifacts = write_data_artifacts(cfg_.output_dir, {"torus"});
  append_manifest("demo-torus", artifacts, {});
  write_report({});
  return 0;
}

int Lab::run_verify() {
  auto checks = acceptance(true);
  bool all = true;
  for (const auto& c : checks) {
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.details.c_str());
    all = all && c.pass;
  }
  auto artifacts = write_data_artifacts(cfg_.output_dir);
  append_manifest("verify", artifacts, checks);
  write_report(checks);
  return all ? 0 : 1;
}

int Lab::run(const std::string& subcommand) {
  if (subcommand == "census") return run_census();
  if (subcommand == "entropy") return run_entropy();
  if (subcommand == "surgery") return run_surgery();
  if (subcommand == "suspend") return run_suspend();
  if (subcommand == "verify") return run_verify();
  if (subcommand == "demo-torus") return run_demo_torus();
  fail(ErrorCode::ConfigError, "unknown subcommand: " + subcommand);
}

// ---------------------------------------------------------------------------
// verification checks

std::vector<CheckResult> Lab::acceptance(bool emit_artifacts) {
  std::vector<CheckResult> results;
  auto check = [&](const std::string& name, auto&& body) {
    CheckResult r;
    r.name = name;
    try {
      r.details = body();
      r.pass = true;
    } catch (const std::exception& e) {
      r.pass = false;
      r.details = e.what();
    }
    results.push_back(r);
  };

  const SurgeryParams& sp = cfg_.surgery;

  // 1. exact normal form of the collar chart
  check("normal-form chart pullback", [&]() -> std::string {
    ChartMap chart(surface(), sp);
    Rng rng(cfg_.rng_seed + 10);
    std::uniform_real_distribution<double> ut(-3 * sp.eta, 3 * sp.eta),
        us(0.0, kTwoPi), uw(-2 * sp.epsilon, 2 * sp.epsilon);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double t = ut(rng), s = us(rng), w = uw(rng);
      Eigen::Vector3d comp = chart_pullback(chart, t, s, w);
      worst = std::max({worst, std::abs(comp(0) - 1.0), std::abs(comp(1) - w),
                        std::abs(comp(2))});
    }
    if (worst > 1e-6)
      fail(ErrorCode::AssertionFailed, "pullback deviation " + fmt(worst));
    return "max component deviation " + fmt(worst) + " over 1000 points";
  });

  // 2. q = 0 degenerates to the geodesic flow
  check("degenerate surgery q=0", [&]() -> std::string {
    SurgeryParams p0 = sp;
    p0.q = 0;
    SurgeredFlow f0(surface(), p0);
    Rng rng(cfg_.rng_seed + 11);
    FlowOptions fo;
    fo.record_samples = false;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      UnitTangentFrame seed = random_frame(surface(), rng);
      Trajectory t = f0.flow(seed, 20.0, fo);
      UnitTangentFrame ref = seed;
      surface().reduce_frame(ref);
      ref = geodesic_step(ref, 20.0);
      UnitTangentFrame hyb = t.exact_endpoint();
      surface().reduce_frame(ref);
      surface().reduce_frame(hyb);
      worst = std::max(worst, endpoint_error(surface(), hyb, ref));
    }
    if (worst > 1e-9)
      fail(ErrorCode::AssertionFailed, "endpoint error " + fmt(worst));
    return "max endpoint error " + fmt(worst) + " over 100 seeds, T=20";
  });

  // 3. box scattering closed form against quadrature
  check("box scattering closed form", [&]() -> std::string {
    double worst_tau = 0.0, worst_shift = 0.0;
    for (int q = -3; q <= 3; ++q) {
      SurgeryParams p = sp;
      p.q = q;
      if (q != 0) p.epsilon = 0.9 * p.epsilon_max();
      validate_params(p);
      TwistData twist(p);
      for (int i = 0; i < 100; ++i) {
        double w = -2 * p.epsilon + 4 * p.epsilon * (i + 0.5) / 100.0;
        BoxTraverseResult res = box_traverse(0.7, w, twist, p);
        worst_shift =
            std::max(worst_shift, std::abs((res.s_out - 0.7) - twist.f(w)));
        double tau = oracle::box_time_quadrature(twist, p, w);
        worst_tau = std::max(worst_tau, std::abs(tau - res.tau));
      }
    }
    if (worst_shift > 1e-12)
      fail(ErrorCode::AssertionFailed, "exit shift deviates from f(w)");
    if (worst_tau > 1e-8)
      fail(ErrorCode::AssertionFailed, "traversal time error " + fmt(worst_tau));
    return "time error " + fmt(worst_tau) + ", shift exact, q in {-3..3}";
  });

  // 4. parameter contract keeps the contact condition
  check("parameter contract", [&]() -> std::string {
    double worst = 0.0;
    for (int q = -3; q <= 3; ++q) {
      if (q == 0) continue;
      SurgeryParams p = sp;
      p.q = q;
      p.epsilon = 0.9 * p.epsilon_max();
      ParamReport rep = validate_params(p);
      worst = std::max(worst, rep.sup_dt_r);
    }
    if (!(worst < 1.0))
      fail(ErrorCode::AssertionFailed, "sup |dr/dt| = " + fmt(worst));
    return "sup |dr/dt| = " + fmt(worst) + " < 1 for all tested q";
  });

  // 5. census exactness against the word oracle
  check("census exactness", [&]() -> std::string {
    for (int handle = 1; handle <= 2; ++handle) {
      auto records = enumerate_handle_classes(surface(), handle, 8);
      auto expected = oracle::free_cyclic_classes(handle, 8);
      if (records.size() != expected.size())
        fail(ErrorCode::AssertionFailed,
             "class count mismatch: " + std::to_string(records.size()) + " vs " +
                 std::to_string(expected.size()));
      for (std::size_t i = 0; i < records.size(); ++i) {
        bool found = false;
        for (const auto& e : expected)
          if (e == records[i].cyclic_word) found = true;
        if (!found)
          fail(ErrorCode::AssertionFailed,
               "missing class " + word_to_string(records[i].cyclic_word));
      }
    }
    Mobius m(2, 1, 1, 1);
    double len = translation_length(m);
    double expect = 2.0 * std::acosh(1.5);
    double via_axis = oracle::axis_displacement_length(m);
    if (std::abs(len - expect) > 1e-12 || std::abs(len - via_axis) > 1e-12)
      fail(ErrorCode::AssertionFailed, "translation length mismatch");
    return "handle classes match oracle up to length 8; lengths exact";
  });

  // 6. geodesic-orbit correspondence away from the surgery region
  check("orbit-geodesic correspondence", [&]() -> std::string {
    FlowOptions fo;
    fo.sample_dt = 0.025;
    std::size_t good = 0;
    for (const auto& o : orbits()) {
      if (o.source != OrbitSource::CensusGeodesic || !o.census_word) continue;
      if (o.on_torus || !o.avoids_box) continue;
      // S1 classes only, clear of the collar
      if (!conjugate_into_handle(surface().group(), *o.census_word, 1)) continue;
      Trajectory t = flow().flow(o.seed, o.period, fo);
      if (t.count(EventKind::BoxEntry) != 0) continue;
      double clearance = std::numeric_limits<double>::infinity();
      for (const auto& s : t.samples)
        clearance = std::min(clearance, surface().distance_to_separating_lifts(
                                            s.frame.base_point()));
      if (clearance <= sp.delta) continue;
      if (o.residual > 1e-6) continue;
      ++good;
    }
    if (good < 20)
      fail(ErrorCode::AssertionFailed,
           "only " + std::to_string(good) + " verified correspondences");
    return std::to_string(good) + " S1 classes with exact-period orbits";
  });

  // 7. hypertightness probe over the orbit set
  check("hypertightness probe", [&]() -> std::string {
    FlowOptions fo;
    fo.sample_dt = 0.0125;
    std::size_t refined = 0, crossing_orbits = 0;
    for (const auto& o : orbits()) {
      if (refined >= 150) break;
      auto ref = refine_orbit(flow(), o.seed, o.period, cfg_.orbits.refine_tolerance);
      if (!ref) continue;
      Trajectory t = flow().flow(ref->seed, ref->period, fo);
      OrbitClass cls = surgered_class(surface(), t, sp.delta);
      if (is_contractible(cls))
        fail(ErrorCode::AssertionFailed, "contractible orbit found");
      if (cls.has_crossings) {
        ++crossing_orbits;
        if (cls.sequence.crossing_count() % 2 != 0)
          fail(ErrorCode::AssertionFailed, "odd crossing count");
        for (const auto& arc : cls.sequence.arcs)
          if (!arc.nontrivial)
            fail(ErrorCode::AssertionFailed, "trivial relative class in an arc");
      }
      ++refined;
    }
    if (refined < 100)
      fail(ErrorCode::AssertionFailed,
           "only " + std::to_string(refined) + " orbits refined");
    return std::to_string(refined) + " refined orbits non-contractible, " +
           std::to_string(crossing_orbits) + " with crossing sequences";
  });

  // 8. entropy versus homotopical growth
  check("entropy vs growth", [&]() -> std::string {
    census_fit_ = fit_growth(census(), cfg_.census.fit_lo, cfg_.census.fit_hi,
                             cfg_.census.grid_step);
    if (!(census_fit_->a >= 0.5 && census_fit_->a <= 1.1))
      fail(ErrorCode::AssertionFailed, "census rate " + fmt(census_fit_->a) +
                                           " outside [0.5, 1.1]");
    BowenOptions bo;
    bo.sample_budget = cfg_.entropy.sample_budget;
    bo.ball_radius = cfg_.entropy.ball_radius;
    bo.admission_margin = cfg_.entropy.admission_margin;
    bo.rng_seed = cfg_.rng_seed + 1;
    if (!entropy_)
      entropy_ = estimate_entropy(surface(), cfg_.entropy.t_grid,
                                  cfg_.entropy.delta_grid, bo);
    double h = entropy_->h_top_estimate;
    if (!(h >= 0.6 && h <= 1.3))
      fail(ErrorCode::AssertionFailed, "entropy estimate " + fmt(h) +
                                           " outside [0.6, 1.3]");
    BowenOptions slow = bo;
    slow.rescale = cfg_.entropy.rescale_check;
    EntropyEstimate est2 = estimate_entropy(surface(), cfg_.entropy.t_grid,
                                            cfg_.entropy.delta_grid, slow);
    check_growth_entropy_bound(*census_fit_, *entropy_, 0.3, &est2, slow.rescale);
    double expect = h / slow.rescale;
    if (std::abs(est2.h_top_estimate - expect) > 0.2)
      fail(ErrorCode::AssertionFailed,
           "rescaled estimate " + fmt(est2.h_top_estimate) + " vs " + fmt(expect));
    return "a = " + fmt(census_fit_->a) + ", h = " + fmt(h) +
           ", rescaled h = " + fmt(est2.h_top_estimate);
  });

  // 9. separated-set certificates
  check("separated-set certificates", [&]() -> std::string {
    BowenOptions bo;
    bo.sample_budget = std::min<std::size_t>(cfg_.entropy.sample_budget, 1200);
    bo.ball_radius = cfg_.entropy.ball_radius;
    bo.admission_margin = cfg_.entropy.admission_margin;
    bo.rng_seed = cfg_.rng_seed + 1;
    double t_mid = cfg_.entropy.t_grid[cfg_.entropy.t_grid.size() / 2];
    SeparatedSetResult greedy = bowen_count(surface(), t_mid, 0.1, bo);
    if (!verify_separated_set(surface(), greedy))
      fail(ErrorCode::AssertionFailed, "greedy separated set failed re-check");

    std::vector<OrbitSeparationInput> inputs;
    double t_horizon = 0.0;
    for (const auto& r : census().records) {
      if (inputs.size() >= 60) break;
      if (!r.primitive || r.boundary_parallel) continue;
      Mobius m = surface().evaluate(r.cyclic_word);
      AxisEndpoints e = axis_endpoints(m);
      if (!e.repelling || !e.attracting) continue;
      double c = 0.5 * (*e.repelling + *e.attracting);
      double rad = 0.5 * std::abs(*e.attracting - *e.repelling);
      OrbitSeparationInput in;
      in.seed = frame_from(Complex(c, rad),
                           *e.attracting > *e.repelling ? 0.0 : kPi);
      in.period = r.length;
      in.class_word = r.cyclic_word;
      inputs.push_back(in);
      t_horizon = std::max(t_horizon, r.length);
    }
    if (inputs.size() < 50)
      fail(ErrorCode::AssertionFailed, "not enough distinct classes");
    SeparatedSetResult orbit_set =
        orbit_separated_set(surface(), inputs, t_horizon, 0.05);
    if (!verify_separated_set(surface(), orbit_set))
      fail(ErrorCode::AssertionFailed, "orbit separated set failed re-check");
    return "greedy n = " + std::to_string(greedy.n) + ", orbit n = " +
           std::to_string(orbit_set.n) + ", both re-verified";
  });

  // 10. suspension growth and equivariance
  check("suspension growth", [&]() -> std::string {
    TransitionMatrix M = parse_transition_matrix("2 1\n1 1");
    NecklaceCensus nc = necklace_count(M, 12);
    auto brute = oracle::necklace_enumeration(M, 12);
    for (int k = 1; k <= 12; ++k)
      if (nc.necklaces[static_cast<std::size_t>(k - 1)] !=
          brute[static_cast<std::size_t>(k - 1)])
        fail(ErrorCode::AssertionFailed,
             "necklace mismatch at k=" + std::to_string(k));
    double target = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    if (std::abs(nc.fit.a - target) > 0.02 * target)
      fail(ErrorCode::AssertionFailed,
           "fitted rate " + fmt(nc.fit.a) + " vs " + fmt(target));
    MappingTorusModel model;
    model.monodromy << 2, 1, 1, 1;
    model.eps_form = cfg_.suspension.eps_form;
    EquivarianceReport rep = check_equivariance(model, 500, cfg_.rng_seed + 2);
    return "counts exact to k=12, rate " + fmt(nc.fit.a) + ", pullback error " +
           fmt(rep.max_pullback_err);
  });

  // 11. flat-torus counterexample
  check("torus counterexample", [&]() -> std::string {
    auto [la, lb] = torus_counterexample(cfg_.torus_demo.delta);
    double d = torus_sup_distance(la, lb);
    if (!(d < cfg_.torus_demo.delta))
      fail(ErrorCode::AssertionFailed, "sup distance " + fmt(d));
    if (la.winding == lb.winding)
      fail(ErrorCode::AssertionFailed, "windings coincide");
    if (!la.primitive() || !lb.primitive())
      fail(ErrorCode::AssertionFailed, "class not primitive");
    return "sup distance " + fmt(d) + ", windings (1,2,0) vs (1,3,0)";
  });

  // 12. byte-identical reproducibility of the data artifacts
  check("reproducibility", [&]() -> std::string {
    if (!emit_artifacts) return "skipped (no artifact directory)";
    fs::path dir_a = fs::path(cfg_.output_dir) / "repro_a";
    fs::path dir_b = fs::path(cfg_.output_dir) / "repro_b";
    auto files_a = write_data_artifacts(dir_a.string());
    Lab fresh(cfg_);
    auto files_b = fresh.write_data_artifacts(dir_b.string());
    if (files_a.size() != files_b.size())
      fail(ErrorCode::AssertionFailed, "artifact sets differ");
    for (std::size_t i = 0; i < files_a.size(); ++i)
      if (read_file(files_a[i]) != read_file(files_b[i]))
        fail(ErrorCode::AssertionFailed,
             "artifact differs: " + fs::path(files_b[i]).filename().string());
    return std::to_string(files_a.size()) + " artifacts byte-identical";
  });

  return results;
}

}  // namespace reeblab
