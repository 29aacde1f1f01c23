#include "reeblab/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace reeblab {

namespace {

// deterministic quantized key for dedup of group elements (sign-canonical)
std::array<std::int64_t, 4> matrix_key(const Mobius& g) {
  const Eigen::Matrix2d& m = g.matrix();
  auto q = [](double v) {
    return static_cast<std::int64_t>(std::llround(v * 1e9));
  };
  return {q(m(0, 0)), q(m(0, 1)), q(m(1, 0)), q(m(1, 1))};
}

struct HandleMatrices {
  Mobius A, B;
};

HandleMatrices realize_handle(const HandleTraces& t) {
  if (!(t.tr_a > 2.0 && t.tr_b > 2.0 && t.tr_ab > 2.0))
    fail(ErrorCode::BadParams, "handle traces must exceed 2");
  double x = t.tr_a, y = t.tr_b, z = t.tr_ab;
  if (!(t.boundary_trace() < -2.0 - 1e-9))
    fail(ErrorCode::BadParams,
         "handle boundary is not hyperbolic (need tr^2 sum < product)");
  double p = std::sqrt(x * x / 4.0 - 1.0);
  double v = (z - x * y / 2.0) / (2.0 * p);
  double u2 = y * y / 4.0 - 1.0 - v * v;
  if (!(u2 > 0.0))
    fail(ErrorCode::BadParams, "handle traces not realizable");
  double u = std::sqrt(u2);
  HandleMatrices h;
  h.A = Mobius(x / 2.0, p, p, x / 2.0);
  h.B = Mobius(y / 2.0 + u, v, v, y / 2.0 - u);
  return h;
}

Mobius commutator(const Mobius& g, const Mobius& h) {
  return g * h * g.inverse() * h.inverse();
}

// Conjugator moving the axis of a hyperbolic element onto the imaginary
// axis, attracting fixed point at infinity. Deterministic eigenvector
// conventions keep rebuilds bit-stable.
Mobius axis_normalizer(const Mobius& k) {
  double tr = k.trace();
  double disc = std::sqrt(tr * tr - 4.0);
  double mu_big = 0.5 * (tr + (tr >= 0 ? disc : -disc));
  double mu_small = 1.0 / mu_big;
  auto eigenvector = [&](double mu) {
    Eigen::Vector2d v1(k.b(), mu - k.a());
    Eigen::Vector2d v2(mu - k.d(), k.c());
    Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
    v.normalize();
    if (v.x() < 0 || (v.x() == 0 && v.y() < 0)) v = -v;
    return v;
  };
  Eigen::Vector2d ebig = eigenvector(mu_big);
  Eigen::Vector2d esmall = eigenvector(mu_small);
  Eigen::Matrix2d ginv;
  ginv.col(0) = ebig;
  ginv.col(1) = esmall;
  double det = ginv.determinant();
  if (std::abs(det) < 1e-14)
    fail(ErrorCode::BadParams, "degenerate eigenbasis");
  if (det < 0) ginv.col(1) = -ginv.col(1);
  return Mobius(ginv).inverse();
}

Mobius reflect(const Mobius& m) {
  // conjugation by the reflection across the imaginary axis
  return Mobius(m.a(), -m.b(), -m.c(), m.d());
}

// Which side of the imaginary axis carries the axis of m (must be disjoint
// from it): -1 left, +1 right.
int axis_side(const Mobius& m) {
  AxisEndpoints e = axis_endpoints(m);
  double x;
  if (e.repelling && e.attracting) {
    if (*e.repelling * *e.attracting < 0)
      fail(ErrorCode::BadParams, "axis crosses the separating geodesic");
    x = *e.repelling;
  } else {
    x = e.repelling ? *e.repelling : *e.attracting;
  }
  if (x == 0) fail(ErrorCode::BadParams, "axis touches the separating geodesic");
  return x < 0 ? -1 : 1;
}

struct ClipPolygon {
  std::vector<Eigen::Vector2d> v;
  std::vector<int> edge_id;  // id of the edge starting at v[i]

  void clip(const Eigen::Vector2d& n, double c, int id, bool& cut) {
    cut = false;
    std::vector<Eigen::Vector2d> nv;
    std::vector<int> nid;
    std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::Vector2d& p = v[i];
      const Eigen::Vector2d& q = v[(i + 1) % m];
      double dp = n.dot(p) - c, dq = n.dot(q) - c;
      bool pin = dp <= 1e-14, qin = dq <= 1e-14;
      if (pin) {
        nv.push_back(p);
        nid.push_back(edge_id[i]);
      }
      if (pin != qin) {
        double t = dp / (dp - dq);
        nv.push_back(p + t * (q - p));
        nid.push_back(pin ? id : edge_id[i]);
        cut = true;
      }
    }
    v = std::move(nv);
    edge_id = std::move(nid);
  }

  void drop_degenerate() {
    std::vector<Eigen::Vector2d> nv;
    std::vector<int> nid;
    std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
      if ((v[(i + 1) % m] - v[i]).norm() < 1e-12) continue;
      nv.push_back(v[i]);
      nid.push_back(edge_id[i]);
    }
    v = std::move(nv);
    edge_id = std::move(nid);
  }
};

}  // namespace

double dist_to_geodesic(Complex z, double x1, bool x1_inf, double x2, bool x2_inf) {
  if (x1_inf && x2_inf) fail(ErrorCode::BadParams, "degenerate geodesic");
  if (x1_inf || x2_inf) {
    double x = x1_inf ? x2 : x1;
    return std::asinh(std::abs(z.real() - x) / z.imag());
  }
  double c = 0.5 * (x1 + x2);
  double r = 0.5 * std::abs(x2 - x1);
  if (r < 1e-300) fail(ErrorCode::BadParams, "degenerate geodesic");
  double num = std::norm(z - Complex(c, 0.0)) + r * r;
  return std::acosh(std::max(1.0, num / (2.0 * r * z.imag())));
}

Complex FermiChart::to_plane(double s, double rho) const {
  double theta = s * scale;
  double t = std::tanh(rho);
  double sech = std::sqrt(1.0 - t * t);
  return std::exp(theta) * Complex(t, sech);
}

void FermiChart::from_plane(Complex z, double& s, double& rho) const {
  double theta = std::log(std::abs(z));
  s = theta / scale;
  double sin_a = z.real() / std::abs(z);
  rho = std::atanh(sin_a);
}

Mobius FuchsianSurface::generator(Letter l) const {
  int g = std::abs(l);
  if (g < 1 || g > 4) fail(ErrorCode::BadParams, "letter out of range");
  const Mobius& base = generators_[static_cast<std::size_t>(g - 1)];
  return l > 0 ? base : base.inverse();
}

Mobius FuchsianSurface::evaluate(const Word& w) const {
  Mobius m = Mobius::identity();
  for (Letter l : w.letters) m = m * generator(l);
  return m;
}

FuchsianSurface FuchsianSurface::build(const FenchelNielsen& fn,
                                       const SurfaceOptions& opts) {
  FuchsianSurface s;
  s.fn_ = fn;

  double bl1 = 2.0 * std::acosh(std::abs(fn.handle1.boundary_trace()) / 2.0);
  double bl2 = 2.0 * std::acosh(std::abs(fn.handle2.boundary_trace()) / 2.0);
  if (std::abs(bl1 - bl2) > 1e-9)
    fail(ErrorCode::BadParams, "handle boundary lengths differ");

  HandleMatrices h1 = realize_handle(fn.handle1);
  HandleMatrices h2 = realize_handle(fn.handle2);

  Mobius g1 = axis_normalizer(commutator(h1.A, h1.B));
  Mobius g2 = axis_normalizer(commutator(h2.A, h2.B));
  Mobius a = g1 * h1.A * g1.inverse();
  Mobius b = g1 * h1.B * g1.inverse();
  Mobius a2 = g2 * h2.A * g2.inverse();
  Mobius b2 = g2 * h2.B * g2.inverse();

  // second handle goes on the opposite side of the axis; mirror if needed
  Mobius c, d;
  if (axis_side(a2) == axis_side(a)) {
    c = reflect(b2);
    d = reflect(a2);
  } else {
    c = b2;
    d = a2;
  }
  Mobius tw = Mobius::axis_translation(fn.twist);
  Mobius twi = tw.inverse();
  c = tw * c * twi;
  d = tw * d * twi;

  // global flip so the first handle sits on the left half-plane
  if (axis_side(a) > 0) {
    a = reflect(a);
    b = reflect(b);
    c = reflect(c);
    d = reflect(d);
  }

  s.generators_ = {a, b, c, d};
  s.relator_ = parse_word("abABcdCD");
  Mobius rel = s.evaluate(s.relator_);
  if (rel.dist_to(Mobius::identity()) > 1e-9)
    fail(ErrorCode::DiscretenessSuspect, "relator does not vanish");

  s.separating_axis_ = commutator(a, b);
  s.separating_length_ = translation_length(s.separating_axis_);
  AxisEndpoints se = axis_endpoints(s.separating_axis_);
  // the separating axis must be the imaginary axis with attracting end at
  // infinity after normalization
  if (se.attracting || !se.repelling || std::abs(*se.repelling) > 1e-9)
    fail(ErrorCode::DiscretenessSuspect, "separating axis not normalized");

  s.min_gen_length_ = std::min(
      std::min(translation_length(a), translation_length(b)),
      std::min(translation_length(c), translation_length(d)));

  s.p0_ = Complex(0.041, 1.13);

  s.enumerate_ball(opts);
  s.systole_bound_ = s.min_gen_length_;
  for (const auto& [g, w] : s.ball_) {
    (void)w;
    if (classify(g) == IsometryKind::Hyperbolic)
      s.systole_bound_ = std::min(s.systole_bound_, translation_length(g));
  }
  s.build_domain(opts);
  s.collect_axis_lifts();
  if (opts.run_discreteness_check) s.discreteness_checks(opts);
  return s;
}

void FuchsianSurface::enumerate_ball(const SurfaceOptions& opts) {
  std::array<Mobius, 8> letters;
  std::array<Letter, 8> letter_codes;
  for (int i = 0; i < 4; ++i) {
    letters[static_cast<std::size_t>(i)] = generators_[static_cast<std::size_t>(i)];
    letter_codes[static_cast<std::size_t>(i)] = static_cast<Letter>(i + 1);
    letters[static_cast<std::size_t>(i + 4)] =
        generators_[static_cast<std::size_t>(i)].inverse();
    letter_codes[static_cast<std::size_t>(i + 4)] = static_cast<Letter>(-(i + 1));
  }

  std::map<std::array<std::int64_t, 4>, std::pair<Mobius, Word>> seen;
  struct Node {
    Mobius g;
    Word w;
  };
  std::vector<Node> stack{{Mobius::identity(), Word{}}};
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    if (static_cast<int>(n.w.size()) >= opts.ball_word_len) continue;
    for (std::size_t i = 0; i < 8; ++i) {
      if (!n.w.empty() && n.w.letters.back() == -letter_codes[i]) continue;
      Node child{n.g * letters[i], n.w};
      child.w.letters.push_back(letter_codes[i]);
      double disp = hyp_distance(child.g.apply(p0_), p0_);
      if (disp <= opts.ball_keep_radius) {
        auto key = matrix_key(child.g);
        auto it = seen.find(key);
        if (it == seen.end() || child.w < it->second.second)
          seen[key] = {child.g, child.w};
      }
      stack.push_back(std::move(child));
    }
  }
  ball_.clear();
  for (auto& [key, gw] : seen) {
    (void)key;
    if (gw.first.is_identity(1e-9)) continue;
    ball_.push_back(gw);
  }
  std::sort(ball_.begin(), ball_.end(), [&](const auto& l, const auto& r) {
    double dl = hyp_distance(l.first.apply(p0_), p0_);
    double dr = hyp_distance(r.first.apply(p0_), p0_);
    if (dl != dr) return dl < dr;
    return l.second < r.second;
  });
}

void FuchsianSurface::build_domain(const SurfaceOptions& opts) {
  (void)opts;
  Eigen::Vector2d k0 = to_klein(p0_);
  Eigen::Vector3d P0 = to_hyperboloid(k0);

  ClipPolygon poly;
  double s0 = 0.9999;
  poly.v = {{-s0, -s0}, {s0, -s0}, {s0, s0}, {-s0, s0}};
  poly.edge_id = {-1, -1, -1, -1};

  std::vector<Eigen::Vector2d> normals(ball_.size());
  std::vector<double> offsets(ball_.size());
  for (std::size_t i = 0; i < ball_.size(); ++i) {
    Complex gq = ball_[i].first.apply(p0_);
    Eigen::Vector3d Q = to_hyperboloid(to_klein(gq));
    Eigen::Vector3d D = P0 - Q;
    normals[i] = Eigen::Vector2d(-D.x(), -D.y());
    offsets[i] = -D.z();
    bool cut = false;
    poly.clip(normals[i], offsets[i], static_cast<int>(i), cut);
    poly.drop_degenerate();
    if (poly.v.size() < 3)
      fail(ErrorCode::DiscretenessSuspect, "Dirichlet polygon collapsed");
  }
  for (int id : poly.edge_id)
    if (id < 0)
      fail(ErrorCode::DiscretenessSuspect,
           "Dirichlet polygon not bounded by bisectors (enlarge word ball)");
  for (const auto& vtx : poly.v)
    if (vtx.norm() > 0.9995)
      fail(ErrorCode::DiscretenessSuspect, "Dirichlet polygon leaks to the boundary");

  // merge consecutive edges supported by the same bisector
  {
    std::vector<Eigen::Vector2d> nv;
    std::vector<int> nid;
    std::size_t m = poly.v.size();
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t prev = (i + m - 1) % m;
      if (poly.edge_id[prev] == poly.edge_id[i]) continue;
      nv.push_back(poly.v[i]);
      nid.push_back(poly.edge_id[i]);
    }
    poly.v = std::move(nv);
    poly.edge_id = std::move(nid);
  }

  faces_.clear();
  circumradius_ = 0.0;
  std::size_t m = poly.v.size();
  for (std::size_t i = 0; i < m; ++i) {
    int id = poly.edge_id[i];
    DirichletFace f;
    f.pairing = ball_[static_cast<std::size_t>(id)].first;
    f.word = ball_[static_cast<std::size_t>(id)].second;
    f.normal = normals[static_cast<std::size_t>(id)];
    f.offset = offsets[static_cast<std::size_t>(id)];
    f.v0 = poly.v[i];
    f.v1 = poly.v[(i + 1) % m];
    f.uhp_v0 = from_klein(f.v0);
    f.uhp_v1 = from_klein(f.v1);
    faces_.push_back(f);
    circumradius_ = std::max(circumradius_, hyp_distance(from_klein(f.v0), p0_));
  }

  // side-pairing sanity: g^-1 carries the side of g onto the side of g^-1
  for (const auto& f : faces_) {
    Mobius gi = f.pairing.inverse();
    const DirichletFace* partner = nullptr;
    for (const auto& f2 : faces_)
      if (f2.pairing.dist_to(gi) < 1e-8) partner = &f2;
    if (partner == nullptr)
      fail(ErrorCode::DiscretenessSuspect, "side pairing incomplete");
    Complex w0 = gi.apply(f.uhp_v0);
    Complex w1 = gi.apply(f.uhp_v1);
    double direct = std::max(hyp_distance(w0, partner->uhp_v0),
                             hyp_distance(w1, partner->uhp_v1));
    double swapped = std::max(hyp_distance(w0, partner->uhp_v1),
                              hyp_distance(w1, partner->uhp_v0));
    if (std::min(direct, swapped) > 1e-9)
      fail(ErrorCode::DiscretenessSuspect, "side pairing mismatch");
  }

  moves_.clear();
  for (const auto& f : faces_) {
    bool dup = false;
    for (const auto& mv : moves_)
      if (mv.first.dist_to(f.pairing) < 1e-12) dup = true;
    if (!dup) moves_.emplace_back(f.pairing, f.word);
  }
  for (int i = 0; i < 4; ++i) {
    for (int sgn : {1, -1}) {
      Letter l = static_cast<Letter>(sgn * (i + 1));
      Mobius g = generator(l);
      bool dup = false;
      for (const auto& mv : moves_)
        if (mv.first.dist_to(g) < 1e-12) dup = true;
      if (!dup) moves_.emplace_back(g, Word{{l}});
    }
  }
}

bool FuchsianSurface::in_domain(Complex p, double tol) const {
  Eigen::Vector2d k = to_klein(p);
  for (const auto& f : faces_)
    if (!f.inside(k, tol)) return false;
  return true;
}

ReductionResult FuchsianSurface::reduce_to_domain(Complex p) const {
  ReductionResult res;
  res.point = p;
  std::size_t guard = 0;
  std::vector<int> applied;
  while (!in_domain(res.point, 1e-12)) {
    if (++guard > 1000000)
      fail(ErrorCode::NonTermination, "domain reduction did not terminate");
    double best = hyp_distance(res.point, p0_);
    int best_i = -1;
    Complex best_p = res.point;
    for (std::size_t i = 0; i < moves_.size(); ++i) {
      Complex cand = moves_[i].first.apply(res.point);
      double d = hyp_distance(cand, p0_);
      if (d < best - 1e-15) {
        best = d;
        best_i = static_cast<int>(i);
        best_p = cand;
      }
    }
    if (best_i < 0) break;  // boundary point within tolerance
    res.point = best_p;
    applied.push_back(best_i);
  }
  Word w;
  for (int i : applied)
    w = concat(w, inverse(moves_[static_cast<std::size_t>(i)].second));
  res.word = free_reduce(w);
  res.face_moves = std::move(applied);
  return res;
}

Word FuchsianSurface::reduce_frame(UnitTangentFrame& u) const {
  std::size_t guard = 0;
  std::vector<int> applied;
  Complex p = u.base_point();
  while (!in_domain(p, 1e-12)) {
    if (++guard > 1000000)
      fail(ErrorCode::NonTermination, "frame reduction did not terminate");
    double best = hyp_distance(p, p0_);
    int best_i = -1;
    for (std::size_t i = 0; i < moves_.size(); ++i) {
      double d = hyp_distance(moves_[i].first.apply(p), p0_);
      if (d < best - 1e-15) {
        best = d;
        best_i = static_cast<int>(i);
      }
    }
    if (best_i < 0) break;
    u.frame = moves_[static_cast<std::size_t>(best_i)].first * u.frame;
    applied.push_back(best_i);
    p = u.base_point();
  }
  Word w;
  for (int i : applied)
    w = concat(w, inverse(moves_[static_cast<std::size_t>(i)].second));
  return free_reduce(w);
}

const std::vector<std::pair<Mobius, Word>>& FuchsianSurface::near_deck(
    double radius) const {
  if (near_cache_radius_ == radius) return near_cache_;
  near_cache_.clear();
  near_cache_.emplace_back(Mobius::identity(), Word{});
  for (const auto& [g, w] : ball_)
    if (hyp_distance(g.apply(p0_), p0_) <= radius) near_cache_.emplace_back(g, w);
  near_cache_radius_ = radius;
  return near_cache_;
}

void FuchsianSurface::collect_axis_lifts() {
  axis_lifts_.clear();
  double reach = circumradius_ + 1.5;
  std::map<std::array<std::int64_t, 4>, AxisLift> dedup;

  auto consider = [&](const Mobius& g, const Word& w) {
    AxisLift lift;
    lift.deck = g;
    lift.to_axis = g.inverse();
    lift.word = w;
    // endpoints of g . (imaginary axis): g(0) and g(inf)
    if (std::abs(g.d()) > 1e-13) {
      lift.x_repelling = g.b() / g.d();
    } else {
      lift.repelling_infinite = true;
    }
    if (std::abs(g.c()) > 1e-13) {
      lift.x_attracting = g.a() / g.c();
    } else {
      lift.attracting_infinite = true;
    }
    if (lift.repelling_infinite && lift.attracting_infinite) return;  // axis itself
    double d = dist_to_geodesic(p0_, lift.x_repelling, lift.repelling_infinite,
                                lift.x_attracting, lift.attracting_infinite);
    if (d > reach) return;
    auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1e9)); };
    std::array<std::int64_t, 4> key{
        lift.repelling_infinite ? std::numeric_limits<std::int64_t>::max() : q(lift.x_repelling),
        lift.attracting_infinite ? std::numeric_limits<std::int64_t>::max() : q(lift.x_attracting),
        0, 0};
    auto it = dedup.find(key);
    if (it == dedup.end() || w < it->second.word) dedup[key] = lift;
  };

  consider(Mobius::identity(), Word{});
  for (const auto& [g, w] : ball_) consider(g, w);
  for (auto& [key, lift] : dedup) {
    (void)key;
    axis_lifts_.push_back(lift);
  }
}

double FuchsianSurface::distance_to_separating_lifts(Complex p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& lift : axis_lifts_) {
    double d = dist_to_geodesic(p, lift.x_repelling, lift.repelling_infinite,
                                lift.x_attracting, lift.attracting_infinite);
    best = std::min(best, d);
  }
  return best;
}

FermiChart FuchsianSurface::collar_chart(double delta) const {
  FermiChart f;
  f.axis = separating_axis_;
  f.delta = delta;
  f.period = separating_length_;
  f.scale = separating_length_ / kTwoPi;
  return f;
}

void FuchsianSurface::discreteness_checks(const SurfaceOptions& opts) const {
  // generator words close to the identity as matrices must be trivial in
  // the group (relator rotations are; anything else flags the build)
  std::array<Mobius, 8> letters;
  std::array<Letter, 8> codes;
  std::array<double, 8> disp;
  double max_disp = 0.0;
  for (int i = 0; i < 4; ++i) {
    letters[static_cast<std::size_t>(i)] = generators_[static_cast<std::size_t>(i)];
    codes[static_cast<std::size_t>(i)] = static_cast<Letter>(i + 1);
    letters[static_cast<std::size_t>(i + 4)] =
        generators_[static_cast<std::size_t>(i)].inverse();
    codes[static_cast<std::size_t>(i + 4)] = static_cast<Letter>(-(i + 1));
  }
  for (std::size_t i = 0; i < 8; ++i) {
    disp[i] = hyp_distance(letters[i].apply(p0_), p0_);
    max_disp = std::max(max_disp, disp[i]);
  }

  struct Node {
    Mobius g;
    int depth;
    Letter last;
    Word w;
  };
  std::vector<Node> stack{{Mobius::identity(), 0, 0, Word{}}};
  const int L = opts.discreteness_word_len;
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    if (n.depth > 0 && n.g.dist_to(Mobius::identity()) < 1e-3) {
      if (!group_.is_trivial(n.w))
        fail(ErrorCode::DiscretenessSuspect,
             "non-trivial word near the identity: " + word_to_string(n.w));
    }
    if (n.depth >= L) continue;
    double d0 = hyp_distance(n.g.apply(p0_), p0_);
    if (d0 - (L - n.depth) * max_disp > 1e-3) continue;  // cannot come back
    for (std::size_t i = 0; i < 8; ++i) {
      if (n.last == -codes[i]) continue;
      Node child{n.g * letters[i], n.depth + 1, codes[i], n.w};
      child.w.letters.push_back(codes[i]);
      stack.push_back(std::move(child));
    }
  }

  // handle subgroups are free of rank 2: no short relation may exist
  for (int handle = 0; handle < 2; ++handle) {
    std::array<Mobius, 4> hl;
    std::array<Letter, 4> hc;
    for (int i = 0; i < 2; ++i) {
      int gi = handle * 2 + i;
      hl[static_cast<std::size_t>(i)] = generators_[static_cast<std::size_t>(gi)];
      hc[static_cast<std::size_t>(i)] = static_cast<Letter>(gi + 1);
      hl[static_cast<std::size_t>(i + 2)] =
          generators_[static_cast<std::size_t>(gi)].inverse();
      hc[static_cast<std::size_t>(i + 2)] = static_cast<Letter>(-(gi + 1));
    }
    struct FNode {
      Mobius g;
      int depth;
      Letter last;
    };
    std::vector<FNode> st{{Mobius::identity(), 0, 0}};
    while (!st.empty()) {
      FNode n = st.back();
      st.pop_back();
      if (n.depth > 0 && n.g.dist_to(Mobius::identity()) < 1e-9)
        fail(ErrorCode::DiscretenessSuspect, "relation in a handle subgroup");
      if (n.depth >= opts.subgroup_relation_len) continue;
      for (std::size_t i = 0; i < 4; ++i) {
        if (n.last == -hc[i]) continue;
        st.push_back({n.g * hl[i], n.depth + 1, hc[i]});
      }
    }
  }
}

}  // namespace reeblab
