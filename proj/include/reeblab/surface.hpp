#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "reeblab/mobius.hpp"
#include "reeblab/words.hpp"

namespace reeblab {

// Trace coordinates for a one-holed torus handle; the boundary trace is
// forced by the Fricke identity tr[A,B] = x^2 + y^2 + z^2 - xyz - 2.
struct HandleTraces {
  double tr_a = 3.0;
  double tr_b = 3.0;
  double tr_ab = 4.0;

  double boundary_trace() const {
    return tr_a * tr_a + tr_b * tr_b + tr_ab * tr_ab -
           tr_a * tr_b * tr_ab - 2.0;
  }
};

struct FenchelNielsen {
  HandleTraces handle1;
  HandleTraces handle2;
  double twist = 0.0;
};

struct SurfaceOptions {
  int ball_word_len = 6;         // word ball cached for domain/lift queries
  double ball_keep_radius = 8.0; // discard elements displacing p0 farther
  int discreteness_word_len = 10;
  int subgroup_relation_len = 12;
  bool run_discreteness_check = true;
};

// One side of the Dirichlet polygon. The half-plane is stored in Klein
// coordinates where it is Euclidean: inside means n . k <= c.
struct DirichletFace {
  Mobius pairing;        // element whose bisector supports the side
  Word word;             // pairing expressed in the generators
  Eigen::Vector2d normal;
  double offset = 0.0;
  Eigen::Vector2d v0, v1;  // side endpoints, Klein coordinates
  Complex uhp_v0, uhp_v1;

  bool inside(const Eigen::Vector2d& k, double tol = 1e-12) const {
    return normal.dot(k) <= offset + tol;
  }
};

// A lift of the separating geodesic that comes near the fundamental domain.
// to_axis maps the lift back onto the imaginary axis.
struct AxisLift {
  Mobius deck;     // lift = deck . (imaginary axis), orientation preserved
  Mobius to_axis;  // deck^-1
  Word word;
  double x_repelling = 0.0;   // endpoints of the lift on the real line,
  double x_attracting = 0.0;  // +/-inf encoded as huge values never hit
  bool repelling_infinite = false;
  bool attracting_infinite = false;
};

struct ReductionResult {
  Complex point;
  Word word;  // deck transformation mapping the reduced point back to p
  std::vector<int> face_moves;  // indices into moves() in application order
};

// Fermi collar chart around the separating axis: (s, rho) with s in
// R/2pi periodic along the axis and rho the signed orthogonal distance.
struct FermiChart {
  Mobius axis;
  double delta = 0.0;
  double period = 0.0;  // translation length of the axis element
  double scale = 0.0;   // period / 2pi

  Complex to_plane(double s, double rho) const;
  void from_plane(Complex z, double& s, double& rho) const;
};

class FuchsianSurface {
 public:
  // Genus-2 surface glued from two one-holed tori with equal boundary
  // length along the separating geodesic, twisted by fn.twist.
  static FuchsianSurface build(const FenchelNielsen& fn,
                               const SurfaceOptions& opts = {});

  const std::vector<Mobius>& generators() const { return generators_; }
  Mobius generator(Letter l) const;
  Mobius evaluate(const Word& w) const;

  const Word& relator() const { return relator_; }
  const SurfaceGroup& group() const { return group_; }

  Complex base_point() const { return p0_; }
  const std::vector<DirichletFace>& faces() const { return faces_; }
  double domain_circumradius() const { return circumradius_; }

  const Mobius& separating_axis() const { return separating_axis_; }
  double separating_length() const { return separating_length_; }
  FermiChart collar_chart(double delta) const;

  const FenchelNielsen& fn_params() const { return fn_; }

  // Shortest generator translation length (census word-ball scale).
  double min_generator_length() const { return min_gen_length_; }
  double systole_lower_bound() const { return systole_bound_; }

  bool in_domain(Complex p, double tol = 1e-9) const;
  ReductionResult reduce_to_domain(Complex p) const;

  // Reduce a frame by deck moves on its base point; returns the recorded
  // word (deck transformation mapping the reduced frame back to the input).
  Word reduce_frame(UnitTangentFrame& u) const;

  // Deck moves available to the reducer: Dirichlet side pairings plus the
  // four generators and inverses.
  const std::vector<std::pair<Mobius, Word>>& moves() const { return moves_; }

  // Deck elements with small displacement of the base point, used as
  // candidates when minimizing quotient distances.
  const std::vector<std::pair<Mobius, Word>>& near_deck(double radius) const;

  const std::vector<AxisLift>& axis_lifts() const { return axis_lifts_; }

  // Hyperbolic distance from a point to the nearest lift of the separating
  // geodesic among cached candidates.
  double distance_to_separating_lifts(Complex p) const;

 private:
  FuchsianSurface() = default;

  void enumerate_ball(const SurfaceOptions& opts);
  void build_domain(const SurfaceOptions& opts);
  void collect_axis_lifts();
  void discreteness_checks(const SurfaceOptions& opts) const;

  FenchelNielsen fn_;
  std::vector<Mobius> generators_;  // a, b, c, d
  Word relator_;
  SurfaceGroup group_;
  Complex p0_;
  Mobius separating_axis_;
  double separating_length_ = 0.0;
  double min_gen_length_ = 0.0;
  double systole_bound_ = 0.0;
  double circumradius_ = 0.0;

  std::vector<std::pair<Mobius, Word>> ball_;  // dedup'd, sorted by displacement
  std::vector<DirichletFace> faces_;
  std::vector<std::pair<Mobius, Word>> moves_;
  std::vector<AxisLift> axis_lifts_;
  mutable std::vector<std::pair<Mobius, Word>> near_cache_;
  mutable double near_cache_radius_ = -1.0;
};

// Distance from a point to the geodesic with the given boundary endpoints.
double dist_to_geodesic(Complex z, double x1, bool x1_inf, double x2, bool x2_inf);

}  // namespace reeblab
