#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "reeblab/util.hpp"

namespace reeblab {

using Complex = std::complex<double>;

// Orientation-preserving isometry of the upper half-plane, stored as a real
// 2x2 matrix of determinant one and considered up to global sign.
class Mobius {
 public:
  Mobius() : m_(Eigen::Matrix2d::Identity()) {}
  explicit Mobius(const Eigen::Matrix2d& m) : m_(m) { normalize(); }
  Mobius(double a, double b, double c, double d) {
    m_ << a, b, c, d;
    normalize();
  }

  static Mobius identity() { return Mobius(); }

  // Translation along the imaginary axis by hyperbolic distance t
  // (the geodesic-flow one-parameter subgroup).
  static Mobius axis_translation(double t) {
    return Mobius(std::exp(0.5 * t), 0.0, 0.0, std::exp(-0.5 * t));
  }

  // Rotation of the tangent space at i; right multiplication turns a frame's
  // direction by -phi.
  static Mobius rotation(double phi) {
    double c = std::cos(0.5 * phi), s = std::sin(0.5 * phi);
    return Mobius(c, -s, s, c);
  }

  // Isometry taking i to x + iy (y > 0) without rotation.
  static Mobius point_translation(Complex z) {
    double y = z.imag();
    if (!(y > 0)) fail(ErrorCode::BadParams, "point not in the upper half-plane");
    double sy = std::sqrt(y);
    return Mobius(sy, z.real() / sy, 0.0, 1.0 / sy);
  }

  const Eigen::Matrix2d& matrix() const { return m_; }
  double a() const { return m_(0, 0); }
  double b() const { return m_(0, 1); }
  double c() const { return m_(1, 0); }
  double d() const { return m_(1, 1); }

  double trace() const { return m_(0, 0) + m_(1, 1); }

  Mobius inverse() const { return Mobius(m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0)); }

  Complex apply(Complex z) const {
    return (a() * z + b()) / (c() * z + d());
  }

  // Complex derivative of the action, 1/(cz+d)^2.
  Complex derivative(Complex z) const {
    Complex den = c() * z + d();
    return 1.0 / (den * den);
  }

  // Attracting / repelling endpoints of the invariant geodesic on the real
  // axis. Infinity is encoded as c() == 0 and must be handled by callers;
  // axis_endpoints below does so.
  bool is_identity(double tol = 1e-12) const {
    return (m_ - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < tol ||
           (m_ + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < tol;
  }

  // Distance up to sign, for dedup keys and closeness checks.
  double dist_to(const Mobius& o) const {
    double dp = (m_ - o.m_).cwiseAbs().maxCoeff();
    double dm = (m_ + o.m_).cwiseAbs().maxCoeff();
    return std::min(dp, dm);
  }

  friend Mobius operator*(const Mobius& x, const Mobius& y) {
    return Mobius(Eigen::Matrix2d(x.m_ * y.m_));
  }

 private:
  void normalize() {
    double det = m_.determinant();
    if (!(det > 0))
      fail(ErrorCode::BadParams, "matrix must have positive determinant");
    m_ /= std::sqrt(det);
    // canonical sign: makes dedup keys stable
    if (m_(0, 0) < 0 || (m_(0, 0) == 0 && (m_(0, 1) < 0 || (m_(0, 1) == 0 && m_(1, 0) < 0))))
      m_ = -m_;
  }

  Eigen::Matrix2d m_;
};

enum class IsometryKind { Elliptic, Parabolic, Hyperbolic };

// Pure function of |trace|: <2 elliptic, =2 parabolic (within 1e-9), >2
// hyperbolic.
IsometryKind classify(const Mobius& m);

// 2*arccosh(|tr|/2); throws NotHyperbolic when |tr| <= 2 + 1e-9.
double translation_length(const Mobius& m);

// Fixed points on the boundary circle R u {inf} for a hyperbolic element,
// ordered (repelling, attracting). Infinity is returned as +/-HUGE_VAL-free
// optional: nullopt marks the point at infinity.
struct AxisEndpoints {
  std::optional<double> repelling;
  std::optional<double> attracting;
};
AxisEndpoints axis_endpoints(const Mobius& m);

double hyp_distance(Complex z, Complex w);

// ---------------------------------------------------------------------------
// Unit tangent frames. The isometry group acts simply transitively on the
// unit tangent bundle; a frame is the isometry sending the reference frame
// (base i, direction pi/2) to it.

enum class ChartTag { Bundle, SurgeryBox };

struct UnitTangentFrame {
  Mobius frame;
  ChartTag chart_tag = ChartTag::Bundle;

  Complex base_point() const { return frame.apply(Complex(0.0, 1.0)); }

  // Euclidean angle of the unit tangent vector at the base point.
  double direction_angle() const {
    Complex v = frame.derivative(Complex(0.0, 1.0)) * Complex(0.0, 1.0);
    return std::atan2(v.imag(), v.real());
  }
};

UnitTangentFrame frame_from(Complex base, double angle);

// Exact geodesic flow: right multiplication by the diagonal one-parameter
// subgroup.
UnitTangentFrame geodesic_step(const UnitTangentFrame& u, double t);

// Oriented geodesic of a frame: endpoints at infinity of its flow line,
// (backward, forward).
AxisEndpoints frame_geodesic_endpoints(const UnitTangentFrame& u);

// ---------------------------------------------------------------------------
// Projective (Klein) coordinates. Hyperbolic geodesics are chords there,
// which reduces Dirichlet-domain computations to planar polygon clipping.

// Upper half-plane -> Klein disk.
Eigen::Vector2d to_klein(Complex z);
Complex from_klein(const Eigen::Vector2d& k);

// Minkowski lift of a Klein point, <X,X> = -1 with signature (+,+,-).
Eigen::Vector3d to_hyperboloid(const Eigen::Vector2d& k);

}  // namespace reeblab
