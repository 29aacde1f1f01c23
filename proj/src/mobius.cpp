#include "reeblab/mobius.hpp"

#include <cmath>

namespace reeblab {

IsometryKind classify(const Mobius& m) {
  double t = std::abs(m.trace());
  if (std::abs(t - 2.0) < 1e-9) return IsometryKind::Parabolic;
  return t < 2.0 ? IsometryKind::Elliptic : IsometryKind::Hyperbolic;
}

double translation_length(const Mobius& m) {
  double t = std::abs(m.trace());
  if (t <= 2.0 + 1e-9)
    fail(ErrorCode::NotHyperbolic, "translation length needs |tr| > 2");
  return 2.0 * std::acosh(0.5 * t);
}

AxisEndpoints axis_endpoints(const Mobius& m) {
  if (classify(m) != IsometryKind::Hyperbolic)
    fail(ErrorCode::NotHyperbolic, "axis requires a hyperbolic element");
  double a = m.a(), b = m.b(), c = m.c(), d = m.d();
  AxisEndpoints out;
  double tr = a + d;
  // eigenvalues lambda, 1/lambda with |lambda| > 1; the attracting fixed
  // point is the eigenvector direction of lambda.
  double disc = std::sqrt(tr * tr - 4.0);
  double lam = 0.5 * (tr + (tr >= 0 ? disc : -disc));  // larger |.| root
  double lam2 = 1.0 / lam;
  auto fixed_point = [&](double eig) -> std::optional<double> {
    // solve (a - eig) x + b = 0 along the boundary: fixed points of the
    // Mobius map are eigendirections [x : 1] or [1 : 0] (= infinity).
    if (std::abs(c) > 1e-14) return (eig - d) / c;
    // c == 0: one fixed point at infinity, the other at b/(d-a)
    if (std::abs(a - eig) < std::abs(d - eig)) return std::nullopt;  // infinity
    return b / (eig - a);
  };
  out.attracting = fixed_point(lam);
  out.repelling = fixed_point(lam2);
  return out;
}

double hyp_distance(Complex z, Complex w) {
  double num = std::norm(z - w);
  double den = 2.0 * z.imag() * w.imag();
  return std::acosh(1.0 + num / den);
}

UnitTangentFrame frame_from(Complex base, double angle) {
  Mobius t = Mobius::point_translation(base);
  // right rotation by phi turns the direction by -phi; reference direction
  // is pi/2.
  Mobius r = Mobius::rotation(kPi / 2.0 - angle);
  return UnitTangentFrame{t * r, ChartTag::Bundle};
}

UnitTangentFrame geodesic_step(const UnitTangentFrame& u, double t) {
  return UnitTangentFrame{u.frame * Mobius::axis_translation(t), u.chart_tag};
}

AxisEndpoints frame_geodesic_endpoints(const UnitTangentFrame& u) {
  // The flow line is the image of the imaginary axis: backward endpoint is
  // g(0), forward endpoint is g(inf).
  const Mobius& g = u.frame;
  AxisEndpoints out;
  if (std::abs(g.d()) > 1e-14)
    out.repelling = g.b() / g.d();
  if (std::abs(g.c()) > 1e-14)
    out.attracting = g.a() / g.c();
  return out;
}

Eigen::Vector2d to_klein(Complex z) {
  // half-plane -> Poincare disk -> Klein disk
  Complex w = (z - Complex(0, 1)) / (z + Complex(0, 1));
  double n = std::norm(w);
  return Eigen::Vector2d(2.0 * w.real() / (1.0 + n), 2.0 * w.imag() / (1.0 + n));
}

Complex from_klein(const Eigen::Vector2d& k) {
  double n = k.squaredNorm();
  if (!(n < 1.0)) fail(ErrorCode::BadParams, "point outside the Klein disk");
  double s = 1.0 + std::sqrt(1.0 - n);
  Complex w(k.x() / s, k.y() / s);
  return (Complex(0, 1) * (Complex(1, 0) + w)) / (Complex(1, 0) - w);
}

Eigen::Vector3d to_hyperboloid(const Eigen::Vector2d& k) {
  double n = k.squaredNorm();
  if (!(n < 1.0)) fail(ErrorCode::BadParams, "point outside the Klein disk");
  double s = 1.0 / std::sqrt(1.0 - n);
  return Eigen::Vector3d(s * k.x(), s * k.y(), s);
}

}  // namespace reeblab
