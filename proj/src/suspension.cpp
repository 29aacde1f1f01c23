#include "reeblab/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace reeblab {

bool TransitionMatrix::irreducible() const {
  int n = size();
  if (n == 0) return false;
  auto reachable = [&](bool transpose) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u = 0; u < n; ++u) {
        int entry = transpose ? m(u, v) : m(v, u);
        if (entry > 0 && !seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = true;
          stack.push_back(u);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reachable(false) && reachable(true);
}

TransitionMatrix parse_transition_matrix(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<int> row;
    int v;
    while (ls >> v) row.push_back(v);
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorCode::BadParams, "empty transition matrix");
  std::size_t n = rows.size();
  for (const auto& r : rows)
    if (r.size() != n)
      fail(ErrorCode::BadParams, "transition matrix must be square");
  TransitionMatrix M;
  M.m.resize(static_cast<long>(n), static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] < 0)
        fail(ErrorCode::BadParams, "transition entries must be non-negative");
      M.m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    }
  return M;
}

std::string format_transition_matrix(const TransitionMatrix& M) {
  std::ostringstream out;
  for (int i = 0; i < M.size(); ++i) {
    for (int j = 0; j < M.size(); ++j) {
      if (j) out << ' ';
      out << M.m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

double perron_root(const TransitionMatrix& M) {
  if (!M.irreducible())
    fail(ErrorCode::NotIrreducible, "transition matrix is not irreducible");
  int n = M.size();
  Eigen::MatrixXd A = M.m.cast<double>();
  // M + I is primitive for irreducible M, so power iteration converges
  Eigen::MatrixXd B = A + Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = B * v;
    double norm = w.norm();
    if (norm == 0) fail(ErrorCode::NotIrreducible, "nilpotent transition matrix");
    v = w / norm;
    lambda = v.dot(A * v);
    double resid = (A * v - lambda * v).norm();
    if (resid <= 1e-12 * std::max(1.0, std::abs(lambda))) return lambda;
  }
  fail(ErrorCode::NotIrreducible, "power iteration did not converge");
}

namespace {

long long euler_phi(long long n) {
  long long result = n;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

int moebius_mu(long long n) {
  int mu = 1;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

using BigMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

BigMat checked_product(const BigMat& a, const BigMat& b) {
  long n = a.rows();
  BigMat out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      long long acc = 0;
      for (long k = 0; k < n; ++k) {
        long long term;
        if (__builtin_mul_overflow(a(i, k), b(k, j), &term) ||
            __builtin_add_overflow(acc, term, &acc))
          fail(ErrorCode::BudgetExceeded, "walk counts overflow 64 bits");
      }
      out(i, j) = acc;
    }
  return out;
}

}  // namespace

NecklaceCensus necklace_count(const TransitionMatrix& M, int k_max) {
  if (k_max < 1 || k_max > 20)
    fail(ErrorCode::BudgetExceeded, "necklace horizon limited to k <= 20");
  NecklaceCensus census;
  census.k_max = k_max;

  BigMat base = M.m.cast<long long>();
  BigMat power = base;
  for (int k = 1; k <= k_max; ++k) {
    census.closed_walks.push_back(power.trace());
    if (k < k_max) power = checked_product(power, base);
  }

  auto trace_of = [&](long long d) {
    return census.closed_walks[static_cast<std::size_t>(d - 1)];
  };
  long long cum = 0;
  for (int k = 1; k <= k_max; ++k) {
    long long neck = 0, aper = 0;
    for (long long d = 1; d <= k; ++d) {
      if (k % d != 0) continue;
      neck += euler_phi(k / d) * trace_of(d);
      aper += moebius_mu(k / d) * trace_of(d);
    }
    census.necklaces.push_back(neck / k);
    census.aperiodic.push_back(aper / k);
    cum += neck / k;
    census.cumulative.push_back(cum);
  }

  // growth fit on log(k * aperiodic(k)) over the upper half of the window
  std::vector<double> ts, logs;
  for (int k = std::max(2, k_max / 2); k <= k_max; ++k) {
    long long a = census.aperiodic[static_cast<std::size_t>(k - 1)];
    if (a <= 0) continue;
    ts.push_back(static_cast<double>(k));
    logs.push_back(std::log(static_cast<double>(k) * static_cast<double>(a)));
  }
  if (ts.size() >= 2) census.fit = fit_log_linear(ts, logs);
  return census;
}

SuspensionPeriods suspension_periods(const NecklaceCensus& census, double roof) {
  if (std::abs(roof - 1.0) > 1e-12)
    fail(ErrorCode::BadParams, "only the unit roof model is supported");
  SuspensionPeriods table;
  table.roof = roof;
  for (int k = 1; k <= census.k_max; ++k)
    table.counts.emplace_back(roof * k,
                              census.cumulative[static_cast<std::size_t>(k - 1)]);
  table.fit = census.fit;
  return table;
}

// ---------------------------------------------------------------------------

double MappingTorusModel::f0(double t) const {
  if (t <= ramp_lo) return 0.0;
  if (t >= ramp_hi) return 1.0;
  double u = (t - ramp_lo) / (ramp_hi - ramp_lo);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double MappingTorusModel::f0_deriv(double t) const {
  if (t <= ramp_lo || t >= ramp_hi) return 0.0;
  double u = (t - ramp_lo) / (ramp_hi - ramp_lo);
  return 30.0 * u * u * (1.0 - u) * (1.0 - u) / (ramp_hi - ramp_lo);
}

namespace {

Eigen::Matrix2d int_power(const Eigen::Matrix2d& a, int i) {
  Eigen::Matrix2d out = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d base = i >= 0 ? a : Eigen::Matrix2d(a.inverse());
  for (int k = 0; k < std::abs(i); ++k) out = out * base;
  return out;
}

// pullback of the primitive x dy under the linear map B, as a covector at p
Eigen::Vector2d pulled_primitive(const Eigen::Matrix2d& B, const Eigen::Vector2d& p) {
  double first = (B * p).x();
  return first * B.row(1).transpose();
}

}  // namespace

Eigen::Vector3d MappingTorusModel::form(double t, const Eigen::Vector2d& p) const {
  int i = static_cast<int>(std::floor(t));
  double glue = f0(t - i);
  Eigen::Vector2d low = pulled_primitive(int_power(monodromy, i), p);
  Eigen::Vector2d high = pulled_primitive(int_power(monodromy, i + 1), p);
  Eigen::Vector2d spatial = eps_form * ((1.0 - glue) * low + glue * high);
  return Eigen::Vector3d(1.0, spatial.x(), spatial.y());
}

Eigen::Vector3d MappingTorusModel::reeb(double t, const Eigen::Vector2d& p) const {
  const double h = 1e-6;
  // exterior derivative by central differences on coordinates (t, x, y)
  auto coeff = [&](double dt, double dx, double dy) {
    return form(t + dt, p + Eigen::Vector2d(dx, dy));
  };
  Eigen::Matrix3d jac;  // jac(j, k) = d_j alpha_k
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d dir = Eigen::Vector3d::Zero();
    dir(j) = h;
    Eigen::Vector3d plus = coeff(dir(0), dir(1), dir(2));
    Eigen::Vector3d minus = coeff(-dir(0), -dir(1), -dir(2));
    jac.row(j) = ((plus - minus) / (2.0 * h)).transpose();
  }
  Eigen::Matrix3d omega = jac - jac.transpose();  // omega(j,k) = d alpha(j,k)
  // kernel of an odd skew matrix: the Pfaffian vector
  Eigen::Vector3d x(omega(1, 2), omega(2, 0), omega(0, 1));
  double pairing = form(t, p).dot(x);
  if (std::abs(pairing) < 1e-14)
    fail(ErrorCode::EquivarianceViolation, "degenerate form: no Reeb direction");
  return x / pairing;
}

double MappingTorusModel::contact_volume(double t, const Eigen::Vector2d& p) const {
  const double h = 1e-6;
  auto coeff = [&](double dt, double dx, double dy) {
    return form(t + dt, p + Eigen::Vector2d(dx, dy));
  };
  Eigen::Matrix3d jac;
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d dir = Eigen::Vector3d::Zero();
    dir(j) = h;
    Eigen::Vector3d plus = coeff(dir(0), dir(1), dir(2));
    Eigen::Vector3d minus = coeff(-dir(0), -dir(1), -dir(2));
    jac.row(j) = ((plus - minus) / (2.0 * h)).transpose();
  }
  Eigen::Matrix3d omega = jac - jac.transpose();
  Eigen::Vector3d x(omega(1, 2), omega(2, 0), omega(0, 1));
  return form(t, p).dot(x);
}

void validate_model(const MappingTorusModel& model) {
  if (!(model.eps_form > 0))
    fail(ErrorCode::BadParams, "degenerate form parameter: dt alone is not contact");
  if (std::abs(model.monodromy.determinant() - 1.0) > 1e-12)
    fail(ErrorCode::BadParams, "monodromy must preserve the area form");
  if (!(model.ramp_lo > 0 && model.ramp_hi > model.ramp_lo && model.ramp_hi < 1))
    fail(ErrorCode::BadParams, "interpolation ramp out of range");
  for (int it = 0; it < 12; ++it) {
    double t = -1.0 + 3.0 * it / 11.0;
    for (int ix = 0; ix < 6; ++ix)
      for (int iy = 0; iy < 6; ++iy) {
        Eigen::Vector2d p(ix / 5.0, iy / 5.0);
        if (!(model.contact_volume(t, p) > 0))
          fail(ErrorCode::BadParams, "contact condition fails on the grid");
      }
  }
}

EquivarianceReport check_equivariance(const MappingTorusModel& model,
                                      std::size_t samples, std::uint64_t rng_seed,
                                      double tol) {
  validate_model(model);
  EquivarianceReport rep;
  rep.samples = samples;
  rep.min_contact_volume = std::numeric_limits<double>::infinity();
  Rng rng(rng_seed);
  std::uniform_real_distribution<double> ut(-1.5, 2.5), up(0.0, 1.0);
  for (std::size_t k = 0; k < samples; ++k) {
    double t = ut(rng);
    Eigen::Vector2d p(up(rng), up(rng));

    // H(t, p) = (t - 1, A p); H* alpha has spatial covector composed with A
    Eigen::Vector3d pulled;
    {
      Eigen::Vector3d at_image = model.form(t - 1.0, model.monodromy * p);
      Eigen::Vector2d spatial(at_image(1), at_image(2));
      Eigen::Vector2d composed = model.monodromy.transpose() * spatial;
      pulled = Eigen::Vector3d(at_image(0), composed.x(), composed.y());
    }
    Eigen::Vector3d direct = model.form(t, p);
    double err = (pulled - direct).cwiseAbs().maxCoeff();
    rep.max_pullback_err = std::max(rep.max_pullback_err, err);

    double frac = t - std::floor(t);
    bool flat = frac <= model.ramp_lo || frac >= model.ramp_hi;
    if (flat) {
      rep.max_flat_err = std::max(rep.max_flat_err, err);
      Eigen::Vector3d x = model.reeb(t, p);
      rep.max_reeb_dt_err = std::max(rep.max_reeb_dt_err, std::abs(x(0) - 1.0));
    }
    rep.min_contact_volume =
        std::min(rep.min_contact_volume, model.contact_volume(t, p));
  }
  if (rep.max_pullback_err > tol)
    fail(ErrorCode::EquivarianceViolation,
         "pullback mismatch " + std::to_string(rep.max_pullback_err));
  if (rep.max_reeb_dt_err > tol)
    fail(ErrorCode::EquivarianceViolation,
         "Reeb field dt component deviates on the flat strips");
  return rep;
}

}  // namespace reeblab
