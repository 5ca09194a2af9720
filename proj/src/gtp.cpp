#include "gtpb/gtp.hpp"

#include <cmath>
#include <limits>

#include "gtpb/errors.hpp"
#include "gtpb/rng.hpp"

namespace gtpb {

namespace {

void check_dimensions(const GTPModel& m) {
  if (m.a.size() != m.omega_plus.rows() || m.b.size() != m.omega_plus.rows())
    throw ValidationError("gtp model: coefficient lengths must match |Omega_+|");
  if (!(m.B_tilde > 0)) throw ValidationError("gtp model: B_tilde must be positive");
}

}  // namespace

GTPModel make_gtp_model(Eigen::MatrixXd omega_plus, double a0, Eigen::VectorXd a,
                        Eigen::VectorXd b, double B_tilde) {
  GTPModel m{std::move(omega_plus), a0, std::move(a), std::move(b), B_tilde};
  check_dimensions(m);
  const double norm = coefficient_norm(m, 2.0);
  if (norm > B_tilde * (1 + 1e-9) + 1e-12)
    throw ValidationError("gtp model: coefficient norm " + std::to_string(norm) +
                          " exceeds B_tilde " + std::to_string(B_tilde));
  return m;
}

Eigen::VectorXd feature_map(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != omega_plus.cols())
    throw ValidationError("feature_map: point dimension mismatch");
  const Eigen::Index n = omega_plus.rows();
  Eigen::VectorXd phi(2 * n + 1);
  phi[0] = 0.5;
  const Eigen::VectorXd phases = omega_plus * x;
  phi.segment(1, n) = phases.array().cos();
  phi.segment(1 + n, n) = phases.array().sin();
  return phi;
}

Eigen::MatrixXd feature_matrix(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                               const Eigen::Ref<const Eigen::MatrixXd>& X) {
  if (X.cols() != omega_plus.cols())
    throw ValidationError("feature_matrix: point dimension mismatch");
  const Eigen::Index n = omega_plus.rows();
  const Eigen::Index m = X.rows();
  Eigen::MatrixXd phi(m, 2 * n + 1);
  phi.col(0).setConstant(0.5);
  const Eigen::MatrixXd phases = X * omega_plus.transpose();  // m x n
  phi.middleCols(1, n) = phases.array().cos();
  phi.middleCols(1 + n, n) = phases.array().sin();
  return phi;
}

double evaluate(const GTPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  check_dimensions(model);
  return pack_coefficients(model).dot(feature_map(model.omega_plus, x));
}

Eigen::VectorXd evaluate_batch(const GTPModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& X) {
  check_dimensions(model);
  return feature_matrix(model.omega_plus, X) * pack_coefficients(model);
}

Eigen::VectorXd pack_coefficients(const GTPModel& model) {
  const Eigen::Index n = model.omega_plus.rows();
  Eigen::VectorXd c(2 * n + 1);
  c[0] = model.a0;
  c.segment(1, n) = model.a;
  c.segment(1 + n, n) = model.b;
  return c;
}

GTPModel model_from_coefficients(Eigen::MatrixXd omega_plus,
                                 const Eigen::Ref<const Eigen::VectorXd>& coeffs, double B_tilde) {
  const Eigen::Index n = omega_plus.rows();
  if (coeffs.size() != 2 * n + 1)
    throw ValidationError("model_from_coefficients: expected 2|Omega_+|+1 coefficients");
  return make_gtp_model(std::move(omega_plus), coeffs[0], coeffs.segment(1, n),
                        coeffs.segment(1 + n, n), B_tilde);
}

double coefficient_norm(const GTPModel& model, double p) {
  const Eigen::VectorXd c = pack_coefficients(model);
  if (std::isinf(p)) return c.cwiseAbs().maxCoeff();
  if (p < 1) throw ValidationError("coefficient_norm: p must be in [1, inf]");
  if (p == 2.0) return c.norm();
  if (p == 1.0) return c.cwiseAbs().sum();
  return std::pow(c.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

Eigen::VectorXd project_to_ball(Eigen::VectorXd coeffs, double B_tilde, double p) {
  if (!(B_tilde > 0)) throw ValidationError("project_to_ball: B_tilde must be positive");
  if (p != 2.0)
    throw CapabilityError("project_to_ball: only p = 2 is supported in this version");
  const double norm = coeffs.norm();
  if (norm > B_tilde) coeffs *= B_tilde / norm;
  return coeffs;
}

double btilde_for_integer_spectrum(double B) {
  if (!(B > 0)) throw ValidationError("btilde_for_integer_spectrum: B must be positive");
  return 2.0 * B;
}

double btilde_conjectured_general(double B, Eigen::Index n_omega) {
  if (!(B > 0) || n_omega < 1)
    throw ValidationError("btilde_conjectured_general: need B > 0 and |Omega| >= 1");
  return 2.0 * std::sqrt(static_cast<double>(n_omega)) * B;
}

GTPModel random_model(const Eigen::MatrixXd& omega_plus, double B_tilde, std::uint64_t seed,
                      RandomModelMode mode) {
  if (!(B_tilde > 0)) throw ValidationError("random_model: B_tilde must be positive");
  RngStream rng(seed);
  const Eigen::Index dim = 2 * omega_plus.rows() + 1;
  Eigen::VectorXd g(dim);
  for (Eigen::Index i = 0; i < dim; ++i) g[i] = rng.gaussian();
  double norm = g.norm();
  if (norm == 0) norm = 1;
  double radius = B_tilde;
  if (mode == RandomModelMode::Ball)
    radius *= std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
  g *= radius / norm;
  return model_from_coefficients(omega_plus, g, B_tilde);
}

ComplexCoefficients to_complex(const GTPModel& model) {
  check_dimensions(model);
  ComplexCoefficients c;
  c.omega_plus = model.omega_plus;
  c.c0 = std::complex<double>(model.a0 / 2.0, 0.0);
  const Eigen::Index n = model.omega_plus.rows();
  c.c_plus.resize(n);
  c.c_minus.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c.c_plus[i] = std::complex<double>(model.a[i] / 2.0, model.b[i] / 2.0);
    c.c_minus[i] = std::conj(c.c_plus[i]);
  }
  return c;
}

GTPModel to_real_coefficients(const ComplexCoefficients& c, double B_tilde) {
  const Eigen::Index n = c.omega_plus.rows();
  if (c.c_plus.size() != n || c.c_minus.size() != n)
    throw ValidationError("to_real_coefficients: coefficient lengths must match |Omega_+|");
  double violation = std::abs(c.c0.imag());
  for (Eigen::Index i = 0; i < n; ++i)
    violation = std::max(violation, std::abs(c.c_minus[i] - std::conj(c.c_plus[i])));
  if (violation > 1e-8)
    throw ValidationError("to_real_coefficients: Hermitian symmetry violated by " +
                          std::to_string(violation));
  const double a0 = 2.0 * c.c0.real();
  Eigen::VectorXd a(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> sum = c.c_plus[i] + c.c_minus[i];
    const std::complex<double> diff = c.c_plus[i] - c.c_minus[i];
    a[i] = sum.real();
    b[i] = diff.imag();  // (1/i)(c_w - c_{-w})
  }
  return make_gtp_model(c.omega_plus, a0, std::move(a), std::move(b), B_tilde);
}

Eigen::VectorXd max_frequencies(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus) {
  if (omega_plus.rows() == 0) return Eigen::VectorXd::Zero(omega_plus.cols());
  return omega_plus.cwiseAbs().colwise().maxCoeff().transpose();
}

Eigen::VectorXi nyquist_grid_sizes(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus, int factor,
                                   int minimum) {
  const Eigen::VectorXd K = max_frequencies(omega_plus);
  Eigen::VectorXi sizes(K.size());
  for (Eigen::Index i = 0; i < K.size(); ++i)
    sizes[i] = std::max(minimum, factor * static_cast<int>(std::ceil(K[i])) + 1);
  return sizes;
}

Eigen::MatrixXd grid_points(const Eigen::VectorXi& grid_sizes) {
  const int d = static_cast<int>(grid_sizes.size());
  long long total = 1;
  for (int i = 0; i < d; ++i) {
    if (grid_sizes[i] < 1) throw ValidationError("grid_points: grid sizes must be >= 1");
    total *= grid_sizes[i];
    if (total > 50'000'000) throw ResourceError("grid_points: grid too large");
  }
  Eigen::MatrixXd X(total, d);
  for (long long idx = 0; idx < total; ++idx) {
    long long rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      const long long g = rem % grid_sizes[i];
      rem /= grid_sizes[i];
      X(idx, i) = 2.0 * M_PI * static_cast<double>(g) / static_cast<double>(grid_sizes[i]);
    }
  }
  return X;
}

double grid_sup_norm(const GTPModel& model, const Eigen::VectorXi& grid_sizes) {
  return evaluate_batch(model, grid_points(grid_sizes)).cwiseAbs().maxCoeff();
}

double grid_l2_norm(const GTPModel& model, const Eigen::VectorXi& grid_sizes) {
  const Eigen::VectorXd vals = evaluate_batch(model, grid_points(grid_sizes));
  const double mean_sq = vals.squaredNorm() / static_cast<double>(vals.size());
  return std::sqrt(mean_sq * std::pow(2.0 * M_PI, model.d()));
}

}  // namespace gtpb
