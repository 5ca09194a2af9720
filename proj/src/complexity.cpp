#include "gtpb/complexity.hpp"

#include <cmath>
#include <functional>

#include "gtpb/errors.hpp"
#include "gtpb/rng.hpp"

namespace gtpb {

namespace {

double simpson(double lo, double hi, double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
                        double fmid, double fhi, double whole, double tol, int depth,
                        int max_depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flmid = f(lmid);
  const double frmid = f(rmid);
  const double left = simpson(lo, mid, flo, flmid, fmid);
  const double right = simpson(mid, hi, fmid, frmid, fhi);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= max_depth)
    throw NumericError("adaptive quadrature did not converge within depth limit");
  return adaptive_simpson(f, lo, mid, flo, flmid, fmid, left, 0.5 * tol, depth + 1, max_depth) +
         adaptive_simpson(f, mid, hi, fmid, frmid, fhi, right, 0.5 * tol, depth + 1, max_depth);
}

double integrate(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                 int max_depth) {
  if (!(hi > lo)) return 0.0;
  const double flo = f(lo);
  const double fhi = f(hi);
  const double fmid = f(0.5 * (lo + hi));
  const double whole = simpson(lo, hi, flo, fmid, fhi);
  const double tol = std::max(std::abs(whole) * rel_tol, 1e-300);
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 0, max_depth);
}

}  // namespace

double rademacher_sup_closed_form(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                                  double B_tilde,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X,
                                  const Eigen::Ref<const Eigen::VectorXd>& sigma) {
  const Eigen::Index m = X.rows();
  if (m < 1) throw ValidationError("rademacher_sup_closed_form: need m >= 1 sample points");
  if (sigma.size() != m)
    throw ValidationError("rademacher_sup_closed_form: sigma length must equal |X|");
  if (!(B_tilde > 0)) throw ValidationError("rademacher_sup_closed_form: B_tilde must be positive");
  const Eigen::MatrixXd phi = feature_matrix(omega_plus, X);
  return B_tilde * (phi.transpose() * sigma).norm() / static_cast<double>(m);
}

RademacherEstimate rademacher_mc(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                                 double B_tilde, const Eigen::Ref<const Eigen::MatrixXd>& X,
                                 int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ValidationError("rademacher_mc: need n_samples >= 1");
  const Eigen::Index m = X.rows();
  if (m < 1) throw ValidationError("rademacher_mc: need m >= 1 sample points");
  const Eigen::MatrixXd phiT = feature_matrix(omega_plus, X).transpose();

  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd sigma(m);
  for (int s = 0; s < n_samples; ++s) {
    RngStream rng(seed, static_cast<std::uint64_t>(s));
    for (Eigen::Index i = 0; i < m; ++i) sigma[i] = rng.sign();
    const double v = B_tilde * (phiT * sigma).norm() / static_cast<double>(m);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n_samples;
  double std_error = 0.0;
  if (n_samples > 1) {
    const double var = std::max(0.0, (sum_sq - n_samples * mean * mean) / (n_samples - 1));
    std_error = std::sqrt(var / n_samples);
  }
  return RademacherEstimate{mean, std_error, n_samples, seed};
}

double rademacher_bound_v1(double K, double B_tilde, double n_omega_plus, int d, long long m) {
  if (K < 0 || !(B_tilde > 0) || n_omega_plus < 0 || d < 1 || m < 1)
    throw ValidationError("rademacher_bound_v1: invalid arguments");
  const double weight = std::max(K, B_tilde * std::sqrt(n_omega_plus));
  const double bias = std::max(M_PI, B_tilde);
  return (2.0 * M_PI * weight * std::sqrt(2.0 * std::log(2.0 * d)) + bias) /
         std::sqrt(static_cast<double>(m));
}

double rademacher_bound_v2(double B_tilde, double n_omega, long long m) {
  if (!(B_tilde > 0) || m < 1) throw ValidationError("rademacher_bound_v2: invalid arguments");
  if (n_omega < 2)
    throw ValidationError("rademacher_bound_v2: |Omega| must be >= 2 for a positive log");
  const double rm = std::sqrt(static_cast<double>(m));
  return B_tilde / rm + 2.0 * B_tilde * std::sqrt(n_omega) * std::sqrt(2.0 * std::log(n_omega)) / rm;
}

double rademacher_bound_min(double K, double B_tilde, double n_omega, int d, long long m) {
  if (n_omega < 2) throw ValidationError("rademacher_bound_min: |Omega| must be >= 2");
  return std::min(rademacher_bound_v1(K, B_tilde, (n_omega - 1) / 2.0, d, m),
                  rademacher_bound_v2(B_tilde, n_omega, m));
}

double massart_bound(double r, Eigen::Index set_size, long long N) {
  if (r < 0 || set_size < 1 || N < 1) throw ValidationError("massart_bound: invalid arguments");
  return r * std::sqrt(2.0 * std::log(static_cast<double>(set_size))) / static_cast<double>(N);
}

CoveringBound covering_number_bound(double B_tilde, double n_omega, double epsilon) {
  if (!(epsilon > 0) || !(B_tilde > 0) || n_omega < 1)
    throw ValidationError("covering_number_bound: invalid arguments");
  const double n = n_omega;
  const double outer = 6.0 * B_tilde * std::sqrt(n) / epsilon;
  const double inner = 3.0 * B_tilde * std::sqrt(n) / epsilon;  // (3 B~ / eps~), eps~ = eps/sqrt(n)
  CoveringBound b;
  b.log2_value = n * std::log2(outer);
  b.value = std::pow(outer, n);
  b.inner_net_log2 = n * std::log2(inner);
  b.inner_net_value = std::pow(inner, n);
  return b;
}

CoverNet construct_cover(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus, double B_tilde,
                         double epsilon, long long grid_cap) {
  if (!(epsilon > 0) || !(B_tilde > 0))
    throw ValidationError("construct_cover: epsilon and B_tilde must be positive");
  const Eigen::Index dim = 2 * omega_plus.rows() + 1;  // = |Omega|
  const double eps_c = epsilon / std::sqrt(static_cast<double>(dim));

  CoverNet net;
  net.epsilon = epsilon;

  if (eps_c >= B_tilde) {  // one center at the origin covers the whole ball
    net.members.push_back(
        model_from_coefficients(omega_plus, Eigen::VectorXd::Zero(dim), B_tilde));
    return net;
  }

  const double spacing = 2.0 * eps_c / std::sqrt(static_cast<double>(dim));
  const long long half_axis = static_cast<long long>(std::floor(B_tilde / spacing)) + 1;
  const long long per_axis = 2 * half_axis + 1;
  double total = 1;
  for (Eigen::Index i = 0; i < dim; ++i) total *= static_cast<double>(per_axis);
  if (total > static_cast<double>(grid_cap))
    throw ResourceError("construct_cover: coefficient grid needs " + std::to_string(total) +
                        " points, cap is " + std::to_string(grid_cap));

  const long long total_ll = static_cast<long long>(total);
  Eigen::VectorXd point(dim);
  for (long long idx = 0; idx < total_ll; ++idx) {
    long long rem = idx;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const long long g = rem % per_axis - half_axis;
      rem /= per_axis;
      point[i] = spacing * static_cast<double>(g);
    }
    if (point.norm() > B_tilde + eps_c) continue;
    net.members.push_back(
        model_from_coefficients(omega_plus, project_to_ball(point, B_tilde), B_tilde));
  }
  return net;
}

double dudley_entropy_integral(double B, double B_tilde, double n_omega, double epsilon,
                               const QuadratureConfig& cfg) {
  if (!(B > 0) || !(B_tilde > 0) || n_omega < 1 || epsilon < 0)
    throw ValidationError("dudley_entropy_integral: invalid arguments");
  if (epsilon >= B) return 0.0;
  const double n = n_omega;
  const double a = std::log(3.0 * B_tilde) + 0.5 * std::log(n);
  // Substitution u = log(2/beta): integrand sqrt(n (a + u)) * 2 e^{-u}, which
  // vanishes for u < -a and decays fast, so the beta -> 0 head is harmless.
  const double lo = std::max(std::log(2.0 / B), -a);
  double hi;
  if (epsilon > 0) {
    hi = std::log(2.0 / epsilon);
    if (hi <= lo) return 0.0;
  } else {
    hi = lo + 80.0;  // e^{-80} tail is far below the requested tolerance
  }
  const auto integrand = [n, a](double u) {
    return std::sqrt(n * std::max(0.0, a + u)) * 2.0 * std::exp(-u);
  };
  return integrate(integrand, lo, hi, cfg.rel_tol, cfg.max_depth);
}

double dudley_rademacher_bound(double B, double B_tilde, double n_omega, long long m,
                               const QuadratureConfig& cfg) {
  if (m < 1) throw ValidationError("dudley_rademacher_bound: need m >= 1");
  if (cfg.cutoff_grid < 1) throw ValidationError("dudley_rademacher_bound: empty cutoff grid");
  const double scale = 12.0 / std::sqrt(static_cast<double>(m));
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.cutoff_grid; ++k) {
    const double eps = 0.5 * B * static_cast<double>(k) / static_cast<double>(cfg.cutoff_grid);
    const double value = 4.0 * eps + scale * dudley_entropy_integral(B, B_tilde, n_omega, eps, cfg);
    best = std::min(best, value);
  }
  return best;
}

double rademacher_bound_pnorm(double B_tilde, double n_omega, double p, long long m,
                              bool with_log_factor) {
  if (!(B_tilde > 0) || n_omega < 1 || m < 1 || p < 1)
    throw ValidationError("rademacher_bound_pnorm: invalid arguments");
  const double n = n_omega;
  const double q_inv = 1.0 - 1.0 / p;  // 1/q with 1/p + 1/q = 1
  double value = B_tilde * std::pow(n, q_inv) / std::sqrt(static_cast<double>(m));
  if (with_log_factor && n_omega >= 2) value *= std::sqrt(2.0 * std::log(n));
  return value;
}

}  // namespace gtpb
