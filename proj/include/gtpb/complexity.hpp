#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "gtpb/gtp.hpp"

namespace gtpb {

struct RademacherEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n_sigma_samples = 0;
  std::uint64_t seed = 0;
};

struct CoverNet {
  std::vector<GTPModel> members;
  double epsilon = 0.0;
  std::string norm = "sup_grid";
};

struct CoveringBound {
  double value;           // (2 * 3 * B_tilde sqrt(|Omega|) / eps)^{|Omega|}
  double log2_value;      // |Omega| * log2(6 B_tilde sqrt(|Omega|) / eps)
  double inner_net_value; // (3 B_tilde / eps~)^{|Omega|}, eps~ = eps / sqrt(|Omega|)
  double inner_net_log2;
};

struct QuadratureConfig {
  double rel_tol = 1e-6;
  int max_depth = 48;
  int cutoff_grid = 64;  // candidate cutoffs in [0, B/2)
};

// Exact supremum of (1/m) sum_i sigma_i f(x_i) over the B_tilde coefficient
// ball: linearity gives sup = (B_tilde / m) ||sum_i sigma_i phi(x_i)||_2.
double rademacher_sup_closed_form(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                                  double B_tilde,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X,
                                  const Eigen::Ref<const Eigen::VectorXd>& sigma);

// Monte Carlo over i.i.d. uniform sigma; sample i is keyed by (seed, i).
RademacherEstimate rademacher_mc(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                                 double B_tilde, const Eigen::Ref<const Eigen::MatrixXd>& X,
                                 int n_samples, std::uint64_t seed);

// (2 pi max{K, B_tilde sqrt(|Omega_+|)} sqrt(2 log 2d) + max{pi, B_tilde}) / sqrt(m)
double rademacher_bound_v1(double K, double B_tilde, double n_omega_plus, int d, long long m);

// B_tilde / sqrt(m) + 2 B_tilde sqrt(|Omega|) sqrt(2 log |Omega|) / sqrt(m)
double rademacher_bound_v2(double B_tilde, double n_omega, long long m);

double rademacher_bound_min(double K, double B_tilde, double n_omega, int d, long long m);

// r sqrt(2 log |A|) / N
double massart_bound(double r, Eigen::Index set_size, long long N);

CoveringBound covering_number_bound(double B_tilde, double n_omega, double epsilon);

// Axis-aligned coefficient grid with spacing 2 eps~ / sqrt(dim), clipped to the
// B_tilde + eps~ shell and projected onto the ball; covers the ball within eps~
// in 2-norm and hence the class within eps in sup norm.
CoverNet construct_cover(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus, double B_tilde,
                         double epsilon, long long grid_cap = 2'000'000);

// Entropy integral int_eps^B sqrt(|Omega| (log(3 B_tilde) + log(|Omega|)/2 + log(2/beta))) dbeta.
double dudley_entropy_integral(double B, double B_tilde, double n_omega, double epsilon,
                               const QuadratureConfig& cfg = {});

// min over cutoffs eps in [0, B/2) of 4 eps + (12 / sqrt(m)) * integral.
double dudley_rademacher_bound(double B, double B_tilde, double n_omega, long long m,
                               const QuadratureConfig& cfg = {});

// Remark-10 style p-norm bound B_tilde |Omega|^{1/q} / sqrt(m), reporting only.
double rademacher_bound_pnorm(double B_tilde, double n_omega, double p, long long m,
                              bool with_log_factor = false);

}  // namespace gtpb
