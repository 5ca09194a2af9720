#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gtpb/genbounds.hpp"
#include "gtpb/gtp.hpp"
#include "gtpb/rng.hpp"

namespace gtpb {

struct DataSet {
  Eigen::MatrixXd X;  // m x d, points in [0, 2pi)^d
  Eigen::VectorXd y;

  Eigen::Index size() const { return X.rows(); }
  int d() const { return static_cast<int>(X.cols()); }
};

// Draw i of a data distribution; `index` keys the counter-based stream so
// estimates are deterministic per seed and schedule-independent.
using Sampler = std::function<std::pair<Eigen::VectorXd, double>(std::uint64_t index, RngStream&)>;

Sampler target_sampler(const GTPModel& target, double noise_sigma);
Sampler reemitter_sampler(DataSet S);  // cycles the set, ignores the stream

double empirical_risk(const GTPModel& model, const DataSet& S, const LossSpec& loss);

struct RiskEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n_eval = 0;
};

RiskEstimate estimate_true_risk(const GTPModel& model, const Sampler& sampler, int n_eval,
                                std::uint64_t seed, const LossSpec& loss);

double generalization_gap(const GTPModel& model, const DataSet& S, const Sampler& sampler,
                          int n_eval, std::uint64_t seed, const LossSpec& loss);

// Norm-constrained least squares over the feature map: unconstrained normal
// equations first; if the minimizer leaves the B_tilde ball, the ridge path
// lambda -> coeffs(lambda) is root-found so ||coeffs||_2 = B_tilde.
GTPModel fit_gtp(const Eigen::MatrixXd& omega_plus, double B_tilde, const DataSet& S);

enum class XDistribution { Uniform, Grid };

// y = target(x) + N(0, noise_sigma^2); Grid walks the target's Nyquist grid.
DataSet synth_data(const GTPModel& target, double noise_sigma, int m, std::uint64_t seed,
                   XDistribution dist = XDistribution::Uniform);

struct SRMCandidate {
  double k = 0;
  Eigen::MatrixXd omega_plus;
  double B_tilde = 1.0;
  double B = 0.0;  // sup-norm radius for the covering route; 0 -> B_tilde / 2
};

struct SRMRow {
  double k = 0;
  double k2 = std::numeric_limits<double>::quiet_NaN();  // srm_multi only
  double empirical_risk = 0;
  double bound_value = 0;
  double total = 0;
  bool failed = false;
  std::string error;
  std::string bound_label;
};

struct SRMResult {
  std::vector<SRMRow> rows;
  int selected_index = -1;
  double k_opt = 0;
  GTPModel selected_model;
};

SRMResult srm_select(const std::vector<SRMCandidate>& candidates, const DataSet& S, double delta,
                     const LossSpec& loss, BoundRoute route);

// Two-hyper-parameter SRM: per candidate the bound is
// min(g1(k1, m, delta/2), g2(k2, m, delta/2)).
struct SRMMultiCandidate {
  double k1 = 0;
  double k2 = 0;
  Eigen::MatrixXd omega_plus;
  double B_tilde = 1.0;
};

using BoundFamily = std::function<double(double k, long long m, double delta)>;

SRMResult srm_multi(const std::vector<SRMMultiCandidate>& candidates, const BoundFamily& g1,
                    const BoundFamily& g2, const DataSet& S, double delta, const LossSpec& loss);

// CSV with header x1,...,xd,y.
DataSet read_dataset_csv(const std::string& path);
void write_dataset_csv(const DataSet& S, const std::string& path);

}  // namespace gtpb
