#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "gtpb/complexity.hpp"

namespace gtpb {

enum class LossKind { ClippedAbsolute, ClippedSquared };

// Bounded Lipschitz loss: ell maps into [0, c] and z -> ell(y, z) is
// L-Lipschitz for every y.
struct LossSpec {
  LossKind kind = LossKind::ClippedAbsolute;
  double c = 1.0;
  double L = 1.0;
};

LossSpec clipped_absolute_loss(double c);  // ell = min(|y-z|, c), L = 1
LossSpec clipped_squared_loss(double c);   // ell = min((y-z)^2, c), L = 2c

double loss_value(const LossSpec& loss, double y, double z);

// 2 L rad + 3c sqrt(log(2/delta) / (2m))
double gen_gap_bound_rademacher(double rad, const LossSpec& loss, long long m, double delta);

// 2 L dudley_rademacher_bound(B, B_tilde, |Omega|, m) + 3c sqrt(log(2/delta) / (2m))
double gen_gap_bound_covering(double B, double B_tilde, double n_omega, const LossSpec& loss,
                              long long m, double delta, const QuadratureConfig& quad = {});

enum class BoundRoute { Rademacher, Covering };

struct GapBoundParams {
  double K = 0.0;        // Rademacher route
  double B = 1.0;        // covering route (sup-norm radius)
  double B_tilde = 1.0;
  double n_omega = 1.0;  // exact |Omega| or an upper bound on it
  int d = 1;
  LossSpec loss;
  QuadratureConfig quad;
};

double gen_gap_bound(BoundRoute route, const GapBoundParams& params, long long m, double delta);

// Smallest m with g(m) <= epsilon, by exponential then binary search on the
// monotone-in-m bound. Guarantees g(m) <= epsilon and g(m - 1) > epsilon.
long long sample_size_for_gap(double epsilon, double delta, const GapBoundParams& params,
                              BoundRoute route, long long m_cap = 1LL << 50);

enum class StrategyKind { Pauli, SameT, SameKLocal, DiffKLocal };

struct EncodingBoundInputs {
  StrategyKind kind = StrategyKind::Pauli;
  int N = 1;          // total encoding gates, split as evenly as possible over d
  int d = 1;
  int T = 1;          // SameT
  int kappa = 1;      // SameKLocal / DiffKLocal
  double M_norm = 1;  // B = ||M||_inf
  LossSpec loss;
  long long m = 100;
  double delta = 0.05;
  bool use_exact_omega = false;  // enumerate the canonical strategy when feasible
  long long cap = 10'000'000;
};

struct BoundReport {
  std::string strategy;  // provenance descriptor
  double n_omega = 1;    // exact |Omega| or closed-form bound
  bool omega_is_exact = false;
  double B = 1, B_tilde = 2, K = 0;
  int d = 1;
  long long m = 1;
  double delta = 0.05;
  LossSpec loss;
  double rademacher_route = 0, covering_route = 0, chosen = 0;
  bool exponential_regime = false;
  std::vector<std::string> notes;
};

BoundReport encoding_bound_report(const EncodingBoundInputs& in);

struct EncodingStrategy;  // encoding.hpp

// Report for an explicit strategy: enumerates Omega exactly. Integer spectra
// take B_tilde = 2B; non-integer spectra are rejected unless the caller opts
// into the conjectured B_tilde = 2 sqrt(|Omega|) B.
BoundReport strategy_bound_report(const EncodingStrategy& strategy, double M_norm,
                                  const LossSpec& loss, long long m, double delta,
                                  bool conjecture1_opt_in = false, double tol = 1e-9,
                                  long long cap = 10'000'000);

nlohmann::json to_json(const BoundReport& report);
std::string bound_report_csv_header();
std::string bound_report_csv_row(const BoundReport& report);

// min_i of pre-evaluated bounds; the caller evaluates each at delta / n.
std::pair<std::string, double> union_bound_combine(
    const std::vector<std::pair<std::string, double>>& bounds);

}  // namespace gtpb
