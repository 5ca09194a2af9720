#pragma once

#include <Eigen/Dense>

#include <functional>
#include <set>
#include <vector>

#include "gtpb/operators.hpp"

namespace gtpb {

inline constexpr long long kDefaultOmegaCap = 10'000'000;

// Data-encoding strategy D = (D^(1), ..., D^(d)): an ordered list of encoding
// Hamiltonians per data coordinate.
struct EncodingStrategy {
  int d = 1;
  std::vector<std::vector<HermitianOperator>> per_coordinate;

  int gate_count(int coordinate) const {  // N^(i), coordinate 1-based
    return static_cast<int>(per_coordinate.at(coordinate - 1).size());
  }
  int total_gates() const {
    int n = 0;
    for (const auto& c : per_coordinate) n += static_cast<int>(c.size());
    return n;
  }
  bool coordinate_integral(int coordinate) const {
    for (const auto& h : per_coordinate.at(coordinate - 1))
      if (!h.integer_spectrum) return false;
    return true;
  }
};

// Frequency spectrum Omega: deduplicated d-dimensional frequency vectors,
// symmetric under negation and containing 0. Rows of `vectors` are sorted
// lexicographically; `omega_plus` holds the lexicographically positive
// representative of each +/- pair, so |vectors| = 2 * |omega_plus| + 1.
struct FrequencySet {
  int d = 1;
  bool integral = false;
  double tolerance = 0.0;        // dedup grid spacing on the float path
  Eigen::MatrixXd vectors;       // |Omega| x d
  Eigen::MatrixXd omega_plus;    // |Omega_+| x d
  Eigen::VectorXd K_per_coordinate;
  double K = 0.0;                // sum of K_i

  Eigen::Index size() const { return vectors.rows(); }
};

// {0} in dimension d (exact path).
FrequencySet zero_frequency_set(int d);

// Omega(H) = {delta e_coordinate : delta in Delta(H)}, coordinate 1-based.
FrequencySet omega_of_hamiltonian(const HermitianOperator& H, int coordinate, int d,
                                  double tol = kDedupTol);

FrequencySet frequency_set_from_differences(const DifferenceSet& delta, int coordinate, int d);

// Builds the canonical set from raw vectors (dedup + symmetry bookkeeping).
FrequencySet make_frequency_set(int d, const std::vector<Eigen::VectorXd>& vectors, bool integral,
                                double tol = kDedupTol);

FrequencySet minkowski_sum(const FrequencySet& a, const FrequencySet& b, double tol = kDedupTol,
                           long long cap = kDefaultOmegaCap);

// Iterated Minkowski sum over all encoding Hamiltonians. Cross-checks the
// product law |Omega| = prod_i |Omega^(i)| and enforces the cardinality cap.
FrequencySet omega_total(const EncodingStrategy& strategy, double tol = kDedupTol,
                         long long cap = kDefaultOmegaCap);

// |Omega^(i)| per coordinate via exact 1-D sumset enumeration.
std::vector<long long> per_coordinate_cardinalities(const EncodingStrategy& strategy,
                                                    double tol = kDedupTol,
                                                    long long cap = kDefaultOmegaCap);

// Scalar frequencies of one coordinate given its gates' difference sets.
std::vector<double> coordinate_frequencies(const std::vector<DifferenceSet>& gates, double tol,
                                           long long cap);

// Integer keys for exact membership tests; requires the integral path.
std::set<std::vector<long long>> integer_keys(const FrequencySet& omega);

// --- Closed-form cardinality bounds ------------------------------------------

// binom(N + T - 1, N): weak compositions of N into T parts. Exact; overflow
// past 64 bits raises a numeric error.
unsigned long long weak_composition_count(long long N, long long T);

// |Omega^(i)| = 2 N_i + 1 for repeated Pauli encodings.
long long bound_pauli(long long N_i);

// binom(N_i + T - 1, N_i) * (2 N_i / T + 1)^T for a repeated Hamiltonian with
// 2T + 1 frequencies; exact integer sub-path when T divides 2 N_i.
double bound_repeated(long long N_i, long long T);

// (2^k (2^k - 1)/2 + 1)^{N_i} literal, (2^k (2^k - 1) + 1)^{N_i} corrected.
double bound_klocal_worstcase(long long N_i, int kappa, bool corrected);

// (sum b_i / d)^d >= prod b_i.
double bound_total_amgm(const std::vector<double>& per_coordinate_bounds, int d);

// --- Table-1 scaling ----------------------------------------------------------

// A one-coordinate family: for each N, the difference sets of its N gates.
using StrategyFamily = std::function<std::vector<DifferenceSet>(int N)>;

// Least-squares slope of log |Omega^(i)_exact| versus log N.
double scaling_exponent_fit(const StrategyFamily& family, const std::vector<int>& N_values,
                            double tol = kDedupTol, long long cap = kDefaultOmegaCap);

}  // namespace gtpb
