#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace gtpb {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDedupTol = 1e-9;

// Dense Hermitian operator. `integer_spectrum` marks spectra declared exact
// integers (Pauli strings, integer diagonals); those take the exact difference
// path that bypasses tolerances.
struct HermitianOperator {
  Eigen::MatrixXcd entries;
  bool integer_spectrum = false;

  Eigen::Index dim() const { return entries.rows(); }
};

// Eigenvalues in nondecreasing order, multiplicity preserved.
struct Spectrum {
  Eigen::VectorXd values;
  bool integral = false;

  Eigen::Index size() const { return values.size(); }
};

// Delta(H) = {lambda_i - lambda_j}: deduplicated, sorted, contains 0 and is
// symmetric under negation, so |values| = 2T + 1.
struct DifferenceSet {
  std::vector<double> values;
  double tolerance = 0.0;  // 0 on the exact-integer path
  bool integral = false;

  int positive_count() const { return static_cast<int>(values.size() - 1) / 2; }
};

struct MaxDifferenceCount {
  long long tight;           // D(D-1) + 1, attained by geometric spectra
  long long unsigned_pairs;  // D(D-1)/2 + 1, counts each +/- pair once
};

// Validates Hermiticity within tol (relative to the Frobenius norm).
HermitianOperator make_hermitian(Eigen::MatrixXcd entries, double tol = kHermitianTol,
                                 bool integer_spectrum = false);

// Tensor product of single-qubit Paulis, e.g. "ZZI". Always integer spectrum.
HermitianOperator make_pauli_string(const std::string& labels);

// Diagonal operator; declared integer when every entry is an exact integer.
HermitianOperator make_diagonal(const Eigen::VectorXd& values);

// Ascending eigenvalues; checks the reconstruction residual
// ||H - V L V*||_F <= tol * ||H||_F.
Spectrum eigenvalues(const HermitianOperator& H, double tol = 1e-10);

// Operator norm ||H||_inf = max |eigenvalue|.
double operator_norm_inf(const HermitianOperator& H);

DifferenceSet difference_set(const Spectrum& s, double tol = kDedupTol);

// Maximum attainable |Delta| for `num_distinct_eigenvalues` distinct values.
MaxDifferenceCount max_distinct_differences(long long num_distinct_eigenvalues);

}  // namespace gtpb
