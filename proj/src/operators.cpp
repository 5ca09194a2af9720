#include "gtpb/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gtpb/errors.hpp"

namespace gtpb {

namespace {

Eigen::Matrix2cd pauli_matrix(char label) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd p;
  switch (label) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, -1i, 1i, 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default:
      throw ValidationError(std::string("make_pauli_string: invalid label '") + label +
                            "', expected one of I, X, Y, Z");
  }
  return p;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_exact_integer(double v) {
  return std::isfinite(v) && v == std::nearbyint(v) && std::abs(v) < 9e15;
}

}  // namespace

HermitianOperator make_hermitian(Eigen::MatrixXcd entries, double tol, bool integer_spectrum) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw ValidationError("make_hermitian: matrix must be square and nonempty");
  const double scale = std::max(1.0, entries.norm());
  const double dev = (entries - entries.adjoint()).norm();
  if (dev > tol * scale) {
    std::ostringstream msg;
    msg << "make_hermitian: matrix is not Hermitian, ||H - H*||_F = " << dev;
    throw ValidationError(msg.str());
  }
  // Symmetrize so downstream solvers see an exactly Hermitian matrix.
  entries = 0.5 * (entries + entries.adjoint()).eval();
  return HermitianOperator{std::move(entries), integer_spectrum};
}

HermitianOperator make_pauli_string(const std::string& labels) {
  if (labels.empty()) throw ValidationError("make_pauli_string: empty label sequence");
  Eigen::MatrixXcd m = pauli_matrix(labels[0]);
  for (std::size_t k = 1; k < labels.size(); ++k) m = kron(m, pauli_matrix(labels[k]));
  return HermitianOperator{std::move(m), true};
}

HermitianOperator make_diagonal(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw ValidationError("make_diagonal: empty value sequence");
  bool integral = true;
  for (Eigen::Index i = 0; i < values.size(); ++i) integral = integral && is_exact_integer(values[i]);
  Eigen::MatrixXcd m = values.cast<std::complex<double>>().asDiagonal();
  return HermitianOperator{std::move(m), integral};
}

Spectrum eigenvalues(const HermitianOperator& H, double tol) {
  if (H.dim() == 0) throw ValidationError("eigenvalues: empty operator");
  const double scale = std::max(1.0, H.entries.norm());
  if ((H.entries - H.entries.adjoint()).norm() > kHermitianTol * scale)
    throw ValidationError("eigenvalues: operator is not Hermitian within 1e-12");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.entries);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigenvalues: eigensolver did not converge");

  const Eigen::MatrixXcd recon = solver.eigenvectors() *
                                 solver.eigenvalues().asDiagonal() *
                                 solver.eigenvectors().adjoint();
  const double residual = (H.entries - recon).norm();
  if (residual > tol * scale) {
    std::ostringstream msg;
    msg << "eigenvalues: reconstruction residual " << residual << " exceeds " << tol * scale;
    throw NumericError(msg.str());
  }

  Eigen::VectorXd vals = solver.eigenvalues();  // Eigen returns them ascending
  if (H.integer_spectrum) {
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      const double r = std::nearbyint(vals[i]);
      if (std::abs(vals[i] - r) > 1e-8)
        throw ValidationError("eigenvalues: spectrum declared integer but eigenvalue " +
                              std::to_string(vals[i]) + " is not integral");
      vals[i] = r;
    }
  }
  return Spectrum{std::move(vals), H.integer_spectrum};
}

double operator_norm_inf(const HermitianOperator& H) {
  const Spectrum s = eigenvalues(H);
  return s.values.cwiseAbs().maxCoeff();
}

DifferenceSet difference_set(const Spectrum& s, double tol) {
  if (s.size() == 0) throw ValidationError("difference_set: empty spectrum");

  if (s.integral) {
    std::set<long long> pos;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      for (Eigen::Index j = 0; j < s.size(); ++j) {
        const long long d = llround(s.values[i]) - llround(s.values[j]);
        if (d > 0) pos.insert(d);
      }
    std::vector<double> vals;
    vals.reserve(2 * pos.size() + 1);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) vals.push_back(-static_cast<double>(*it));
    vals.push_back(0.0);
    for (long long d : pos) vals.push_back(static_cast<double>(d));
    return DifferenceSet{std::move(vals), 0.0, true};
  }

  if (!(tol > 0)) throw ValidationError("difference_set: tolerance must be positive");
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(s.size()) * s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double d = s.values[i] - s.values[j];
      if (d > 0) raw.push_back(d);
    }
  std::sort(raw.begin(), raw.end());

  // Chain-cluster the positive side within tol, mirror for symmetry.
  std::vector<double> pos;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t j = i + 1;
    double sum = raw[i];
    while (j < raw.size() && raw[j] - raw[j - 1] <= tol) sum += raw[j++];
    const double rep = sum / static_cast<double>(j - i);
    if (rep > tol) pos.push_back(rep);
    i = j;
  }
  std::vector<double> vals;
  vals.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) vals.push_back(-*it);
  vals.push_back(0.0);
  for (double d : pos) vals.push_back(d);
  return DifferenceSet{std::move(vals), tol, false};
}

MaxDifferenceCount max_distinct_differences(long long num_distinct_eigenvalues) {
  if (num_distinct_eigenvalues < 1)
    throw ValidationError("max_distinct_differences: need at least one distinct eigenvalue");
  const long long D = num_distinct_eigenvalues;
  return MaxDifferenceCount{D * (D - 1) + 1, D * (D - 1) / 2 + 1};
}

}  // namespace gtpb
