#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gtpb/encoding.hpp"
#include "gtpb/gtp.hpp"
#include "gtpb/operators.hpp"
#include "gtpb/rng.hpp"

namespace gtpb {

// Explicit unitary on a qubit support.
struct TrainableLayer {
  std::vector<int> qubits;
  Eigen::MatrixXcd unitary;
};

// Single-qubit rotation exp(-i theta sigma / 2) with theta = theta[param_index].
struct RotationLayer {
  int qubit = 0;
  char axis = 'z';  // 'x', 'y' or 'z'
  int param_index = 0;
};

// Data-encoding gate exp(-i x^(coordinate) H) on a qubit support.
struct EncodingLayer {
  int coordinate = 1;  // 1-based data coordinate
  std::vector<int> qubits;
  HermitianOperator hamiltonian;
};

using CircuitLayer = std::variant<TrainableLayer, RotationLayer, EncodingLayer>;

struct CircuitSpec {
  int n_qubits = 1;
  int d = 1;
  std::vector<CircuitLayer> layers;
  HermitianOperator observable;
};

// Lifts U acting on `qubits` (in list order) to the full 2^n space. Qubit 0 is
// the leftmost tensor factor, matching make_pauli_string.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& U, const std::vector<int>& qubits, int n_qubits);

Eigen::MatrixXcd random_unitary(Eigen::Index dim, RngStream& rng);

void validate_circuit(const CircuitSpec& circuit);

EncodingStrategy derived_strategy(const CircuitSpec& circuit);

// Omega(D) of the circuit's encoding layers.
FrequencySet derived_omega(const CircuitSpec& circuit, double tol = kDedupTol);

// Circuit with theta fixed; encoding-gate eigendecompositions are cached so a
// grid of x evaluations only pays phase updates and matvecs.
class CompiledCircuit {
 public:
  CompiledCircuit(const CircuitSpec& circuit, const Eigen::VectorXd& theta);

  Eigen::VectorXcd statevector(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double expectation(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double observable_norm() const { return observable_norm_; }

 private:
  struct MatrixOp {
    Eigen::MatrixXcd U;
  };
  struct EncodingOp {
    Eigen::MatrixXcd V;           // embedded eigenvector unitary
    Eigen::VectorXd eigenvalues;  // per full-space basis index
    int coordinate;
  };
  std::vector<std::variant<MatrixOp, EncodingOp>> ops_;
  Eigen::MatrixXcd observable_;
  double observable_norm_ = 0.0;
  Eigen::Index dim_ = 1;
  int d_ = 1;
};

Eigen::VectorXcd statevector(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

double expectation(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                   const Eigen::Ref<const Eigen::VectorXd>& x);

struct FourierExtraction {
  ComplexCoefficients coefficients;  // aligned with omega.omega_plus
  Eigen::VectorXi grid_sizes;
  double max_offgrid_leakage = 0.0;
  double hermitian_residual = 0.0;
  double grid_sup = 0.0;  // max |f| over the sample grid
  FrequencySet omega;
};

// Minimal Nyquist grid 2 K_i + 1 per coordinate.
Eigen::VectorXi default_fourier_grid(const CircuitSpec& circuit, int oversample = 1);

// Multidimensional DFT of the expectation on the equispaced grid. Requires an
// integer-valued Omega(D) and grid_sizes[i] >= 2 K_i + 1.
FourierExtraction extract_fourier(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXi& grid_sizes);

struct ConjectureProbeConfig {
  int n_qubits = 1;
  int d = 1;
  std::vector<int> encodings_per_coordinate = {1};  // N^(i)
  std::string observable_pauli = "Z";
  std::string encoding_pauli = "Z";  // single-qubit encoding Hamiltonian
};

struct ConjectureViolation {
  int trial;
  double ratio;
};

struct ConjectureProbeReport {
  double max_ratio = 0.0;
  std::vector<ConjectureViolation> violations;  // ratios > 1 + 1e-6, recorded not asserted
  int n_trials = 0;
  std::uint64_t seed = 0;
  double observable_norm = 0.0;
};

// Samples random trainable unitaries interleaved with Pauli encodings and
// reports max_w |c_w| / ||M||_inf over trials.
ConjectureProbeReport conjecture_probe(const ConjectureProbeConfig& cfg, int n_trials,
                                       std::uint64_t seed);

}  // namespace gtpb
