#include "gtpb/qsim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <map>

#include "gtpb/errors.hpp"

namespace gtpb {

namespace {

constexpr double kUnitaryTol = 1e-10;

void check_support(const std::vector<int>& qubits, int n_qubits, const char* what) {
  if (qubits.empty()) throw ValidationError(std::string(what) + ": empty qubit support");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n_qubits)
      throw ValidationError(std::string(what) + ": qubit index out of range");
    for (std::size_t j = i + 1; j < qubits.size(); ++j)
      if (qubits[i] == qubits[j])
        throw ValidationError(std::string(what) + ": duplicate qubit in support");
  }
}

Eigen::Matrix2cd rotation_matrix(char axis, double theta) {
  using namespace std::complex_literals;
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd u;
  switch (axis) {
    case 'x': u << c, -1i * s, -1i * s, c; break;
    case 'y': u << c, -s, s, c; break;
    case 'z': u << std::exp(-0.5i * theta), 0, 0, std::exp(0.5i * theta); break;
    default: throw ValidationError("rotation layer: axis must be x, y or z");
  }
  return u;
}

}  // namespace

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& U, const std::vector<int>& qubits, int n_qubits) {
  const int k = static_cast<int>(qubits.size());
  check_support(qubits, n_qubits, "embed");
  const Eigen::Index local = Eigen::Index(1) << k;
  if (U.rows() != local || U.cols() != local)
    throw ValidationError("embed: operator dimension does not match its qubit support");
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    Eigen::Index s = 0;
    for (int q = 0; q < k; ++q)
      s = (s << 1) | ((j >> (n_qubits - 1 - qubits[q])) & 1);
    for (Eigen::Index sp = 0; sp < local; ++sp) {
      Eigen::Index jp = j;
      for (int q = 0; q < k; ++q) {
        const int pos = n_qubits - 1 - qubits[q];
        const Eigen::Index bit = (sp >> (k - 1 - q)) & 1;
        jp = (jp & ~(Eigen::Index(1) << pos)) | (bit << pos);
      }
      full(jp, j) = U(sp, s);
    }
  }
  return full;
}

Eigen::MatrixXcd random_unitary(Eigen::Index dim, RngStream& rng) {
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      z(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const std::complex<double> rii = r(i, i);
    q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : 1.0;
  }
  return q;
}

void validate_circuit(const CircuitSpec& circuit) {
  if (circuit.n_qubits < 1 || circuit.n_qubits > 14)
    throw ValidationError("circuit: n_qubits must be in 1..14");
  if (circuit.d < 1) throw ValidationError("circuit: d must be >= 1");
  const Eigen::Index dim = Eigen::Index(1) << circuit.n_qubits;
  if (circuit.observable.dim() != dim)
    throw ValidationError("circuit: observable dimension must be 2^n_qubits");
  for (const auto& layer : circuit.layers) {
    if (const auto* t = std::get_if<TrainableLayer>(&layer)) {
      check_support(t->qubits, circuit.n_qubits, "trainable layer");
      const Eigen::Index local = Eigen::Index(1) << t->qubits.size();
      if (t->unitary.rows() != local || t->unitary.cols() != local)
        throw ValidationError("trainable layer: unitary dimension does not match support");
      const double dev =
          (t->unitary.adjoint() * t->unitary - Eigen::MatrixXcd::Identity(local, local)).norm();
      if (dev > kUnitaryTol)
        throw ValidationError("trainable layer: matrix is not unitary, ||U*U - I||_F = " +
                              std::to_string(dev));
    } else if (const auto* r = std::get_if<RotationLayer>(&layer)) {
      if (r->qubit < 0 || r->qubit >= circuit.n_qubits)
        throw ValidationError("rotation layer: qubit index out of range");
      if (r->axis != 'x' && r->axis != 'y' && r->axis != 'z')
        throw ValidationError("rotation layer: axis must be x, y or z");
      if (r->param_index < 0) throw ValidationError("rotation layer: negative parameter index");
    } else if (const auto* e = std::get_if<EncodingLayer>(&layer)) {
      check_support(e->qubits, circuit.n_qubits, "encoding layer");
      if (e->coordinate < 1 || e->coordinate > circuit.d)
        throw ValidationError("encoding layer: coordinate out of range 1..d");
      const Eigen::Index local = Eigen::Index(1) << e->qubits.size();
      if (e->hamiltonian.dim() != local)
        throw ValidationError("encoding layer: Hamiltonian dimension does not match support");
    }
  }
}

EncodingStrategy derived_strategy(const CircuitSpec& circuit) {
  validate_circuit(circuit);
  EncodingStrategy s;
  s.d = circuit.d;
  s.per_coordinate.resize(circuit.d);
  for (const auto& layer : circuit.layers)
    if (const auto* e = std::get_if<EncodingLayer>(&layer))
      s.per_coordinate[e->coordinate - 1].push_back(e->hamiltonian);
  return s;
}

FrequencySet derived_omega(const CircuitSpec& circuit, double tol) {
  return omega_total(derived_strategy(circuit), tol);
}

CompiledCircuit::CompiledCircuit(const CircuitSpec& circuit, const Eigen::VectorXd& theta) {
  validate_circuit(circuit);
  dim_ = Eigen::Index(1) << circuit.n_qubits;
  d_ = circuit.d;
  observable_ = circuit.observable.entries;
  observable_norm_ = operator_norm_inf(circuit.observable);

  int max_param = -1;
  for (const auto& layer : circuit.layers)
    if (const auto* r = std::get_if<RotationLayer>(&layer))
      max_param = std::max(max_param, r->param_index);
  if (max_param >= theta.size())
    throw ValidationError("circuit: theta has " + std::to_string(theta.size()) +
                          " entries but a rotation uses parameter index " +
                          std::to_string(max_param));

  for (const auto& layer : circuit.layers) {
    if (const auto* t = std::get_if<TrainableLayer>(&layer)) {
      ops_.push_back(MatrixOp{embed(t->unitary, t->qubits, circuit.n_qubits)});
    } else if (const auto* r = std::get_if<RotationLayer>(&layer)) {
      ops_.push_back(MatrixOp{
          embed(rotation_matrix(r->axis, theta[r->param_index]), {r->qubit}, circuit.n_qubits)});
    } else if (const auto* e = std::get_if<EncodingLayer>(&layer)) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e->hamiltonian.entries);
      if (es.info() != Eigen::Success)
        throw NumericError("encoding layer: eigendecomposition failed");
      EncodingOp op;
      op.V = embed(es.eigenvectors(), e->qubits, circuit.n_qubits);
      op.coordinate = e->coordinate;
      op.eigenvalues.resize(dim_);
      const int k = static_cast<int>(e->qubits.size());
      for (Eigen::Index j = 0; j < dim_; ++j) {
        Eigen::Index s = 0;
        for (int q = 0; q < k; ++q)
          s = (s << 1) | ((j >> (circuit.n_qubits - 1 - e->qubits[q])) & 1);
        op.eigenvalues[j] = es.eigenvalues()[s];
      }
      ops_.push_back(std::move(op));
    }
  }
}

Eigen::VectorXcd CompiledCircuit::statevector(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != d_) throw ValidationError("statevector: x dimension mismatch");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim_);
  psi[0] = 1.0;
  Eigen::VectorXcd tmp(dim_);
  for (const auto& op : ops_) {
    if (const auto* m = std::get_if<MatrixOp>(&op)) {
      tmp.noalias() = m->U * psi;
      psi.swap(tmp);
    } else {
      const auto& enc = std::get<EncodingOp>(op);
      tmp.noalias() = enc.V.adjoint() * psi;
      const double xc = x[enc.coordinate - 1];
      for (Eigen::Index j = 0; j < dim_; ++j) {
        const double phase = -xc * enc.eigenvalues[j];
        tmp[j] *= std::complex<double>(std::cos(phase), std::sin(phase));
      }
      psi.noalias() = enc.V * tmp;
    }
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > 1e-10)
    throw NumericError("statevector: norm drift " + std::to_string(drift) + " exceeds 1e-10");
  return psi;
}

double CompiledCircuit::expectation(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXcd psi = statevector(x);
  const std::complex<double> value = psi.dot(observable_ * psi);
  if (std::abs(value.imag()) > 1e-10)
    throw NumericError("expectation: imaginary residue " + std::to_string(value.imag()));
  if (std::abs(value.real()) > observable_norm_ + 1e-9)
    throw NumericError("expectation: value exceeds the observable operator norm");
  return value.real();
}

Eigen::VectorXcd statevector(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
  return CompiledCircuit(circuit, theta).statevector(x);
}

double expectation(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                   const Eigen::Ref<const Eigen::VectorXd>& x) {
  return CompiledCircuit(circuit, theta).expectation(x);
}

Eigen::VectorXi default_fourier_grid(const CircuitSpec& circuit, int oversample) {
  if (oversample < 1) throw ValidationError("default_fourier_grid: oversample must be >= 1");
  const FrequencySet omega = derived_omega(circuit);
  Eigen::VectorXi sizes(omega.d);
  for (int i = 0; i < omega.d; ++i)
    sizes[i] = oversample * (2 * static_cast<int>(std::llround(omega.K_per_coordinate[i])) + 1);
  return sizes;
}

FourierExtraction extract_fourier(const CircuitSpec& circuit, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXi& grid_sizes) {
  const FrequencySet omega = derived_omega(circuit);
  if (!omega.integral)
    throw CapabilityError(
        "extract_fourier: Omega(D) is not integer-valued, no finite sampling grid is exact");
  if (grid_sizes.size() != omega.d)
    throw ValidationError("extract_fourier: grid_sizes length must equal d");
  for (int i = 0; i < omega.d; ++i) {
    const int nyquist = 2 * static_cast<int>(std::llround(omega.K_per_coordinate[i])) + 1;
    if (grid_sizes[i] < nyquist)
      throw ValidationError("extract_fourier: grid size " + std::to_string(grid_sizes[i]) +
                            " below Nyquist requirement " + std::to_string(nyquist) +
                            " on coordinate " + std::to_string(i + 1));
  }

  const CompiledCircuit compiled(circuit, theta);
  const Eigen::MatrixXd X = grid_points(grid_sizes);
  const Eigen::Index total = X.rows();
  Eigen::VectorXcd data(total);
  double sup = 0.0;
  for (Eigen::Index g = 0; g < total; ++g) {
    const double v = compiled.expectation(X.row(g).transpose());
    sup = std::max(sup, std::abs(v));
    data[g] = v;
  }

  // Separable DFT, kernel exp(+i k x_g) / G per axis, axis d-1 fastest.
  const int d = omega.d;
  std::vector<Eigen::Index> strides(d, 1);
  for (int axis = d - 2; axis >= 0; --axis) strides[axis] = strides[axis + 1] * grid_sizes[axis + 1];
  for (int axis = 0; axis < d; ++axis) {
    const Eigen::Index G = grid_sizes[axis];
    Eigen::MatrixXcd W(G, G);
    for (Eigen::Index k = 0; k < G; ++k)
      for (Eigen::Index g = 0; g < G; ++g) {
        const double phase = 2.0 * M_PI * static_cast<double>(k) * static_cast<double>(g) /
                             static_cast<double>(G);
        W(k, g) = std::complex<double>(std::cos(phase), std::sin(phase)) / static_cast<double>(G);
      }
    const Eigen::Index stride = strides[axis];
    Eigen::VectorXcd slice(G), transformed(G);
    for (Eigen::Index base = 0; base < total; ++base) {
      if ((base / stride) % G != 0) continue;  // slices start at axis coordinate 0
      for (Eigen::Index g = 0; g < G; ++g) slice[g] = data[base + g * stride];
      transformed.noalias() = W * slice;
      for (Eigen::Index g = 0; g < G; ++g) data[base + g * stride] = transformed[g];
    }
  }

  const auto keys = integer_keys(omega);
  std::map<std::vector<long long>, std::complex<double>> on_grid;
  double leakage = 0.0;
  std::vector<long long> freq(d);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      const Eigen::Index G = grid_sizes[i];
      const Eigen::Index k = rem % G;
      rem /= G;
      freq[i] = k <= (G - 1) / 2 ? k : k - G;
    }
    if (keys.count(freq)) on_grid[freq] = data[idx];
    else leakage = std::max(leakage, std::abs(data[idx]));
  }

  FourierExtraction out;
  out.grid_sizes = grid_sizes;
  out.max_offgrid_leakage = leakage;
  out.grid_sup = sup;
  out.omega = omega;

  const Eigen::Index n_plus = omega.omega_plus.rows();
  out.coefficients.omega_plus = omega.omega_plus;
  out.coefficients.c_plus.resize(n_plus);
  out.coefficients.c_minus.resize(n_plus);
  out.coefficients.c0 = on_grid.at(std::vector<long long>(d, 0));
  double herm = std::abs(out.coefficients.c0.imag());
  for (Eigen::Index r = 0; r < n_plus; ++r) {
    std::vector<long long> kp(d), km(d);
    for (int i = 0; i < d; ++i) {
      kp[i] = std::llround(omega.omega_plus(r, i));
      km[i] = -kp[i];
    }
    out.coefficients.c_plus[r] = on_grid.at(kp);
    out.coefficients.c_minus[r] = on_grid.at(km);
    herm = std::max(herm, std::abs(out.coefficients.c_minus[r] -
                                   std::conj(out.coefficients.c_plus[r])));
  }
  out.hermitian_residual = herm;
  return out;
}

ConjectureProbeReport conjecture_probe(const ConjectureProbeConfig& cfg, int n_trials,
                                       std::uint64_t seed) {
  if (n_trials < 1) throw ValidationError("conjecture_probe: need n_trials >= 1");
  if (cfg.d < 1 || static_cast<int>(cfg.encodings_per_coordinate.size()) != cfg.d)
    throw ValidationError("conjecture_probe: encodings_per_coordinate must have d entries");
  if (static_cast<int>(cfg.observable_pauli.size()) != cfg.n_qubits)
    throw ValidationError("conjecture_probe: observable label length must equal n_qubits");
  if (cfg.encoding_pauli.size() != 1)
    throw ValidationError("conjecture_probe: encoding label must be a single Pauli");

  const HermitianOperator observable = make_pauli_string(cfg.observable_pauli);
  const HermitianOperator encoder = make_pauli_string(cfg.encoding_pauli);
  const Eigen::Index dim = Eigen::Index(1) << cfg.n_qubits;

  ConjectureProbeReport rep;
  rep.n_trials = n_trials;
  rep.seed = seed;
  rep.observable_norm = operator_norm_inf(observable);

  std::vector<int> all_qubits(cfg.n_qubits);
  for (int q = 0; q < cfg.n_qubits; ++q) all_qubits[q] = q;

  for (int trial = 0; trial < n_trials; ++trial) {
    RngStream rng(seed, static_cast<std::uint64_t>(trial));
    CircuitSpec circuit;
    circuit.n_qubits = cfg.n_qubits;
    circuit.d = cfg.d;
    circuit.observable = observable;
    circuit.layers.push_back(TrainableLayer{all_qubits, random_unitary(dim, rng)});
    for (int i = 1; i <= cfg.d; ++i) {
      for (int j = 0; j < cfg.encodings_per_coordinate[i - 1]; ++j) {
        const int q = static_cast<int>(rng.uniform_int(cfg.n_qubits));
        circuit.layers.push_back(EncodingLayer{i, {q}, encoder});
        circuit.layers.push_back(TrainableLayer{all_qubits, random_unitary(dim, rng)});
      }
    }
    const FourierExtraction fx =
        extract_fourier(circuit, Eigen::VectorXd(), default_fourier_grid(circuit));
    double max_c = std::abs(fx.coefficients.c0);
    for (Eigen::Index r = 0; r < fx.coefficients.c_plus.size(); ++r) {
      max_c = std::max(max_c, std::abs(fx.coefficients.c_plus[r]));
      max_c = std::max(max_c, std::abs(fx.coefficients.c_minus[r]));
    }
    const double ratio = max_c / rep.observable_norm;
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > 1.0 + 1e-6) rep.violations.push_back(ConjectureViolation{trial, ratio});
  }
  return rep;
}

}  // namespace gtpb
