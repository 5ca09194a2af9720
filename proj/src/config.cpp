#include "gtpb/config.hpp"

#include <set>

#include "gtpb/errors.hpp"
#include "gtpb/rng.hpp"

namespace gtpb {

void require_object(const json& j, const std::string& context) {
  if (!j.is_object()) throw ValidationError(context + ": expected a JSON object");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  require_object(j, context);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!ok.count(item.key()))
      throw ValidationError(context + ": unknown key '" + item.key() + "'");
}

double require_number(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(context + ": missing or non-numeric '" + key + "'");
  return j.at(key).get<double>();
}

long long require_integer(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw ValidationError(context + ": missing or non-integer '" + key + "'");
  return j.at(key).get<long long>();
}

namespace {

Eigen::VectorXd parse_real_vector(const json& j, const std::string& context) {
  if (!j.is_array()) throw ValidationError(context + ": expected an array of numbers");
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw ValidationError(context + ": expected an array of numbers");
    v[i++] = e.get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_vector_rows(const json& j, const std::string& context) {
  if (!j.is_array()) throw ValidationError(context + ": expected an array of vectors");
  Eigen::MatrixXd rows;
  Eigen::Index r = 0;
  for (const auto& row : j) {
    const Eigen::VectorXd v = parse_real_vector(row, context);
    if (r == 0) rows.resize(static_cast<Eigen::Index>(j.size()), v.size());
    else if (v.size() != rows.cols())
      throw ValidationError(context + ": ragged vector list");
    rows.row(r++) = v.transpose();
  }
  return rows;
}

Eigen::MatrixXcd parse_complex_matrix(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) throw ValidationError(context + ": expected matrix rows");
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ValidationError(context + ": matrix must be square, rows of [re, im] pairs");
    Eigen::Index c = 0;
    for (const auto& cell : row) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw ValidationError(context + ": entries must be [re, im] pairs");
      m(r, c++) = std::complex<double>(cell[0].get<double>(), cell[1].get<double>());
    }
    ++r;
  }
  return m;
}

// Hamiltonian with spectrum {0, 1, ..., T}: exactly 2T + 1 frequencies.
HermitianOperator canonical_T_hamiltonian(long long T) {
  Eigen::VectorXd spec(T + 1);
  for (long long t = 0; t <= T; ++t) spec[t] = static_cast<double>(t);
  return make_diagonal(spec);
}

// Geometric spectrum {3^0, ..., 3^{D-1}} saturating the difference-count bound.
HermitianOperator canonical_klocal_hamiltonian(int kappa, long long scale) {
  const long long D = 1LL << kappa;
  Eigen::VectorXd spec(D);
  long long p = 1;
  for (long long j = 0; j < D; ++j) {
    spec[j] = static_cast<double>(p * scale);
    p *= 3;
  }
  return make_diagonal(spec);
}

}  // namespace

HermitianOperator parse_hamiltonian(const json& j) {
  check_keys(j, {"pauli", "diagonal", "matrix", "integer_spectrum"}, "hamiltonian");
  const int forms = j.contains("pauli") + j.contains("diagonal") + j.contains("matrix");
  if (forms != 1)
    throw ValidationError("hamiltonian: give exactly one of 'pauli', 'diagonal', 'matrix'");
  if (j.contains("pauli")) {
    if (!j.at("pauli").is_string()) throw ValidationError("hamiltonian: 'pauli' must be a string");
    return make_pauli_string(j.at("pauli").get<std::string>());
  }
  if (j.contains("diagonal"))
    return make_diagonal(parse_real_vector(j.at("diagonal"), "hamiltonian diagonal"));
  const bool integral = j.value("integer_spectrum", false);
  return make_hermitian(parse_complex_matrix(j.at("matrix"), "hamiltonian matrix"), kHermitianTol,
                        integral);
}

EncodingStrategy parse_strategy(const json& j) {
  check_keys(j, {"d", "coordinates"}, "strategy");
  EncodingStrategy s;
  s.d = static_cast<int>(require_integer(j, "d", "strategy"));
  if (s.d < 1) throw ValidationError("strategy: d must be >= 1");
  if (!j.contains("coordinates") || !j.at("coordinates").is_array() ||
      static_cast<int>(j.at("coordinates").size()) != s.d)
    throw ValidationError("strategy: 'coordinates' must list exactly d descriptors");
  for (const auto& cj : j.at("coordinates")) {
    check_keys(cj, {"kind", "N", "pauli", "T", "kappa", "hamiltonian", "hamiltonians"},
               "strategy coordinate");
    if (!cj.contains("kind") || !cj.at("kind").is_string())
      throw ValidationError("strategy coordinate: missing 'kind'");
    const std::string kind = cj.at("kind").get<std::string>();
    std::vector<HermitianOperator> gates;
    if (kind == "pauli_repeat") {
      const long long N = require_integer(cj, "N", "pauli_repeat");
      if (N < 0) throw ValidationError("pauli_repeat: N must be >= 0");
      const std::string label = cj.value("pauli", std::string("Z"));
      for (long long i = 0; i < N; ++i) gates.push_back(make_pauli_string(label));
    } else if (kind == "same_hamiltonian_repeat") {
      const long long N = require_integer(cj, "N", "same_hamiltonian_repeat");
      if (N < 0) throw ValidationError("same_hamiltonian_repeat: N must be >= 0");
      HermitianOperator h = cj.contains("hamiltonian")
                                ? parse_hamiltonian(cj.at("hamiltonian"))
                                : canonical_T_hamiltonian(
                                      require_integer(cj, "T", "same_hamiltonian_repeat"));
      for (long long i = 0; i < N; ++i) gates.push_back(h);
    } else if (kind == "klocal_list") {
      if (cj.contains("hamiltonians")) {
        for (const auto& hj : cj.at("hamiltonians")) gates.push_back(parse_hamiltonian(hj));
      } else {
        const long long N = require_integer(cj, "N", "klocal_list");
        const int kappa = static_cast<int>(require_integer(cj, "kappa", "klocal_list"));
        if (kappa < 1 || kappa > 4)
          throw ValidationError("klocal_list: canonical family needs kappa in 1..4");
        long long scale = 1;
        const long long step = llround(std::pow(3.0, (1LL << kappa) - 1));
        for (long long i = 0; i < N; ++i) {
          gates.push_back(canonical_klocal_hamiltonian(kappa, scale));
          scale *= step;
        }
      }
    } else if (kind == "explicit") {
      if (!cj.contains("hamiltonians") || !cj.at("hamiltonians").is_array())
        throw ValidationError("explicit coordinate: missing 'hamiltonians' list");
      for (const auto& hj : cj.at("hamiltonians")) gates.push_back(parse_hamiltonian(hj));
    } else {
      throw ValidationError("strategy coordinate: unknown kind '" + kind + "'");
    }
    s.per_coordinate.push_back(std::move(gates));
  }
  return s;
}

GTPModel parse_model(const json& j) {
  check_keys(j, {"d", "omega_plus", "a0", "a", "b", "B_tilde"}, "model");
  const int d = static_cast<int>(require_integer(j, "d", "model"));
  Eigen::MatrixXd omega_plus(0, d);
  if (!j.at("omega_plus").empty()) omega_plus = parse_vector_rows(j.at("omega_plus"), "model omega_plus");
  if (omega_plus.cols() != d) throw ValidationError("model: omega_plus width must equal d");
  return make_gtp_model(omega_plus, require_number(j, "a0", "model"),
                        parse_real_vector(j.at("a"), "model a"),
                        parse_real_vector(j.at("b"), "model b"),
                        require_number(j, "B_tilde", "model"));
}

json model_to_json(const GTPModel& model) {
  json j;
  j["d"] = model.d();
  json rows = json::array();
  for (Eigen::Index r = 0; r < model.omega_plus.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < model.d(); ++c) row.push_back(model.omega_plus(r, c));
    rows.push_back(std::move(row));
  }
  j["omega_plus"] = std::move(rows);
  j["a0"] = model.a0;
  j["a"] = std::vector<double>(model.a.begin(), model.a.end());
  j["b"] = std::vector<double>(model.b.begin(), model.b.end());
  j["B_tilde"] = model.B_tilde;
  return j;
}

LossSpec parse_loss(const json& j) {
  check_keys(j, {"kind", "c"}, "loss");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError("loss: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  const double c = require_number(j, "c", "loss");
  if (kind == "clipped_absolute") return clipped_absolute_loss(c);
  if (kind == "clipped_squared") return clipped_squared_loss(c);
  throw ValidationError("loss: unknown kind '" + kind + "'");
}

json loss_to_json(const LossSpec& loss) {
  return json{{"kind", loss.kind == LossKind::ClippedAbsolute ? "clipped_absolute"
                                                              : "clipped_squared"},
              {"c", loss.c},
              {"L", loss.L}};
}

OmegaSource parse_omega_source(const json& j, double tol, long long cap) {
  check_keys(j, {"strategy", "d", "omega_plus"}, "omega source");
  OmegaSource src;
  if (j.contains("strategy")) {
    const FrequencySet omega = omega_total(parse_strategy(j.at("strategy")), tol, cap);
    src.omega_plus = omega.omega_plus;
    src.d = omega.d;
    src.integral = omega.integral;
    return src;
  }
  if (!j.contains("d") || !j.contains("omega_plus"))
    throw ValidationError("omega source: give 'strategy' or both 'd' and 'omega_plus'");
  src.d = static_cast<int>(require_integer(j, "d", "omega source"));
  src.omega_plus = j.at("omega_plus").empty() ? Eigen::MatrixXd(0, src.d)
                                              : parse_vector_rows(j.at("omega_plus"), "omega_plus");
  if (src.omega_plus.cols() != src.d)
    throw ValidationError("omega source: omega_plus width must equal d");
  src.integral = true;
  for (Eigen::Index r = 0; r < src.omega_plus.rows() && src.integral; ++r)
    for (int c = 0; c < src.d; ++c)
      if (src.omega_plus(r, c) != std::nearbyint(src.omega_plus(r, c))) src.integral = false;
  return src;
}

CircuitSpec parse_circuit(const json& j, std::uint64_t seed) {
  check_keys(j, {"n_qubits", "d", "layers", "observable"}, "circuit");
  CircuitSpec c;
  c.n_qubits = static_cast<int>(require_integer(j, "n_qubits", "circuit"));
  c.d = static_cast<int>(require_integer(j, "d", "circuit"));
  if (!j.contains("observable")) throw ValidationError("circuit: missing 'observable'");
  c.observable = parse_hamiltonian(j.at("observable"));
  if (!j.contains("layers") || !j.at("layers").is_array())
    throw ValidationError("circuit: missing 'layers' array");
  std::uint64_t layer_index = 0;
  for (const auto& lj : j.at("layers")) {
    check_keys(lj, {"type", "qubits", "qubit", "matrix", "random", "axis", "param", "coordinate",
                    "pauli", "hamiltonian"},
               "circuit layer");
    if (!lj.contains("type") || !lj.at("type").is_string())
      throw ValidationError("circuit layer: missing 'type'");
    const std::string type = lj.at("type").get<std::string>();
    if (type == "trainable") {
      TrainableLayer t;
      if (!lj.contains("qubits")) throw ValidationError("trainable layer: missing 'qubits'");
      for (const auto& q : lj.at("qubits")) t.qubits.push_back(q.get<int>());
      if (lj.value("random", false)) {
        RngStream rng(seed, 0x7261'6e64'0000'0000ull + layer_index);
        t.unitary = random_unitary(Eigen::Index(1) << t.qubits.size(), rng);
      } else if (lj.contains("matrix")) {
        t.unitary = parse_complex_matrix(lj.at("matrix"), "trainable layer matrix");
      } else {
        throw ValidationError("trainable layer: give 'matrix' or 'random': true");
      }
      c.layers.push_back(std::move(t));
    } else if (type == "rotation") {
      RotationLayer r;
      r.qubit = static_cast<int>(require_integer(lj, "qubit", "rotation layer"));
      if (!lj.contains("axis") || !lj.at("axis").is_string() ||
          lj.at("axis").get<std::string>().size() != 1)
        throw ValidationError("rotation layer: 'axis' must be one of x, y, z");
      r.axis = lj.at("axis").get<std::string>()[0];
      r.param_index = static_cast<int>(require_integer(lj, "param", "rotation layer"));
      c.layers.push_back(r);
    } else if (type == "encoding") {
      EncodingLayer e;
      e.coordinate = static_cast<int>(require_integer(lj, "coordinate", "encoding layer"));
      if (!lj.contains("qubits")) throw ValidationError("encoding layer: missing 'qubits'");
      for (const auto& q : lj.at("qubits")) e.qubits.push_back(q.get<int>());
      if (lj.contains("pauli")) {
        e.hamiltonian = make_pauli_string(lj.at("pauli").get<std::string>());
      } else if (lj.contains("hamiltonian")) {
        e.hamiltonian = parse_hamiltonian(lj.at("hamiltonian"));
      } else {
        throw ValidationError("encoding layer: give 'pauli' or 'hamiltonian'");
      }
      c.layers.push_back(std::move(e));
    } else {
      throw ValidationError("circuit layer: unknown type '" + type + "'");
    }
    ++layer_index;
  }
  validate_circuit(c);
  return c;
}

json frequency_set_to_json(const FrequencySet& omega, long long vector_emit_limit) {
  json j;
  j["d"] = omega.d;
  j["integral"] = omega.integral;
  j["tolerance"] = omega.tolerance;
  j["omega_cardinality"] = omega.size();
  j["K"] = omega.K;
  j["K_per_coordinate"] =
      std::vector<double>(omega.K_per_coordinate.begin(), omega.K_per_coordinate.end());
  if (omega.size() <= vector_emit_limit) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < omega.vectors.rows(); ++r) {
      json row = json::array();
      for (int c = 0; c < omega.d; ++c) row.push_back(omega.vectors(r, c));
      rows.push_back(std::move(row));
    }
    j["vectors"] = std::move(rows);
  } else {
    j["vectors_omitted"] = true;
  }
  return j;
}

}  // namespace gtpb
