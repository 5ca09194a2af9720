#pragma once

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>

#include "gtpb/encoding.hpp"
#include "gtpb/genbounds.hpp"
#include "gtpb/gtp.hpp"
#include "gtpb/operators.hpp"
#include "gtpb/qsim.hpp"

namespace gtpb {

using nlohmann::json;

// Strict schema helpers: unknown keys are rejected.
void require_object(const json& j, const std::string& context);
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& context);
double require_number(const json& j, const std::string& key, const std::string& context);
long long require_integer(const json& j, const std::string& key, const std::string& context);

// {"pauli": "ZZ"} | {"diagonal": [..]} | {"matrix": [[[re,im],..],..], "integer_spectrum"?}
HermitianOperator parse_hamiltonian(const json& j);

// {"d": n, "coordinates": [{kind, N?, pauli?, T?, kappa?, hamiltonian?, hamiltonians?}, ...]}
EncodingStrategy parse_strategy(const json& j);

// {d, omega_plus: [[..]], a0, a: [], b: [], B_tilde}
GTPModel parse_model(const json& j);
json model_to_json(const GTPModel& model);

LossSpec parse_loss(const json& j);
json loss_to_json(const LossSpec& loss);

// {"strategy": {...}} or {"d": n, "omega_plus": [[..]]}
struct OmegaSource {
  Eigen::MatrixXd omega_plus;
  int d = 1;
  bool integral = false;
  double n_omega() const { return static_cast<double>(2 * omega_plus.rows() + 1); }
};
OmegaSource parse_omega_source(const json& j, double tol = kDedupTol,
                               long long cap = kDefaultOmegaCap);

// Circuit descriptor; random trainable layers are drawn deterministically from
// (seed, layer index).
CircuitSpec parse_circuit(const json& j, std::uint64_t seed);

json frequency_set_to_json(const FrequencySet& omega, long long vector_emit_limit);

}  // namespace gtpb
