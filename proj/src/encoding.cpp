#include "gtpb/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "gtpb/errors.hpp"

namespace gtpb {

namespace {

using Key = std::vector<long long>;

long long grid_key(double v, bool integral, double tol) {
  return llround(integral ? v : v / tol);
}

double key_value(long long k, bool integral, double tol) {
  return integral ? static_cast<double>(k) : static_cast<double>(k) * tol;
}

void validate(const EncodingStrategy& s) {
  if (s.d < 1) throw ValidationError("encoding strategy: d must be >= 1");
  if (static_cast<int>(s.per_coordinate.size()) != s.d)
    throw ValidationError("encoding strategy: per_coordinate size must equal d");
}

// First nonzero coordinate positive.
bool lexicographically_positive(const Key& k) {
  for (long long v : k) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

FrequencySet from_key_set(int d, const std::set<Key>& keys, bool integral, double tol) {
  FrequencySet out;
  out.d = d;
  out.integral = integral;
  out.tolerance = integral ? 0.0 : tol;
  out.vectors.resize(static_cast<Eigen::Index>(keys.size()), d);
  Eigen::Index n_plus = 0;
  Eigen::Index row = 0;
  for (const Key& k : keys) {
    for (int i = 0; i < d; ++i) out.vectors(row, i) = key_value(k[i], integral, tol);
    if (lexicographically_positive(k)) ++n_plus;
    ++row;
  }
  out.omega_plus.resize(n_plus, d);
  row = 0;
  for (const Key& k : keys) {
    if (!lexicographically_positive(k)) continue;
    for (int i = 0; i < d; ++i) out.omega_plus(row, i) = key_value(k[i], integral, tol);
    ++row;
  }
  out.K_per_coordinate = out.vectors.rows() > 0
                             ? out.vectors.cwiseAbs().colwise().maxCoeff().transpose().eval()
                             : Eigen::VectorXd::Zero(d).eval();
  out.K = out.K_per_coordinate.sum();
  if (out.vectors.rows() != 2 * out.omega_plus.rows() + 1)
    throw NumericError("frequency set: negation symmetry broken during dedup");
  return out;
}

std::set<Key> key_set_of(const FrequencySet& f) {
  std::set<Key> keys;
  for (Eigen::Index r = 0; r < f.vectors.rows(); ++r) {
    Key k(f.d);
    for (int i = 0; i < f.d; ++i) k[i] = grid_key(f.vectors(r, i), f.integral, f.tolerance > 0 ? f.tolerance : 1.0);
    keys.insert(std::move(k));
  }
  return keys;
}

}  // namespace

FrequencySet zero_frequency_set(int d) {
  if (d < 1) throw ValidationError("zero_frequency_set: d must be >= 1");
  std::set<Key> keys;
  keys.insert(Key(d, 0));
  return from_key_set(d, keys, true, kDedupTol);
}

FrequencySet frequency_set_from_differences(const DifferenceSet& delta, int coordinate, int d) {
  if (coordinate < 1 || coordinate > d)
    throw ValidationError("frequency set: coordinate out of range 1..d");
  std::vector<Eigen::VectorXd> vecs;
  vecs.reserve(delta.values.size());
  for (double v : delta.values) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    x[coordinate - 1] = v;
    vecs.push_back(std::move(x));
  }
  const double tol = delta.integral ? kDedupTol : std::max(delta.tolerance, 1e-15);
  return make_frequency_set(d, vecs, delta.integral, tol);
}

FrequencySet omega_of_hamiltonian(const HermitianOperator& H, int coordinate, int d, double tol) {
  return frequency_set_from_differences(difference_set(eigenvalues(H), tol), coordinate, d);
}

FrequencySet make_frequency_set(int d, const std::vector<Eigen::VectorXd>& vectors, bool integral,
                                double tol) {
  if (d < 1) throw ValidationError("make_frequency_set: d must be >= 1");
  if (!integral && !(tol > 0)) throw ValidationError("make_frequency_set: tol must be positive");
  std::set<Key> keys;
  for (const auto& v : vectors) {
    if (v.size() != d) throw ValidationError("make_frequency_set: vector dimension mismatch");
    Key k(d);
    for (int i = 0; i < d; ++i) k[i] = grid_key(v[i], integral, tol);
    keys.insert(std::move(k));
  }
  if (keys.empty()) throw ValidationError("make_frequency_set: empty vector list");
  return from_key_set(d, keys, integral, tol);
}

FrequencySet minkowski_sum(const FrequencySet& a, const FrequencySet& b, double tol, long long cap) {
  if (a.d != b.d) throw ValidationError("minkowski_sum: dimension mismatch");
  const bool integral = a.integral && b.integral;
  std::set<Key> keys;
  Key k(a.d);
  for (Eigen::Index i = 0; i < a.vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.vectors.rows(); ++j) {
      for (int c = 0; c < a.d; ++c)
        k[c] = grid_key(a.vectors(i, c) + b.vectors(j, c), integral, tol);
      keys.insert(k);
      if (static_cast<long long>(keys.size()) > cap)
        throw ResourceError("minkowski_sum: cardinality cap " + std::to_string(cap) + " exceeded");
    }
  }
  return from_key_set(a.d, keys, integral, tol);
}

std::vector<double> coordinate_frequencies(const std::vector<DifferenceSet>& gates, double tol,
                                           long long cap) {
  bool integral = true;
  for (const auto& g : gates) integral = integral && g.integral;
  std::set<long long> keys;
  keys.insert(0);
  for (const auto& g : gates) {
    std::set<long long> next;
    for (long long base : keys) {
      const double base_v = key_value(base, integral, tol);
      for (double delta : g.values) {
        next.insert(grid_key(base_v + delta, integral, tol));
        if (static_cast<long long>(next.size()) > cap)
          throw ResourceError("coordinate_frequencies: cardinality cap exceeded");
      }
    }
    keys.swap(next);
  }
  std::vector<double> out;
  out.reserve(keys.size());
  for (long long k : keys) out.push_back(key_value(k, integral, tol));
  return out;
}

std::vector<long long> per_coordinate_cardinalities(const EncodingStrategy& strategy, double tol,
                                                    long long cap) {
  validate(strategy);
  std::vector<long long> cards;
  cards.reserve(strategy.d);
  for (int i = 1; i <= strategy.d; ++i) {
    std::vector<DifferenceSet> gates;
    for (const auto& h : strategy.per_coordinate[i - 1])
      gates.push_back(difference_set(eigenvalues(h), tol));
    try {
      cards.push_back(static_cast<long long>(coordinate_frequencies(gates, tol, cap).size()));
    } catch (const ResourceError&) {
      throw ResourceError("omega: cardinality cap " + std::to_string(cap) +
                          " exceeded at coordinate " + std::to_string(i));
    }
  }
  return cards;
}

FrequencySet omega_total(const EncodingStrategy& strategy, double tol, long long cap) {
  validate(strategy);
  const std::vector<long long> cards = per_coordinate_cardinalities(strategy, tol, cap);
  long long expected = 1;
  for (long long c : cards) {
    if (c > 0 && expected > cap / c + 1)
      throw ResourceError("omega_total: cardinality cap " + std::to_string(cap) + " exceeded");
    expected *= c;
  }
  if (expected > cap)
    throw ResourceError("omega_total: cardinality cap " + std::to_string(cap) + " exceeded");

  FrequencySet acc = zero_frequency_set(strategy.d);
  for (int i = 1; i <= strategy.d; ++i) {
    for (const auto& h : strategy.per_coordinate[i - 1]) {
      FrequencySet g = omega_of_hamiltonian(h, i, strategy.d, tol);
      try {
        acc = minkowski_sum(acc, g, tol, cap);
      } catch (const ResourceError&) {
        throw ResourceError("omega_total: cardinality cap " + std::to_string(cap) +
                            " exceeded at coordinate " + std::to_string(i));
      }
    }
  }
  if (acc.size() != expected) {
    std::ostringstream msg;
    msg << "omega_total: product law violated, |Omega| = " << acc.size()
        << " but product of per-coordinate cardinalities = " << expected;
    throw NumericError(msg.str());
  }
  return acc;
}

std::set<std::vector<long long>> integer_keys(const FrequencySet& omega) {
  if (!omega.integral) throw CapabilityError("integer_keys: frequency set is not integral");
  return key_set_of(omega);
}

unsigned long long weak_composition_count(long long N, long long T) {
  if (N < 0 || T < 1) throw ValidationError("weak_composition_count: need N >= 0, T >= 1");
  // binom(N + T - 1, N), exact via multiply-then-divide in 128 bits.
  const unsigned long long n = static_cast<unsigned long long>(N + T - 1);
  unsigned long long k = static_cast<unsigned long long>(std::min(N, T - 1));
  unsigned __int128 r = 1;
  for (unsigned long long i = 1; i <= k; ++i) {
    r = r * (n - k + i);
    r /= i;
    if (r > static_cast<unsigned __int128>(UINT64_MAX))
      throw NumericError("weak_composition_count: value exceeds 64 bits");
  }
  return static_cast<unsigned long long>(r);
}

long long bound_pauli(long long N_i) {
  if (N_i < 0) throw ValidationError("bound_pauli: N must be >= 0");
  return 2 * N_i + 1;
}

double bound_repeated(long long N_i, long long T) {
  if (N_i < 1 || T < 1) throw ValidationError("bound_repeated: need N >= 1, T >= 1");
  const double wc = static_cast<double>(weak_composition_count(N_i, T));
  if ((2 * N_i) % T == 0) {
    const long long base = 2 * N_i / T + 1;
    unsigned __int128 p = 1;
    bool fits = true;
    for (long long t = 0; t < T && fits; ++t) {
      p *= static_cast<unsigned long long>(base);
      fits = p <= (static_cast<unsigned __int128>(1) << 100);
    }
    if (fits) return wc * static_cast<double>(p);
  }
  return wc * std::pow(2.0 * static_cast<double>(N_i) / static_cast<double>(T) + 1.0,
                       static_cast<double>(T));
}

double bound_klocal_worstcase(long long N_i, int kappa, bool corrected) {
  if (N_i < 0 || kappa < 1) throw ValidationError("bound_klocal_worstcase: need N >= 0, kappa >= 1");
  if (kappa > 30) throw ValidationError("bound_klocal_worstcase: kappa too large");
  const double D = std::pow(2.0, kappa);
  const double base = corrected ? D * (D - 1) + 1 : D * (D - 1) / 2 + 1;
  return std::pow(base, static_cast<double>(N_i));
}

double bound_total_amgm(const std::vector<double>& per_coordinate_bounds, int d) {
  if (d < 1 || static_cast<int>(per_coordinate_bounds.size()) != d)
    throw ValidationError("bound_total_amgm: need exactly d per-coordinate bounds");
  double sum = 0;
  for (double b : per_coordinate_bounds) {
    if (b < 1) throw ValidationError("bound_total_amgm: bounds must be >= 1");
    sum += b;
  }
  return std::pow(sum / d, d);
}

double scaling_exponent_fit(const StrategyFamily& family, const std::vector<int>& N_values,
                            double tol, long long cap) {
  if (N_values.size() < 3)
    throw ValidationError("scaling_exponent_fit: need at least 3 values of N");
  Eigen::VectorXd logN(N_values.size()), logC(N_values.size());
  for (std::size_t i = 0; i < N_values.size(); ++i) {
    if (N_values[i] < 1) throw ValidationError("scaling_exponent_fit: N values must be >= 1");
    const auto gates = family(N_values[i]);
    const auto freqs = coordinate_frequencies(gates, tol, cap);
    logN[static_cast<Eigen::Index>(i)] = std::log(static_cast<double>(N_values[i]));
    logC[static_cast<Eigen::Index>(i)] = std::log(static_cast<double>(freqs.size()));
  }
  const double nx = logN.mean();
  const double ny = logC.mean();
  const double sxx = (logN.array() - nx).square().sum();
  if (sxx <= 0) throw ValidationError("scaling_exponent_fit: N values must not all coincide");
  return ((logN.array() - nx) * (logC.array() - ny)).sum() / sxx;
}

}  // namespace gtpb
