#include "gtpb/genbounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtpb/encoding.hpp"
#include "gtpb/errors.hpp"

namespace gtpb {

namespace {

void check_confidence(double delta) {
  if (!(delta > 0) || !(delta < 1))
    throw ValidationError("confidence delta must lie in (0, 1)");
}

double confidence_term(double c, long long m, double delta) {
  return 3.0 * c * std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(m)));
}

// N split over d coordinates as evenly as possible, larger shares first.
std::vector<int> even_split(int N, int d) {
  std::vector<int> out(d, N / d);
  for (int i = 0; i < N % d; ++i) ++out[i];
  return out;
}

DifferenceSet difference_set_from_positive(const std::vector<long long>& positive) {
  std::vector<long long> pos = positive;
  std::sort(pos.begin(), pos.end());
  std::vector<double> vals;
  vals.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) vals.push_back(-static_cast<double>(*it));
  vals.push_back(0.0);
  for (long long p : pos) vals.push_back(static_cast<double>(p));
  return DifferenceSet{std::move(vals), 0.0, true};
}

// Positive differences of the geometric spectrum {3^0, ..., 3^{D-1}}.
std::vector<long long> geometric_spectrum_differences(long long D) {
  std::vector<long long> pow3(D);
  pow3[0] = 1;
  for (long long j = 1; j < D; ++j) pow3[j] = 3 * pow3[j - 1];
  std::vector<long long> pos;
  for (long long j = 0; j < D; ++j)
    for (long long k = 0; k < j; ++k) pos.push_back(pow3[j] - pow3[k]);
  return pos;
}

double rademacher_complexity_bound(double K, double B_tilde, double n_omega, int d, long long m) {
  if (n_omega >= 2) return rademacher_bound_min(K, B_tilde, n_omega, d, m);
  return rademacher_bound_v1(K, B_tilde, (n_omega - 1) / 2.0, d, m);
}

}  // namespace

LossSpec clipped_absolute_loss(double c) {
  if (!(c > 0)) throw ValidationError("loss: bound c must be positive");
  return LossSpec{LossKind::ClippedAbsolute, c, 1.0};
}

LossSpec clipped_squared_loss(double c) {
  if (!(c > 0)) throw ValidationError("loss: bound c must be positive");
  return LossSpec{LossKind::ClippedSquared, c, 2.0 * c};
}

double loss_value(const LossSpec& loss, double y, double z) {
  switch (loss.kind) {
    case LossKind::ClippedAbsolute: return std::min(std::abs(y - z), loss.c);
    case LossKind::ClippedSquared: return std::min((y - z) * (y - z), loss.c);
  }
  throw ValidationError("loss_value: unknown loss kind");
}

double gen_gap_bound_rademacher(double rad, const LossSpec& loss, long long m, double delta) {
  if (rad < 0 || m < 1) throw ValidationError("gen_gap_bound_rademacher: invalid arguments");
  check_confidence(delta);
  return 2.0 * loss.L * rad + confidence_term(loss.c, m, delta);
}

double gen_gap_bound_covering(double B, double B_tilde, double n_omega, const LossSpec& loss,
                              long long m, double delta, const QuadratureConfig& quad) {
  if (m < 1) throw ValidationError("gen_gap_bound_covering: need m >= 1");
  check_confidence(delta);
  return 2.0 * loss.L * dudley_rademacher_bound(B, B_tilde, n_omega, m, quad) +
         confidence_term(loss.c, m, delta);
}

double gen_gap_bound(BoundRoute route, const GapBoundParams& params, long long m, double delta) {
  switch (route) {
    case BoundRoute::Rademacher:
      return gen_gap_bound_rademacher(
          rademacher_complexity_bound(params.K, params.B_tilde, params.n_omega, params.d, m),
          params.loss, m, delta);
    case BoundRoute::Covering:
      return gen_gap_bound_covering(params.B, params.B_tilde, params.n_omega, params.loss, m,
                                    delta, params.quad);
  }
  throw ValidationError("gen_gap_bound: unknown route");
}

long long sample_size_for_gap(double epsilon, double delta, const GapBoundParams& params,
                              BoundRoute route, long long m_cap) {
  if (!(epsilon > 0) || !(epsilon < 1)) throw ValidationError("sample_size_for_gap: epsilon in (0,1)");
  check_confidence(delta);
  const auto g = [&](long long m) { return gen_gap_bound(route, params, m, delta); };

  if (g(1) <= epsilon) return 1;
  long long lo = 1, hi = 2;
  while (g(hi) > epsilon) {
    lo = hi;
    if (hi > m_cap / 2)
      throw ResourceError("sample_size_for_gap: required m exceeds cap " + std::to_string(m_cap));
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    if (g(mid) <= epsilon) hi = mid;
    else lo = mid;
  }
  if (!(g(hi) <= epsilon) || !(g(hi - 1) > epsilon))
    throw NumericError("sample_size_for_gap: bound is not monotone in m (contract violation)");
  return hi;
}

BoundReport encoding_bound_report(const EncodingBoundInputs& in) {
  if (in.N < 0 || in.d < 1) throw ValidationError("encoding_bound_report: need N >= 0, d >= 1");
  if (!(in.M_norm > 0)) throw ValidationError("encoding_bound_report: M_norm must be positive");
  check_confidence(in.delta);
  if (in.m < 1) throw ValidationError("encoding_bound_report: need m >= 1");
  if (in.kind == StrategyKind::SameT && in.T < 1)
    throw ValidationError("encoding_bound_report: SameT needs T >= 1");
  if ((in.kind == StrategyKind::SameKLocal || in.kind == StrategyKind::DiffKLocal) && in.kappa < 1)
    throw ValidationError("encoding_bound_report: kappa must be >= 1");

  BoundReport rep;
  rep.B = in.M_norm;
  rep.B_tilde = btilde_for_integer_spectrum(in.M_norm);  // canonical spectra are integer
  rep.d = in.d;
  rep.m = in.m;
  rep.delta = in.delta;
  rep.loss = in.loss;

  const std::vector<int> split = even_split(in.N, in.d);
  std::vector<double> coord_bounds(in.d, 1.0);
  double K = 0;

  // Per-gate positive difference set of the canonical Hamiltonian of the kind.
  std::vector<long long> base_pos;
  long long T_used = 0;
  switch (in.kind) {
    case StrategyKind::Pauli:
      rep.strategy = "pauli N=" + std::to_string(in.N);
      base_pos = {2};
      T_used = 1;
      break;
    case StrategyKind::SameT: {
      rep.strategy = "same_T N=" + std::to_string(in.N) + " T=" + std::to_string(in.T);
      for (long long t = 1; t <= in.T; ++t) base_pos.push_back(t);
      T_used = in.T;
      rep.notes.push_back("canonical spectrum {0..T} realizes 2T+1 frequencies per gate");
      break;
    }
    case StrategyKind::SameKLocal: {
      rep.strategy = "same_klocal N=" + std::to_string(in.N) + " kappa=" + std::to_string(in.kappa);
      if (in.kappa > 4) throw ResourceError("encoding_bound_report: canonical spectrum for kappa > 4 is not enumerable");
      const long long D = 1LL << in.kappa;
      base_pos = geometric_spectrum_differences(D);
      T_used = D * (D - 1) / 2;
      rep.notes.push_back("T = D(D-1)/2 from the signed count |Delta| <= D(D-1)+1 (the unsigned-pair count misses the +/- doubling)");
      break;
    }
    case StrategyKind::DiffKLocal: {
      rep.strategy = "diff_klocal N=" + std::to_string(in.N) + " kappa=" + std::to_string(in.kappa);
      rep.exponential_regime = true;
      rep.notes.push_back("worst-case different-Hamiltonian family: |Omega^(i)| bound grows as O(2^{2 kappa N^(i)})");
      break;
    }
  }

  if (in.kind == StrategyKind::DiffKLocal) {
    if (in.kappa > 4) throw ResourceError("encoding_bound_report: canonical spectrum for kappa > 4 is not enumerable");
    const long long D = 1LL << in.kappa;
    const std::vector<long long> base = geometric_spectrum_differences(D);
    const double delta_max = std::pow(3.0, static_cast<double>(D - 1)) - 1.0;
    const double scale_step = delta_max + 1.0;  // max(spec) of the previous gate
    for (int i = 0; i < in.d; ++i) {
      const int Ni = split[i];
      coord_bounds[i] = bound_klocal_worstcase(Ni, in.kappa, true);
      // K_i = sum_j delta_max * scale^j = scale^{N_i} - 1 for the escalating family
      K += std::pow(scale_step, Ni) - 1.0;
    }
    rep.notes.push_back("unsigned-pair per-gate bound (D(D-1)/2+1)^N = " +
                        std::to_string(bound_klocal_worstcase(in.N, in.kappa, false)));
    if (in.use_exact_omega) {
      double exact_total = 1;
      double exact_K_sum = 0;
      for (int i = 0; i < in.d; ++i) {
        std::vector<DifferenceSet> gates;
        long long scale = 1;
        for (int j = 0; j < split[i]; ++j) {
          std::vector<long long> pos;
          for (long long p : base) pos.push_back(p * scale);
          gates.push_back(difference_set_from_positive(pos));
          scale *= static_cast<long long>(scale_step);
        }
        const auto freqs = coordinate_frequencies(gates, kDedupTol, in.cap);
        exact_total *= static_cast<double>(freqs.size());
        double ki = 0;
        for (double f : freqs) ki = std::max(ki, std::abs(f));
        exact_K_sum += ki;
      }
      rep.n_omega = exact_total;
      rep.omega_is_exact = true;
      K = exact_K_sum;
    }
  } else {
    const DifferenceSet base_delta = difference_set_from_positive(base_pos);
    const double delta_max = base_delta.values.back();
    for (int i = 0; i < in.d; ++i) {
      const int Ni = split[i];
      if (in.kind == StrategyKind::Pauli) coord_bounds[i] = static_cast<double>(bound_pauli(Ni));
      else coord_bounds[i] = Ni >= 1 ? bound_repeated(Ni, T_used) : 1.0;
      K += delta_max * Ni;
    }
    if (in.kind == StrategyKind::Pauli) {
      // The Pauli closed form is exact, so the product is the exact |Omega|.
      double exact = 1;
      for (int i = 0; i < in.d; ++i) exact *= static_cast<double>(bound_pauli(split[i]));
      rep.n_omega = exact;
      rep.omega_is_exact = true;
    } else if (in.use_exact_omega) {
      double exact_total = 1;
      for (int i = 0; i < in.d; ++i) {
        std::vector<DifferenceSet> gates(split[i], base_delta);
        exact_total *= static_cast<double>(coordinate_frequencies(gates, kDedupTol, in.cap).size());
      }
      rep.n_omega = exact_total;
      rep.omega_is_exact = true;
    }
  }

  if (!rep.omega_is_exact) {
    rep.n_omega = bound_total_amgm(coord_bounds, in.d);
    rep.notes.push_back("|Omega| upper bound via per-coordinate closed forms + AM-GM aggregation");
  }
  rep.K = K;

  const double rad = rademacher_complexity_bound(rep.K, rep.B_tilde, rep.n_omega, in.d, in.m);
  rep.rademacher_route = gen_gap_bound_rademacher(rad, in.loss, in.m, in.delta);
  rep.covering_route =
      gen_gap_bound_covering(rep.B, rep.B_tilde, rep.n_omega, in.loss, in.m, in.delta);
  rep.chosen = std::min(rep.rademacher_route, rep.covering_route);
  rep.notes.push_back("explicit constants are proof-derived (not dictated by the O-form statements)");
  return rep;
}

BoundReport strategy_bound_report(const EncodingStrategy& strategy, double M_norm,
                                  const LossSpec& loss, long long m, double delta,
                                  bool conjecture1_opt_in, double tol, long long cap) {
  if (!(M_norm > 0)) throw ValidationError("strategy_bound_report: M_norm must be positive");
  check_confidence(delta);
  if (m < 1) throw ValidationError("strategy_bound_report: need m >= 1");

  const FrequencySet omega = omega_total(strategy, tol, cap);
  BoundReport rep;
  rep.strategy = "explicit d=" + std::to_string(strategy.d) +
                 " N=" + std::to_string(strategy.total_gates());
  rep.B = M_norm;
  rep.d = strategy.d;
  rep.m = m;
  rep.delta = delta;
  rep.loss = loss;
  rep.n_omega = static_cast<double>(omega.size());
  rep.omega_is_exact = true;
  rep.K = omega.K;
  if (omega.integral) {
    rep.B_tilde = btilde_for_integer_spectrum(M_norm);
  } else if (conjecture1_opt_in) {
    rep.B_tilde = btilde_conjectured_general(M_norm, omega.size());
    rep.notes.push_back(
        "non-integer spectrum: B_tilde = 2 sqrt(|Omega|) B rests on the unproven "
        "coefficient-sup conjecture (opted in)");
  } else {
    throw CapabilityError(
        "strategy_bound_report: B_tilde = 2B is only justified for integer frequency spectra; "
        "a non-integer spectrum needs the conjectured B_tilde = 2 sqrt(|Omega|) B, which "
        "requires explicit opt-in");
  }
  const double rad = rademacher_complexity_bound(rep.K, rep.B_tilde, rep.n_omega, rep.d, m);
  rep.rademacher_route = gen_gap_bound_rademacher(rad, loss, m, delta);
  rep.covering_route = gen_gap_bound_covering(rep.B, rep.B_tilde, rep.n_omega, loss, m, delta);
  rep.chosen = std::min(rep.rademacher_route, rep.covering_route);
  return rep;
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["strategy"] = r.strategy;
  j["n_omega"] = r.n_omega;
  j["omega_is_exact"] = r.omega_is_exact;
  j["B"] = r.B;
  j["B_tilde"] = r.B_tilde;
  j["K"] = r.K;
  j["d"] = r.d;
  j["m"] = r.m;
  j["delta"] = r.delta;
  j["loss"] = {{"kind", r.loss.kind == LossKind::ClippedAbsolute ? "clipped_absolute"
                                                                 : "clipped_squared"},
               {"c", r.loss.c},
               {"L", r.loss.L}};
  j["rademacher_route"] = r.rademacher_route;
  j["covering_route"] = r.covering_route;
  j["chosen"] = r.chosen;
  j["exponential_regime"] = r.exponential_regime;
  j["notes"] = r.notes;
  return j;
}

std::string bound_report_csv_header() {
  return "strategy,n_omega,omega_is_exact,B,B_tilde,K,d,m,delta,loss_c,loss_L,"
         "rademacher_route,covering_route,chosen,exponential_regime";
}

std::string bound_report_csv_row(const BoundReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << r.strategy << ',' << r.n_omega << ',' << (r.omega_is_exact ? 1 : 0) << ',' << r.B << ','
     << r.B_tilde << ',' << r.K << ',' << r.d << ',' << r.m << ',' << r.delta << ',' << r.loss.c
     << ',' << r.loss.L << ',' << r.rademacher_route << ',' << r.covering_route << ',' << r.chosen
     << ',' << (r.exponential_regime ? 1 : 0);
  return os.str();
}

std::pair<std::string, double> union_bound_combine(
    const std::vector<std::pair<std::string, double>>& bounds) {
  if (bounds.empty()) throw ValidationError("union_bound_combine: empty bound list");
  std::size_t best = 0;
  for (std::size_t i = 1; i < bounds.size(); ++i)
    if (bounds[i].second < bounds[best].second) best = i;
  return bounds[best];
}

}  // namespace gtpb
