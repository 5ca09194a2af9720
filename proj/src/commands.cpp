#include "gtpb/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtpb/config.hpp"
#include "gtpb/errors.hpp"
#include "gtpb/learn.hpp"

namespace gtpb {

namespace {

constexpr const char* kGlobalKeys[] = {"seed", "output", "format"};

void check_command_keys(const json& config, std::initializer_list<const char*> allowed,
                        const std::string& context) {
  require_object(config, context);
  std::vector<const char*> all(allowed.begin(), allowed.end());
  for (const char* g : kGlobalKeys) all.push_back(g);
  std::set<std::string> ok(all.begin(), all.end());
  for (const auto& item : config.items())
    if (!ok.count(item.key()))
      throw ValidationError(context + ": unknown key '" + item.key() + "'");
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) {
  return RngStream(seed, tag).next_u64();
}

// Candidate descriptor shared by srm routes.
struct ParsedCandidate {
  double k = 0;
  OmegaSource source;
  double B_tilde = 1;
  double B = 0;
};

ParsedCandidate parse_candidate(const json& cj) {
  check_keys(cj, {"k", "strategy", "d", "omega_plus", "B_tilde", "B"}, "srm candidate");
  ParsedCandidate c;
  c.k = require_number(cj, "k", "srm candidate");
  json src;
  if (cj.contains("strategy")) src["strategy"] = cj.at("strategy");
  else {
    if (!cj.contains("d") || !cj.contains("omega_plus"))
      throw ValidationError("srm candidate: give 'strategy' or 'd' + 'omega_plus'");
    src["d"] = cj.at("d");
    src["omega_plus"] = cj.at("omega_plus");
  }
  c.source = parse_omega_source(src);
  c.B_tilde = require_number(cj, "B_tilde", "srm candidate");
  c.B = cj.value("B", 0.0);
  return c;
}

GTPModel parse_target(const json& tj, std::uint64_t seed) {
  check_keys(tj, {"model", "strategy", "d", "omega_plus", "B_tilde", "mode"}, "synth target");
  if (tj.contains("model")) return parse_model(tj.at("model"));
  json src;
  if (tj.contains("strategy")) src["strategy"] = tj.at("strategy");
  else {
    src["d"] = tj.at("d");
    src["omega_plus"] = tj.at("omega_plus");
  }
  const OmegaSource source = parse_omega_source(src);
  const double B_tilde = require_number(tj, "B_tilde", "synth target");
  const std::string mode = tj.value("mode", std::string("sphere"));
  if (mode != "sphere" && mode != "ball")
    throw ValidationError("synth target: mode must be 'sphere' or 'ball'");
  return random_model(source.omega_plus, B_tilde, derived_seed(seed, 0x7A9E7),
                      mode == "sphere" ? RandomModelMode::Sphere : RandomModelMode::Ball);
}

}  // namespace

CommandOutput cmd_omega(const json& config, std::uint64_t /*seed*/) {
  check_command_keys(config, {"strategy", "tolerance", "cap", "emit_vectors_limit"}, "omega config");
  if (!config.contains("strategy")) throw ValidationError("omega config: missing 'strategy'");
  const double tol = config.value("tolerance", kDedupTol);
  const long long cap = config.value("cap", kDefaultOmegaCap);
  const long long emit_limit = config.value("emit_vectors_limit", 10'000LL);

  const EncodingStrategy strategy = parse_strategy(config.at("strategy"));
  const FrequencySet omega = omega_total(strategy, tol, cap);
  const std::vector<long long> cards = per_coordinate_cardinalities(strategy, tol, cap);

  json per_coord = json::array();
  std::vector<double> best_bounds;
  std::ostringstream csv;
  csv << "coordinate,N,cardinality,K,bound_repeated,bound_klocal_signed,bound_klocal_unsigned\n";
  for (int i = 1; i <= strategy.d; ++i) {
    const auto& gates = strategy.per_coordinate[i - 1];
    const int N = static_cast<int>(gates.size());
    json cj;
    cj["coordinate"] = i;
    cj["N"] = N;
    cj["cardinality"] = cards[i - 1];
    cj["K"] = omega.K_per_coordinate[i - 1];

    json bounds;
    double best = static_cast<double>(cards[i - 1]);
    // NaN marks the repeated-Hamiltonian bound as not applicable (mixed gates).
    double repeated = std::numeric_limits<double>::quiet_NaN();
    double klocal_corr = 1.0, klocal_lit = 1.0;
    if (!gates.empty()) {
      bool same = true;
      for (std::size_t g = 1; g < gates.size() && same; ++g)
        same = (gates[g].entries - gates[0].entries).norm() <=
               1e-12 * std::max(1.0, gates[0].entries.norm());
      if (same) {
        const DifferenceSet delta = difference_set(eigenvalues(gates[0]), tol);
        const int T = delta.positive_count();
        if (T >= 1) {
          repeated = bound_repeated(N, T);
          bounds["repeated"] = repeated;
          bounds["T"] = T;
        } else {
          bounds["repeated"] = 1.0;
          bounds["T"] = 0;
          repeated = 1.0;
        }
      }
      int kappa = 1;
      for (const auto& h : gates) {
        int k = 1;
        while ((Eigen::Index(1) << k) < h.dim()) ++k;
        kappa = std::max(kappa, k);
      }
      klocal_corr = bound_klocal_worstcase(N, kappa, true);
      klocal_lit = bound_klocal_worstcase(N, kappa, false);
      bounds["klocal_signed"] = klocal_corr;
      bounds["klocal_unsigned"] = klocal_lit;
      bounds["kappa_used"] = kappa;
      best = std::isnan(repeated) ? klocal_corr : std::min(repeated, klocal_corr);
    }
    cj["bounds"] = bounds;
    per_coord.push_back(cj);
    best_bounds.push_back(std::max(1.0, best));
    csv << i << ',' << N << ',' << cards[i - 1] << ',' << omega.K_per_coordinate[i - 1] << ',';
    if (!std::isnan(repeated)) csv << repeated;
    csv << ',' << klocal_corr << ',' << klocal_lit << '\n';
  }

  CommandOutput out;
  out.result = frequency_set_to_json(omega, emit_limit);
  out.result["per_coordinate"] = per_coord;
  out.result["bound_total_amgm"] = bound_total_amgm(best_bounds, strategy.d);
  out.result["N_total"] = strategy.total_gates();
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_bounds(const json& config, std::uint64_t /*seed*/) {
  check_command_keys(config,
                     {"kind", "N", "d", "T", "kappa", "strategy", "M_norm", "loss", "m", "delta",
                      "use_exact_omega", "conjecture1_opt_in", "epsilon_list", "cap"},
                     "bounds config");
  const double M_norm = require_number(config, "M_norm", "bounds config");
  const LossSpec loss = config.contains("loss") ? parse_loss(config.at("loss"))
                                                : clipped_absolute_loss(2.0 * M_norm);
  const long long m = require_integer(config, "m", "bounds config");
  const double delta = require_number(config, "delta", "bounds config");
  if (!config.contains("kind") || !config.at("kind").is_string())
    throw ValidationError("bounds config: missing 'kind'");
  const std::string kind = config.at("kind").get<std::string>();

  BoundReport report;
  if (kind == "explicit") {
    if (!config.contains("strategy"))
      throw ValidationError("bounds config: kind 'explicit' needs 'strategy'");
    report = strategy_bound_report(parse_strategy(config.at("strategy")), M_norm, loss, m, delta,
                                   config.value("conjecture1_opt_in", false), kDedupTol,
                                   config.value("cap", kDefaultOmegaCap));
  } else {
    EncodingBoundInputs in;
    if (kind == "pauli") in.kind = StrategyKind::Pauli;
    else if (kind == "same_T") in.kind = StrategyKind::SameT;
    else if (kind == "same_klocal") in.kind = StrategyKind::SameKLocal;
    else if (kind == "diff_klocal") in.kind = StrategyKind::DiffKLocal;
    else throw ValidationError("bounds config: unknown kind '" + kind + "'");
    in.N = static_cast<int>(require_integer(config, "N", "bounds config"));
    in.d = static_cast<int>(require_integer(config, "d", "bounds config"));
    if (config.contains("T")) in.T = static_cast<int>(require_integer(config, "T", "bounds config"));
    if (config.contains("kappa"))
      in.kappa = static_cast<int>(require_integer(config, "kappa", "bounds config"));
    in.M_norm = M_norm;
    in.loss = loss;
    in.m = m;
    in.delta = delta;
    in.use_exact_omega = config.value("use_exact_omega", false);
    in.cap = config.value("cap", kDefaultOmegaCap);
    report = encoding_bound_report(in);
  }

  CommandOutput out;
  out.result["report"] = to_json(report);

  std::ostringstream csv;
  csv << "epsilon,m_rademacher,m_covering\n";
  if (config.contains("epsilon_list")) {
    GapBoundParams params;
    params.K = report.K;
    params.B = report.B;
    params.B_tilde = report.B_tilde;
    params.n_omega = report.n_omega;
    params.d = report.d;
    params.loss = report.loss;
    json sweeps = json::array();
    for (const auto& ej : config.at("epsilon_list")) {
      const double eps = ej.get<double>();
      json row;
      row["epsilon"] = eps;
      const long long m_rad = sample_size_for_gap(eps, delta, params, BoundRoute::Rademacher);
      const long long m_cov = sample_size_for_gap(eps, delta, params, BoundRoute::Covering);
      row["m_rademacher"] = m_rad;
      row["m_covering"] = m_cov;
      sweeps.push_back(row);
      csv << eps << ',' << m_rad << ',' << m_cov << '\n';
    }
    out.result["sample_sizes"] = sweeps;
  }
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_rademacher(const json& config, std::uint64_t seed) {
  check_command_keys(config, {"omega", "B_tilde", "m", "n_sigma_samples"}, "rademacher config");
  if (!config.contains("omega")) throw ValidationError("rademacher config: missing 'omega'");
  const OmegaSource src = parse_omega_source(config.at("omega"));
  const double B_tilde = require_number(config, "B_tilde", "rademacher config");
  const long long m = require_integer(config, "m", "rademacher config");
  const int n_samples = static_cast<int>(config.value("n_sigma_samples", 1000LL));
  if (m < 1) throw ValidationError("rademacher config: need m >= 1");

  Eigen::MatrixXd X(m, src.d);
  const std::uint64_t seed_x = derived_seed(seed, 0x58);
  for (long long i = 0; i < m; ++i) {
    RngStream rng(seed_x, static_cast<std::uint64_t>(i));
    for (int j = 0; j < src.d; ++j) X(i, j) = rng.uniform(0.0, 2.0 * M_PI);
  }

  const RademacherEstimate mc = rademacher_mc(src.omega_plus, B_tilde, X, n_samples, seed);

  Eigen::VectorXd sigma0(m);
  {
    RngStream rng(seed, 0);
    for (long long i = 0; i < m; ++i) sigma0[i] = rng.sign();
  }
  const double closed0 = rademacher_sup_closed_form(src.omega_plus, B_tilde, X, sigma0);

  const double K = max_frequencies(src.omega_plus).sum();
  const double n_omega = src.n_omega();
  const double v1 = rademacher_bound_v1(K, B_tilde, (n_omega - 1) / 2.0, src.d, m);
  json bounds;
  bounds["v1"] = v1;
  double vmin = v1;
  if (n_omega >= 2) {
    const double v2 = rademacher_bound_v2(B_tilde, n_omega, m);
    bounds["v2"] = v2;
    vmin = std::min(v1, v2);
  }
  bounds["min"] = vmin;
  const double dudley = dudley_rademacher_bound(B_tilde, B_tilde, n_omega, m);
  bounds["dudley_B_eq_Btilde"] = dudley;
  bounds["remark10_pnorm"] = {{"p1", rademacher_bound_pnorm(B_tilde, n_omega, 1.0, m)},
                              {"p2", rademacher_bound_pnorm(B_tilde, n_omega, 2.0, m)}};

  CommandOutput out;
  out.result["mc"] = {{"mean", mc.mean},
                      {"std_error", mc.std_error},
                      {"n_sigma_samples", mc.n_sigma_samples}};
  out.result["closed_form_sample"] = closed0;
  out.result["bounds"] = bounds;
  out.result["n_omega"] = n_omega;
  out.result["K"] = K;
  out.result["soundness"] = mc.mean <= vmin + 3.0 * mc.std_error;
  out.result["soundness_dudley"] = mc.mean <= dudley + 3.0 * mc.std_error;
  return out;
}

CommandOutput cmd_cover_check(const json& config, std::uint64_t seed) {
  check_command_keys(config,
                     {"omega", "B_tilde", "epsilon", "n_members", "grid_cap", "sup_grid_factor"},
                     "cover-check config");
  if (!config.contains("omega")) throw ValidationError("cover-check config: missing 'omega'");
  const OmegaSource src = parse_omega_source(config.at("omega"));
  const double B_tilde = require_number(config, "B_tilde", "cover-check config");
  const double epsilon = require_number(config, "epsilon", "cover-check config");
  const long long n_members = config.value("n_members", 1000LL);
  const long long grid_cap = config.value("grid_cap", 2'000'000LL);
  const int factor = static_cast<int>(config.value("sup_grid_factor", 4LL));

  const CoverNet net = construct_cover(src.omega_plus, B_tilde, epsilon, grid_cap);
  const CoveringBound bound = covering_number_bound(B_tilde, src.n_omega(), epsilon);

  const Eigen::VectorXi grid = nyquist_grid_sizes(src.omega_plus, factor, 9);
  const Eigen::MatrixXd points = grid_points(grid);
  Eigen::MatrixXd net_vals(static_cast<Eigen::Index>(net.members.size()), points.rows());
  for (std::size_t i = 0; i < net.members.size(); ++i)
    net_vals.row(static_cast<Eigen::Index>(i)) = evaluate_batch(net.members[i], points).transpose();

  double radius = 0.0;
  for (long long i = 0; i < n_members; ++i) {
    const GTPModel member =
        random_model(src.omega_plus, B_tilde, derived_seed(seed, 0xC0'0000 + i),
                     RandomModelMode::Ball);
    const Eigen::VectorXd vals = evaluate_batch(member, points);
    const double dist =
        (net_vals.rowwise() - vals.transpose()).cwiseAbs().rowwise().maxCoeff().minCoeff();
    radius = std::max(radius, dist);
  }

  CommandOutput out;
  out.result["net_size"] = net.members.size();
  out.result["covering_bound"] = {{"value", bound.value},
                                  {"log2", bound.log2_value},
                                  {"inner_net_value", bound.inner_net_value},
                                  {"inner_net_log2", bound.inner_net_log2}};
  out.result["empirical_covering_radius"] = radius;
  out.result["radius_within_epsilon"] = radius <= epsilon;
  out.result["n_members_checked"] = n_members;
  out.result["note"] =
      "constructed grid nets may exceed the volumetric covering-number bound; size is reported, "
      "not asserted";
  return out;
}

CommandOutput cmd_simulate(const json& config, std::uint64_t seed) {
  check_command_keys(config, {"circuit", "theta", "oversample", "conjecture_probe",
                              "reconstruction_checks"},
                     "simulate config");
  if (!config.contains("circuit")) throw ValidationError("simulate config: missing 'circuit'");
  const CircuitSpec circuit = parse_circuit(config.at("circuit"), seed);

  Eigen::VectorXd theta;
  if (config.contains("theta")) {
    const json& tj = config.at("theta");
    if (tj.is_array()) {
      theta.resize(tj.size());
      Eigen::Index i = 0;
      for (const auto& v : tj) theta[i++] = v.get<double>();
    } else {
      check_keys(tj, {"random"}, "simulate theta");
      check_keys(tj.at("random"), {"count"}, "simulate theta.random");
      const long long count = require_integer(tj.at("random"), "count", "simulate theta.random");
      theta.resize(count);
      RngStream rng(derived_seed(seed, 0x7E7A), 0);
      for (long long i = 0; i < count; ++i) theta[i] = rng.uniform(0.0, 2.0 * M_PI);
    }
  }

  const int oversample = static_cast<int>(config.value("oversample", 1LL));
  const FourierExtraction fx =
      extract_fourier(circuit, theta, default_fourier_grid(circuit, oversample));
  const double obs_norm = operator_norm_inf(circuit.observable);

  // Reconstruction residual of the inverse transform at random points.
  const int n_checks = static_cast<int>(config.value("reconstruction_checks", 20LL));
  const CompiledCircuit compiled(circuit, theta);
  double recon_err = 0.0;
  for (int t = 0; t < n_checks; ++t) {
    RngStream rng(derived_seed(seed, 0x3EC), static_cast<std::uint64_t>(t));
    Eigen::VectorXd x(circuit.d);
    for (int i = 0; i < circuit.d; ++i) x[i] = rng.uniform(0.0, 2.0 * M_PI);
    std::complex<double> value = fx.coefficients.c0;
    for (Eigen::Index r = 0; r < fx.coefficients.omega_plus.rows(); ++r) {
      const double phase = fx.coefficients.omega_plus.row(r).dot(x);
      const std::complex<double> e(std::cos(phase), -std::sin(phase));  // e^{-i w x}
      value += fx.coefficients.c_plus[r] * e + fx.coefficients.c_minus[r] * std::conj(e);
    }
    recon_err = std::max(recon_err, std::abs(value.real() - compiled.expectation(x)));
  }

  CommandOutput out;
  out.result["omega"] = frequency_set_to_json(fx.omega, 10'000);
  out.result["grid_sizes"] = std::vector<int>(fx.grid_sizes.begin(), fx.grid_sizes.end());
  out.result["max_offgrid_leakage"] = fx.max_offgrid_leakage;
  out.result["hermitian_residual"] = fx.hermitian_residual;
  out.result["grid_sup"] = fx.grid_sup;
  out.result["observable_norm"] = obs_norm;
  out.result["sup_within_observable_norm"] = fx.grid_sup <= obs_norm + 1e-9;
  out.result["omega_agreement"] = fx.max_offgrid_leakage <= 1e-9;
  out.result["reconstruction_residual"] = recon_err;
  json coeffs;
  coeffs["c0"] = {fx.coefficients.c0.real(), fx.coefficients.c0.imag()};
  json cp = json::array();
  for (Eigen::Index r = 0; r < fx.coefficients.c_plus.size(); ++r)
    cp.push_back({fx.coefficients.c_plus[r].real(), fx.coefficients.c_plus[r].imag()});
  coeffs["c_plus"] = cp;
  out.result["coefficients"] = coeffs;

  if (config.contains("conjecture_probe")) {
    const json& pj = config.at("conjecture_probe");
    check_keys(pj, {"n_trials", "n_qubits", "d", "encodings_per_coordinate", "observable_pauli",
                    "encoding_pauli"},
               "conjecture_probe config");
    ConjectureProbeConfig pc;
    pc.n_qubits = static_cast<int>(pj.value("n_qubits", 1LL));
    pc.d = static_cast<int>(pj.value("d", 1LL));
    pc.encodings_per_coordinate.assign(static_cast<std::size_t>(pc.d), 1);
    if (pj.contains("encodings_per_coordinate")) {
      pc.encodings_per_coordinate.clear();
      for (const auto& v : pj.at("encodings_per_coordinate"))
        pc.encodings_per_coordinate.push_back(v.get<int>());
    }
    pc.observable_pauli = pj.value("observable_pauli", std::string(pc.n_qubits, 'Z'));
    pc.encoding_pauli = pj.value("encoding_pauli", std::string("Z"));
    const int n_trials = static_cast<int>(require_integer(pj, "n_trials", "conjecture_probe"));
    const ConjectureProbeReport probe = conjecture_probe(pc, n_trials, seed);
    json vj = json::array();
    for (const auto& v : probe.violations) vj.push_back({{"trial", v.trial}, {"ratio", v.ratio}});
    out.result["conjecture_probe"] = {{"max_ratio", probe.max_ratio},
                                      {"n_trials", probe.n_trials},
                                      {"observable_norm", probe.observable_norm},
                                      {"violations", vj}};
  }
  return out;
}

CommandOutput cmd_srm(const json& config, std::uint64_t seed) {
  check_command_keys(
      config, {"candidates", "data", "delta", "loss", "route", "coverage_trials", "n_eval"},
      "srm config");
  if (!config.contains("candidates") || !config.at("candidates").is_array() ||
      config.at("candidates").empty())
    throw ValidationError("srm config: 'candidates' must be a nonempty array");
  const double delta = require_number(config, "delta", "srm config");
  if (!config.contains("loss")) throw ValidationError("srm config: missing 'loss'");
  const LossSpec loss = parse_loss(config.at("loss"));
  const std::string route_name = config.value("route", std::string("rademacher"));
  if (route_name != "rademacher" && route_name != "covering" && route_name != "union")
    throw ValidationError("srm config: route must be rademacher, covering or union");

  std::vector<ParsedCandidate> parsed;
  for (const auto& cj : config.at("candidates")) parsed.push_back(parse_candidate(cj));

  // Data source.
  if (!config.contains("data")) throw ValidationError("srm config: missing 'data'");
  const json& dj = config.at("data");
  check_keys(dj, {"csv", "synth"}, "srm data");
  DataSet S;
  bool have_target = false;
  GTPModel target;
  double noise_sigma = 0.0;
  int m_synth = 0;
  XDistribution dist = XDistribution::Uniform;
  if (dj.contains("csv")) {
    S = read_dataset_csv(dj.at("csv").get<std::string>());
  } else if (dj.contains("synth")) {
    const json& sj = dj.at("synth");
    check_keys(sj, {"target", "noise_sigma", "m", "x_distribution"}, "srm synth");
    if (!sj.contains("target")) throw ValidationError("srm synth: missing 'target'");
    target = parse_target(sj.at("target"), seed);
    have_target = true;
    noise_sigma = sj.value("noise_sigma", 0.0);
    m_synth = static_cast<int>(require_integer(sj, "m", "srm synth"));
    const std::string dist_name = sj.value("x_distribution", std::string("uniform"));
    if (dist_name == "grid") dist = XDistribution::Grid;
    else if (dist_name != "uniform")
      throw ValidationError("srm synth: x_distribution must be 'uniform' or 'grid'");
    S = synth_data(target, noise_sigma, m_synth, derived_seed(seed, 0xDA7A), dist);
  } else {
    throw ValidationError("srm data: give 'csv' or 'synth'");
  }

  const auto run_selection = [&](const DataSet& data) {
    if (route_name == "union") {
      std::vector<SRMMultiCandidate> cands;
      std::vector<GapBoundParams> params(parsed.size());
      for (std::size_t i = 0; i < parsed.size(); ++i) {
        const auto& p = parsed[i];
        cands.push_back(SRMMultiCandidate{p.k, p.k, p.source.omega_plus, p.B_tilde});
        params[i].K = max_frequencies(p.source.omega_plus).sum();
        params[i].B = p.B > 0 ? p.B : p.B_tilde / 2.0;
        params[i].B_tilde = p.B_tilde;
        params[i].n_omega = p.source.n_omega();
        params[i].d = p.source.d;
        params[i].loss = loss;
      }
      const BoundFamily g1 = [&](double k, long long m, double dlt) {
        for (std::size_t i = 0; i < parsed.size(); ++i)
          if (parsed[i].k == k) return gen_gap_bound(BoundRoute::Rademacher, params[i], m, dlt);
        throw ValidationError("srm union route: unknown candidate k");
      };
      const BoundFamily g2 = [&](double k, long long m, double dlt) {
        for (std::size_t i = 0; i < parsed.size(); ++i)
          if (parsed[i].k == k) return gen_gap_bound(BoundRoute::Covering, params[i], m, dlt);
        throw ValidationError("srm union route: unknown candidate k");
      };
      return srm_multi(cands, g1, g2, data, delta, loss);
    }
    std::vector<SRMCandidate> cands;
    for (const auto& p : parsed)
      cands.push_back(SRMCandidate{p.k, p.source.omega_plus, p.B_tilde, p.B});
    return srm_select(cands, data, delta, loss,
                      route_name == "rademacher" ? BoundRoute::Rademacher : BoundRoute::Covering);
  };

  const SRMResult result = run_selection(S);

  CommandOutput out;
  json rows = json::array();
  std::ostringstream csv;
  csv << "k,empirical_risk,bound_value,total,failed,bound_label\n";
  for (const auto& row : result.rows) {
    json rj;
    rj["k"] = row.k;
    rj["empirical_risk"] = row.empirical_risk;
    rj["bound_value"] = row.bound_value;
    rj["total"] = row.total;
    rj["failed"] = row.failed;
    if (row.failed) rj["error"] = row.error;
    if (!row.bound_label.empty()) rj["bound_label"] = row.bound_label;
    rows.push_back(rj);
    csv << row.k << ',' << row.empirical_risk << ',' << row.bound_value << ',' << row.total << ','
        << (row.failed ? 1 : 0) << ',' << row.bound_label << '\n';
  }
  out.result["rows"] = rows;
  out.result["k_opt"] = result.k_opt;
  out.result["selected_index"] = result.selected_index;
  out.result["selected_model"] = model_to_json(result.selected_model);
  out.result["m"] = S.size();

  const long long coverage_trials = config.value("coverage_trials", 0LL);
  if (coverage_trials > 0) {
    if (!have_target)
      throw ValidationError("srm config: coverage_trials needs a synth data source");
    const int n_eval = static_cast<int>(config.value("n_eval", 2000LL));
    const Sampler sampler = target_sampler(target, noise_sigma);
    long long covered = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (long long t = 0; t < coverage_trials; ++t) {
      const DataSet St =
          synth_data(target, noise_sigma, m_synth, derived_seed(seed, 0xC0F'000 + t), dist);
      const SRMResult rt = run_selection(St);
      const SRMRow& sel = rt.rows[rt.selected_index];
      const double gap = generalization_gap(rt.selected_model, St, sampler, n_eval,
                                            derived_seed(seed, 0x9A9'000 + t), loss);
      if (gap <= sel.bound_value) ++covered;
      min_margin = std::min(min_margin, sel.bound_value - gap);
    }
    out.result["coverage"] = {{"trials", coverage_trials},
                              {"covered", covered},
                              {"fraction", static_cast<double>(covered) /
                                               static_cast<double>(coverage_trials)},
                              {"min_margin", min_margin}};
  }
  out.csv = csv.str();
  return out;
}

CommandOutput cmd_table1(const json& config, std::uint64_t /*seed*/) {
  check_command_keys(config, {"families", "slack", "cap"}, "table1 config");
  if (!config.contains("families") || !config.at("families").is_array() ||
      config.at("families").empty())
    throw ValidationError("table1 config: 'families' must be a nonempty array");
  const double slack = config.value("slack", 0.15);
  const long long cap = config.value("cap", kDefaultOmegaCap);

  CommandOutput out;
  json rows = json::array();
  std::ostringstream csv;
  csv << "label,kind,exponent,slope,two_sided,pass\n";
  bool all_pass = true;
  for (const auto& fj : config.at("families")) {
    check_keys(fj, {"label", "kind", "positive_deltas", "N_values", "exponent", "two_sided"},
               "table1 family");
    const std::string label = fj.value("label", std::string("family"));
    if (!fj.contains("kind") || !fj.at("kind").is_string())
      throw ValidationError("table1 family: missing 'kind'");
    const std::string kind = fj.at("kind").get<std::string>();
    const double exponent = require_number(fj, "exponent", "table1 family");
    const bool two_sided = fj.value("two_sided", false);
    std::vector<int> N_values;
    for (const auto& v : fj.at("N_values")) N_values.push_back(v.get<int>());

    StrategyFamily family;
    if (kind == "pauli") {
      family = [](int N) {
        return std::vector<DifferenceSet>(N, DifferenceSet{{-2.0, 0.0, 2.0}, 0.0, true});
      };
    } else if (kind == "repeated") {
      std::vector<double> vals;
      std::vector<double> pos;
      for (const auto& v : fj.at("positive_deltas")) pos.push_back(v.get<double>());
      std::sort(pos.begin(), pos.end());
      bool integral = true;
      for (double p : pos) integral = integral && p == std::nearbyint(p);
      for (auto it = pos.rbegin(); it != pos.rend(); ++it) vals.push_back(-*it);
      vals.push_back(0.0);
      for (double p : pos) vals.push_back(p);
      const DifferenceSet delta{vals, integral ? 0.0 : kDedupTol, integral};
      family = [delta](int N) { return std::vector<DifferenceSet>(N, delta); };
    } else if (kind == "constant") {
      family = [](int N) {
        return std::vector<DifferenceSet>(N, DifferenceSet{{0.0}, 0.0, true});
      };
    } else {
      throw ValidationError("table1 family: unknown kind '" + kind + "'");
    }

    const double slope = scaling_exponent_fit(family, N_values, kDedupTol, cap);
    const bool pass = two_sided ? std::abs(slope - exponent) <= slack : slope <= exponent + slack;
    all_pass = all_pass && pass;
    json rj;
    rj["label"] = label;
    rj["kind"] = kind;
    rj["exponent"] = exponent;
    rj["slope"] = slope;
    rj["two_sided"] = two_sided;
    rj["pass"] = pass;
    rows.push_back(rj);
    csv << label << ',' << kind << ',' << exponent << ',' << slope << ',' << (two_sided ? 1 : 0)
        << ',' << (pass ? 1 : 0) << '\n';
  }
  out.result["families"] = rows;
  out.result["all_pass"] = all_pass;
  out.result["slack"] = slack;
  out.csv = csv.str();
  return out;
}

CommandOutput run_command(const std::string& name, const json& config, std::uint64_t seed) {
  if (name == "omega") return cmd_omega(config, seed);
  if (name == "bounds") return cmd_bounds(config, seed);
  if (name == "rademacher") return cmd_rademacher(config, seed);
  if (name == "cover-check") return cmd_cover_check(config, seed);
  if (name == "simulate") return cmd_simulate(config, seed);
  if (name == "srm") return cmd_srm(config, seed);
  if (name == "table1") return cmd_table1(config, seed);
  throw ValidationError("unknown command '" + name + "'");
}

}  // namespace gtpb
