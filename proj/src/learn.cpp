#include "gtpb/learn.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gtpb/errors.hpp"

namespace gtpb {

namespace {

void check_dataset(const DataSet& S) {
  if (S.X.rows() == 0) throw ValidationError("dataset: empty");
  if (S.y.size() != S.X.rows()) throw ValidationError("dataset: label count mismatch");
}

}  // namespace

Sampler target_sampler(const GTPModel& target, double noise_sigma) {
  if (noise_sigma < 0) throw ValidationError("target_sampler: negative noise");
  return [target, noise_sigma](std::uint64_t, RngStream& rng) {
    Eigen::VectorXd x(target.d());
    for (int i = 0; i < target.d(); ++i) x[i] = rng.uniform(0.0, 2.0 * M_PI);
    double y = evaluate(target, x);
    if (noise_sigma > 0) y += noise_sigma * rng.gaussian();
    return std::make_pair(std::move(x), y);
  };
}

Sampler reemitter_sampler(DataSet S) {
  check_dataset(S);
  return [S = std::move(S)](std::uint64_t index, RngStream&) {
    const Eigen::Index i = static_cast<Eigen::Index>(index % static_cast<std::uint64_t>(S.size()));
    return std::make_pair(Eigen::VectorXd(S.X.row(i).transpose()), S.y[i]);
  };
}

double empirical_risk(const GTPModel& model, const DataSet& S, const LossSpec& loss) {
  check_dataset(S);
  const Eigen::VectorXd pred = evaluate_batch(model, S.X);
  double sum = 0;
  for (Eigen::Index i = 0; i < S.size(); ++i) sum += loss_value(loss, S.y[i], pred[i]);
  return sum / static_cast<double>(S.size());
}

RiskEstimate estimate_true_risk(const GTPModel& model, const Sampler& sampler, int n_eval,
                                std::uint64_t seed, const LossSpec& loss) {
  if (n_eval < 2) throw ValidationError("estimate_true_risk: need n_eval >= 2");
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n_eval; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    const auto [x, y] = sampler(static_cast<std::uint64_t>(i), rng);
    const double v = loss_value(loss, y, evaluate(model, x));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n_eval;
  const double var = std::max(0.0, (sum_sq - n_eval * mean * mean) / (n_eval - 1));
  return RiskEstimate{mean, std::sqrt(var / n_eval), n_eval};
}

double generalization_gap(const GTPModel& model, const DataSet& S, const Sampler& sampler,
                          int n_eval, std::uint64_t seed, const LossSpec& loss) {
  return estimate_true_risk(model, sampler, n_eval, seed, loss).mean -
         empirical_risk(model, S, loss);
}

GTPModel fit_gtp(const Eigen::MatrixXd& omega_plus, double B_tilde, const DataSet& S) {
  check_dataset(S);
  if (!(B_tilde > 0)) throw ValidationError("fit_gtp: B_tilde must be positive");
  const Eigen::MatrixXd phi = feature_matrix(omega_plus, S.X);
  const Eigen::Index dim = phi.cols();
  const Eigen::MatrixXd G = phi.transpose() * phi;
  const Eigen::VectorXd r = phi.transpose() * S.y;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.info() != Eigen::Success)
    throw NumericError("fit_gtp: normal-equation eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const double lam_max = lam.maxCoeff();
  if (!std::isfinite(lam_max) || lam_max <= 0) {
    std::ostringstream msg;
    msg << "fit_gtp: normal equations are numerically singular, condition estimate "
        << (lam_max > 0 ? lam_max / std::max(lam.minCoeff(), 0.0) : 0.0);
    throw NumericError(msg.str());
  }
  const Eigen::VectorXd w = es.eigenvectors().transpose() * r;

  // Min-norm least squares, tiny eigenvalues truncated (ridge fallback).
  const double cutoff = lam_max * 1e-12;
  Eigen::VectorXd scaled(dim);
  for (Eigen::Index i = 0; i < dim; ++i) scaled[i] = lam[i] > cutoff ? w[i] / lam[i] : 0.0;
  Eigen::VectorXd coeffs = es.eigenvectors() * scaled;

  if (coeffs.norm() > B_tilde) {
    // Norm-equality solution on the ridge path: ||c(mu)||_2 strictly decreases
    // in mu, so bisect mu until ||c(mu)||_2 = B_tilde.
    const auto norm_at = [&](double mu) {
      double sq = 0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double denom = std::max(lam[i], 0.0) + mu;
        sq += (w[i] / denom) * (w[i] / denom);
      }
      return std::sqrt(sq);
    };
    double lo = 0.0;
    double hi = w.norm() / B_tilde;  // ||c(mu)|| <= ||w|| / mu
    for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (norm_at(mid) > B_tilde) lo = mid;
      else hi = mid;
    }
    const double mu = hi;
    for (Eigen::Index i = 0; i < dim; ++i) coeffs[i] = w[i] / (std::max(lam[i], 0.0) + mu);
    coeffs = es.eigenvectors() * coeffs;
    if (std::abs(coeffs.norm() - B_tilde) > 1e-8)
      throw NumericError("fit_gtp: ridge-path root finding failed to reach the norm constraint");
  }
  return model_from_coefficients(omega_plus, project_to_ball(std::move(coeffs), B_tilde), B_tilde);
}

DataSet synth_data(const GTPModel& target, double noise_sigma, int m, std::uint64_t seed,
                   XDistribution dist) {
  if (m < 1) throw ValidationError("synth_data: need m >= 1");
  if (noise_sigma < 0) throw ValidationError("synth_data: negative noise");
  DataSet S;
  S.X.resize(m, target.d());
  S.y.resize(m);
  Eigen::MatrixXd grid;
  if (dist == XDistribution::Grid) grid = grid_points(nyquist_grid_sizes(target.omega_plus, 2, 1));
  for (int i = 0; i < m; ++i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    if (dist == XDistribution::Uniform) {
      for (int j = 0; j < target.d(); ++j) S.X(i, j) = rng.uniform(0.0, 2.0 * M_PI);
    } else {
      S.X.row(i) = grid.row(i % grid.rows());
    }
    double y = evaluate(target, S.X.row(i).transpose());
    if (noise_sigma > 0) y += noise_sigma * rng.gaussian();
    S.y[i] = y;
  }
  return S;
}

namespace {

SRMResult select_rows(std::vector<SRMRow> rows, std::vector<std::optional<GTPModel>> models) {
  SRMResult out;
  out.rows = std::move(rows);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const SRMRow& row = out.rows[i];
    if (row.failed) continue;
    if (out.selected_index < 0) { out.selected_index = static_cast<int>(i); continue; }
    const SRMRow& best = out.rows[out.selected_index];
    if (row.total < best.total ||
        (row.total == best.total &&
         (row.k < best.k || (row.k == best.k && row.k2 < best.k2))))
      out.selected_index = static_cast<int>(i);
  }
  if (out.selected_index < 0)
    throw NumericError("srm: every candidate failed to fit");
  out.k_opt = out.rows[out.selected_index].k;
  out.selected_model = std::move(*models[out.selected_index]);
  return out;
}

}  // namespace

SRMResult srm_select(const std::vector<SRMCandidate>& candidates, const DataSet& S, double delta,
                     const LossSpec& loss, BoundRoute route) {
  if (candidates.empty()) throw ValidationError("srm_select: empty candidate list");
  check_dataset(S);
  std::vector<SRMRow> rows;
  std::vector<std::optional<GTPModel>> models;
  for (const auto& cand : candidates) {
    SRMRow row;
    row.k = cand.k;
    row.bound_label = route == BoundRoute::Rademacher ? "rademacher" : "covering";
    try {
      GTPModel model = fit_gtp(cand.omega_plus, cand.B_tilde, S);
      row.empirical_risk = empirical_risk(model, S, loss);
      GapBoundParams params;
      params.K = max_frequencies(cand.omega_plus).sum();
      params.B = cand.B > 0 ? cand.B : cand.B_tilde / 2.0;
      params.B_tilde = cand.B_tilde;
      params.n_omega = static_cast<double>(2 * cand.omega_plus.rows() + 1);
      params.d = static_cast<int>(cand.omega_plus.cols());
      params.loss = loss;
      row.bound_value = gen_gap_bound(route, params, S.size(), delta);
      row.total = row.empirical_risk + row.bound_value;
      models.emplace_back(std::move(model));
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      models.emplace_back(std::nullopt);
    }
    rows.push_back(std::move(row));
  }
  return select_rows(std::move(rows), std::move(models));
}

SRMResult srm_multi(const std::vector<SRMMultiCandidate>& candidates, const BoundFamily& g1,
                    const BoundFamily& g2, const DataSet& S, double delta, const LossSpec& loss) {
  if (candidates.empty()) throw ValidationError("srm_multi: empty candidate list");
  check_dataset(S);
  std::vector<SRMRow> rows;
  std::vector<std::optional<GTPModel>> models;
  for (const auto& cand : candidates) {
    SRMRow row;
    row.k = cand.k1;
    row.k2 = cand.k2;
    try {
      GTPModel model = fit_gtp(cand.omega_plus, cand.B_tilde, S);
      row.empirical_risk = empirical_risk(model, S, loss);
      const auto combined = union_bound_combine(
          {{"g1", g1(cand.k1, S.size(), delta / 2.0)}, {"g2", g2(cand.k2, S.size(), delta / 2.0)}});
      row.bound_label = combined.first;
      row.bound_value = combined.second;
      row.total = row.empirical_risk + row.bound_value;
      models.emplace_back(std::move(model));
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      models.emplace_back(std::nullopt);
    }
    rows.push_back(std::move(row));
  }
  return select_rows(std::move(rows), std::move(models));
}

DataSet read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("read_dataset_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("read_dataset_csv: empty file " + path);
  int d = 0;
  {
    std::stringstream header(line);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(header, col, ',')) cols.push_back(col);
    if (cols.size() < 2 || cols.back() != "y")
      throw ValidationError("read_dataset_csv: expected header x1,...,xd,y");
    d = static_cast<int>(cols.size()) - 1;
  }
  std::vector<std::vector<double>> xs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
    if (static_cast<int>(vals.size()) != d + 1)
      throw ValidationError("read_dataset_csv: row with wrong column count in " + path);
    ys.push_back(vals.back());
    vals.pop_back();
    xs.push_back(std::move(vals));
  }
  if (xs.empty()) throw ValidationError("read_dataset_csv: no data rows in " + path);
  DataSet S;
  S.X.resize(static_cast<Eigen::Index>(xs.size()), d);
  S.y.resize(static_cast<Eigen::Index>(ys.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (int j = 0; j < d; ++j) S.X(static_cast<Eigen::Index>(i), j) = xs[i][j];
    S.y[static_cast<Eigen::Index>(i)] = ys[i];
  }
  return S;
}

void write_dataset_csv(const DataSet& S, const std::string& path) {
  check_dataset(S);
  std::ofstream out(path);
  if (!out) throw ValidationError("write_dataset_csv: cannot open " + path);
  out.precision(17);
  for (int j = 1; j <= S.d(); ++j) out << 'x' << j << ',';
  out << "y\n";
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    for (int j = 0; j < S.d(); ++j) out << S.X(i, j) << ',';
    out << S.y[i] << '\n';
  }
}

}  // namespace gtpb
