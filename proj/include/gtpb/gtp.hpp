#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace gtpb {

// Generalized trigonometric polynomial over the canonical half-set Omega_+:
//   f(x) = a0/2 + sum_w (a_w cos(w.x) + b_w sin(w.x)),
// with ||(a0, a, b)||_2 <= B_tilde.
struct GTPModel {
  Eigen::MatrixXd omega_plus;  // |Omega_+| x d
  double a0 = 0.0;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  double B_tilde = 1.0;

  int d() const { return static_cast<int>(omega_plus.cols()); }
  Eigen::Index n_plus() const { return omega_plus.rows(); }
  Eigen::Index n_omega() const { return 2 * omega_plus.rows() + 1; }
};

// Complex Fourier form c_w over Omega = {0} u Omega_+ u (-Omega_+), with the
// Hermitian symmetry c_{-w} = conj(c_w).
struct ComplexCoefficients {
  Eigen::MatrixXd omega_plus;
  std::complex<double> c0;
  Eigen::VectorXcd c_plus;   // c_w,  w in Omega_+
  Eigen::VectorXcd c_minus;  // c_{-w}
};

// Validates the norm constraint (small slack for round-off).
GTPModel make_gtp_model(Eigen::MatrixXd omega_plus, double a0, Eigen::VectorXd a,
                        Eigen::VectorXd b, double B_tilde);

// phi(x) = (1/2, cos(w.x)..., sin(w.x)...), so f(x) = <coeffs, phi(x)>.
Eigen::VectorXd feature_map(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                            const Eigen::Ref<const Eigen::VectorXd>& x);

// Rows phi(x_i) for X (m x d).
Eigen::MatrixXd feature_matrix(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                               const Eigen::Ref<const Eigen::MatrixXd>& X);

double evaluate(const GTPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

Eigen::VectorXd evaluate_batch(const GTPModel& model,
                               const Eigen::Ref<const Eigen::MatrixXd>& X);

// (a0, a..., b...) packing used everywhere coefficients act as one vector.
Eigen::VectorXd pack_coefficients(const GTPModel& model);
GTPModel model_from_coefficients(Eigen::MatrixXd omega_plus,
                                 const Eigen::Ref<const Eigen::VectorXd>& coeffs, double B_tilde);

// p in [1, inf]; pass std::numeric_limits<double>::infinity() for the sup norm.
double coefficient_norm(const GTPModel& model, double p);

// Radial projection onto the B_tilde ball; p = 2 only in this version.
Eigen::VectorXd project_to_ball(Eigen::VectorXd coeffs, double B_tilde, double p = 2.0);

// B_tilde = 2B, valid whenever Omega is integer-valued.
double btilde_for_integer_spectrum(double B);

// Conjectured general-spectrum budget 2 sqrt(|Omega|) B; flagged, not proven.
double btilde_conjectured_general(double B, Eigen::Index n_omega);

enum class RandomModelMode { Sphere, Ball };

// Coefficients uniform on the B_tilde sphere or ball, deterministic per seed.
GTPModel random_model(const Eigen::MatrixXd& omega_plus, double B_tilde, std::uint64_t seed,
                      RandomModelMode mode = RandomModelMode::Sphere);

ComplexCoefficients to_complex(const GTPModel& model);

// Inverse of to_complex; validates Hermitian symmetry (violation > 1e-8 rejects).
GTPModel to_real_coefficients(const ComplexCoefficients& c, double B_tilde);

// --- Grid helpers (Nyquist-safe sampling) -------------------------------------

// Per-coordinate K_i = max |w_i| over Omega_+.
Eigen::VectorXd max_frequencies(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus);

// factor * K_i + 1 equispaced points per coordinate (at least `minimum`).
Eigen::VectorXi nyquist_grid_sizes(const Eigen::Ref<const Eigen::MatrixXd>& omega_plus,
                                   int factor = 4, int minimum = 5);

// All grid points x_g = 2 pi g / G, row-major over coordinates; (prod G_i) x d.
Eigen::MatrixXd grid_points(const Eigen::VectorXi& grid_sizes);

// sup_x |f(x)| on the grid.
double grid_sup_norm(const GTPModel& model, const Eigen::VectorXi& grid_sizes);

// L2 norm sqrt(int |f|^2 dx) over [0, 2pi)^d by grid quadrature (exact for
// integer spectra once the grid resolves 2K_i).
double grid_l2_norm(const GTPModel& model, const Eigen::VectorXi& grid_sizes);

}  // namespace gtpb
