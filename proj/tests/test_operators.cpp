#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <set>

#include "gtpb/errors.hpp"
#include "gtpb/operators.hpp"
#include "gtpb/rng.hpp"

using namespace gtpb;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

HermitianOperator random_hermitian(Eigen::Index dim, std::uint64_t seed) {
  RngStream rng(seed);
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      a(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  return make_hermitian(0.5 * (a + a.adjoint().eval()));
}

}  // namespace

TEST_SUITE_BEGIN("operators");

TEST_CASE("pauli strings") {
  const auto z = make_pauli_string("Z");
  CHECK(z.dim() == 2);
  CHECK(z.entries(0, 0).real() == doctest::Approx(1.0));
  CHECK(z.entries(1, 1).real() == doctest::Approx(-1.0));
  CHECK(z.integer_spectrum);

  const auto zz = make_pauli_string("ZZ");
  CHECK(zz.dim() == 4);
  CHECK(zz.entries(0, 0).real() == doctest::Approx(1.0));
  CHECK(zz.entries(1, 1).real() == doctest::Approx(-1.0));
  CHECK(zz.entries(2, 2).real() == doctest::Approx(-1.0));
  CHECK(zz.entries(3, 3).real() == doctest::Approx(1.0));

  const auto x = make_pauli_string("X");
  const Spectrum s = eigenvalues(x);
  CHECK(s.values[0] == doctest::Approx(-1.0));
  CHECK(s.values[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_pauli_string(""), ValidationError);
  CHECK_THROWS_AS(make_pauli_string("ZQ"), ValidationError);
}

TEST_CASE("pauli string spectra have balanced +-1 eigenvalues") {
  for (const std::string labels : {"X", "ZZ", "XYZ", "YI", "IZI"}) {
    const Spectrum s = eigenvalues(make_pauli_string(labels));
    const Eigen::Index dim = s.size();
    Eigen::Index plus = 0, minus = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (s.values[i] == doctest::Approx(1.0)) ++plus;
      else if (s.values[i] == doctest::Approx(-1.0)) ++minus;
    }
    const bool identity = labels.find_first_not_of('I') == std::string::npos;
    if (identity) {
      CHECK(plus == dim);
    } else {
      CHECK(plus == dim / 2);
      CHECK(minus == dim / 2);
    }
  }
}

TEST_CASE("make_diagonal") {
  const auto h = make_diagonal(vec({0, 3, 9}));
  CHECK(h.dim() == 3);
  CHECK(h.integer_spectrum);
  const Spectrum s = eigenvalues(h);
  CHECK(s.values[0] == 0.0);
  CHECK(s.values[1] == 3.0);
  CHECK(s.values[2] == 9.0);

  const auto single = make_diagonal(vec({5}));
  CHECK(single.dim() == 1);

  CHECK_THROWS_AS(make_diagonal(Eigen::VectorXd()), ValidationError);
  CHECK_FALSE(make_diagonal(vec({0.5, 1.0})).integer_spectrum);
}

TEST_CASE("make_hermitian rejects non-Hermitian input") {
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, std::complex<double>(0, 1), std::complex<double>(0, 1), 1.0;
  CHECK_THROWS_AS(make_hermitian(m), ValidationError);
}

TEST_CASE("eigenvalues: trace and Frobenius identities on random operators") {
  // Independent oracle: sum lambda = tr H, sum lambda^2 = ||H||_F^2.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const HermitianOperator h = random_hermitian(8, seed);
    const Spectrum s = eigenvalues(h, 1e-10);
    CHECK(s.values.sum() == doctest::Approx(h.entries.trace().real()).epsilon(1e-9));
    CHECK(s.values.squaredNorm() == doctest::Approx(h.entries.squaredNorm()).epsilon(1e-9));
    for (Eigen::Index i = 1; i < s.size(); ++i) CHECK(s.values[i] >= s.values[i - 1]);
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm_inf(make_pauli_string("ZZ")) == doctest::Approx(1.0));
  CHECK(operator_norm_inf(make_diagonal(vec({-4, 1, 3}))) == doctest::Approx(4.0));
}

TEST_CASE("difference_set basics") {
  SUBCASE("two eigenvalues") {
    const DifferenceSet d = difference_set(eigenvalues(make_pauli_string("Z")));
    CHECK(d.values == std::vector<double>{-2, 0, 2});
    CHECK(d.positive_count() == 1);
    CHECK(d.integral);
  }
  SUBCASE("diag(0,3,9)") {
    const DifferenceSet d = difference_set(eigenvalues(make_diagonal(vec({0, 3, 9}))));
    CHECK(d.values == std::vector<double>{-9, -6, -3, 0, 3, 6, 9});
    CHECK(d.positive_count() == 3);
  }
  SUBCASE("single eigenvalue") {
    const DifferenceSet d = difference_set(eigenvalues(make_diagonal(vec({5}))));
    CHECK(d.values == std::vector<double>{0});
    CHECK(d.positive_count() == 0);
  }
}

TEST_CASE("difference_set float path clusters within tolerance") {
  Spectrum s;
  s.values = vec({0.0, 1.0, 1.0 + 1e-12});
  s.integral = false;
  const DifferenceSet d = difference_set(s, 1e-9);
  CHECK(d.values.size() == 3);  // {-1, 0, 1} after clustering
  CHECK(d.values[2] == doctest::Approx(1.0));
}

TEST_CASE("max_distinct_differences") {
  CHECK(max_distinct_differences(2).tight == 3);
  CHECK(max_distinct_differences(2).unsigned_pairs == 2);
  CHECK(max_distinct_differences(1).tight == 1);
  CHECK(max_distinct_differences(1).unsigned_pairs == 1);
  CHECK(max_distinct_differences(4).tight == 13);
  CHECK(max_distinct_differences(4).unsigned_pairs == 7);

  // kappa = 2 saturating example: enumerate spec {1, 3, 9, 27}.
  const DifferenceSet d = difference_set(eigenvalues(make_diagonal(vec({1, 3, 9, 27}))));
  CHECK(static_cast<long long>(d.values.size()) == max_distinct_differences(4).tight);
}

TEST_CASE("difference set properties on random integer spectra") {
  RngStream rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 1 + static_cast<int>(rng.uniform_int(5));
    Eigen::VectorXd values(dim);
    for (int i = 0; i < dim; ++i) values[i] = static_cast<double>(rng.uniform_int(41)) - 20.0;
    const Spectrum s = eigenvalues(make_diagonal(values));
    const DifferenceSet d = difference_set(s);

    std::set<long long> distinct;
    for (int i = 0; i < dim; ++i) distinct.insert(llround(values[i]));
    const long long D = static_cast<long long>(distinct.size());
    CHECK(static_cast<long long>(d.values.size()) <= max_distinct_differences(D).tight);

    // symmetry and zero membership
    CHECK(d.values[d.positive_count()] == 0.0);
    for (std::size_t i = 0; i < d.values.size(); ++i)
      CHECK(d.values[i] == -d.values[d.values.size() - 1 - i]);
  }
}

TEST_CASE("difference set is shift invariant and scales linearly") {
  RngStream rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd values(4);
    for (int i = 0; i < 4; ++i) values[i] = rng.uniform(-5.0, 5.0);
    Spectrum s;
    s.values = values;
    std::sort(s.values.begin(), s.values.end());
    const DifferenceSet base = difference_set(s, 1e-9);

    Spectrum shifted = s;
    shifted.values.array() += 2.5;
    const DifferenceSet moved = difference_set(shifted, 1e-9);
    REQUIRE(moved.values.size() == base.values.size());
    for (std::size_t i = 0; i < base.values.size(); ++i)
      CHECK(moved.values[i] == doctest::Approx(base.values[i]).epsilon(1e-7));

    const double c = 3.0;
    Spectrum scaled = s;
    scaled.values *= c;
    const DifferenceSet sc = difference_set(scaled, c * 1e-9);
    REQUIRE(sc.values.size() == base.values.size());
    for (std::size_t i = 0; i < base.values.size(); ++i)
      CHECK(sc.values[i] == doctest::Approx(c * base.values[i]).epsilon(1e-7));
  }
}

TEST_CASE("geometric spectra saturate the tight difference-count bound") {
  RngStream rng(123);
  for (int D = 1; D <= 6; ++D) {
    Eigen::VectorXd values(D);
    double p = 1;
    for (int i = 0; i < D; ++i) {
      values[i] = p;
      p *= 3;
    }
    const DifferenceSet d = difference_set(eigenvalues(make_diagonal(values)));
    CHECK(static_cast<long long>(d.values.size()) == max_distinct_differences(D).tight);
  }
}

TEST_SUITE_END();
