#include <doctest.h>

#include <algorithm>
#include <set>

#include "gtpb/encoding.hpp"
#include "gtpb/errors.hpp"
#include "gtpb/rng.hpp"

using namespace gtpb;

namespace {

EncodingStrategy pauli_strategy(int d, const std::vector<int>& counts) {
  EncodingStrategy s;
  s.d = d;
  s.per_coordinate.resize(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < counts[i]; ++j) s.per_coordinate[i].push_back(make_pauli_string("Z"));
  return s;
}

// Brute-force 1-D sumset oracle over exact integers.
std::set<long long> brute_sumset(const std::vector<std::vector<long long>>& gate_values) {
  std::set<long long> acc{0};
  for (const auto& gate : gate_values) {
    std::set<long long> next;
    for (long long a : acc)
      for (long long b : gate) next.insert(a + b);
    acc.swap(next);
  }
  return acc;
}

Eigen::VectorXd diag_values(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("encoding");

TEST_CASE("omega_of_hamiltonian places differences on the coordinate axis") {
  const FrequencySet f = omega_of_hamiltonian(make_pauli_string("Z"), 1, 2);
  CHECK(f.size() == 3);
  CHECK(f.vectors(0, 0) == -2.0);
  CHECK(f.vectors(1, 0) == 0.0);
  CHECK(f.vectors(2, 0) == 2.0);
  CHECK(f.vectors.col(1).cwiseAbs().maxCoeff() == 0.0);

  const FrequencySet g = omega_of_hamiltonian(make_diagonal(diag_values({0, 3})), 2, 2);
  CHECK(g.size() == 3);
  CHECK(g.vectors(0, 1) == -3.0);
  CHECK(g.vectors(2, 1) == 3.0);

  const FrequencySet id = omega_of_hamiltonian(make_pauli_string("I"), 1, 1);
  CHECK(id.size() == 1);
  CHECK(id.vectors(0, 0) == 0.0);

  CHECK_THROWS_AS(omega_of_hamiltonian(make_pauli_string("Z"), 3, 2), ValidationError);
}

TEST_CASE("minkowski_sum basics") {
  const FrequencySet a = omega_of_hamiltonian(make_pauli_string("Z"), 1, 1);
  const FrequencySet f = minkowski_sum(a, a);
  CHECK(f.size() == 5);  // {0, +-2, +-4}
  CHECK(f.vectors(0, 0) == -4.0);
  CHECK(f.vectors(4, 0) == 4.0);

  const FrequencySet with_zero = minkowski_sum(a, zero_frequency_set(1));
  CHECK(with_zero.size() == a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    CHECK(with_zero.vectors(i, 0) == a.vectors(i, 0));

  // cross-coordinate independence: 3 x 3 = 9 vectors
  FrequencySet e1 = omega_of_hamiltonian(make_diagonal(diag_values({0, 1})), 1, 2);
  FrequencySet e2 = omega_of_hamiltonian(make_diagonal(diag_values({0, 1})), 2, 2);
  CHECK(minkowski_sum(e1, e2).size() == 9);

  CHECK_THROWS_AS(minkowski_sum(a, zero_frequency_set(2)), ValidationError);
}

TEST_CASE("minkowski_sum is commutative and associative on the integer path") {
  const FrequencySet a = omega_of_hamiltonian(make_diagonal(diag_values({0, 1, 3})), 1, 1);
  const FrequencySet b = omega_of_hamiltonian(make_pauli_string("Z"), 1, 1);
  const FrequencySet c = omega_of_hamiltonian(make_diagonal(diag_values({0, 5})), 1, 1);

  const FrequencySet ab = minkowski_sum(a, b);
  const FrequencySet ba = minkowski_sum(b, a);
  REQUIRE(ab.size() == ba.size());
  CHECK((ab.vectors - ba.vectors).cwiseAbs().maxCoeff() == 0.0);

  const FrequencySet ab_c = minkowski_sum(ab, c);
  const FrequencySet a_bc = minkowski_sum(a, minkowski_sum(b, c));
  REQUIRE(ab_c.size() == a_bc.size());
  CHECK((ab_c.vectors - a_bc.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("negation closure and zero membership after sums") {
  RngStream rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v1(3), v2(2);
    for (int i = 0; i < 3; ++i) v1[i] = static_cast<double>(rng.uniform_int(9)) - 4.0;
    for (int i = 0; i < 2; ++i) v2[i] = static_cast<double>(rng.uniform_int(9)) - 4.0;
    const FrequencySet f = minkowski_sum(omega_of_hamiltonian(make_diagonal(v1), 1, 1),
                                         omega_of_hamiltonian(make_diagonal(v2), 1, 1));
    CHECK(f.size() == 2 * f.omega_plus.rows() + 1);
    std::set<long long> keys;
    for (Eigen::Index r = 0; r < f.size(); ++r) keys.insert(llround(f.vectors(r, 0)));
    CHECK(keys.count(0) == 1);
    for (long long k : keys) CHECK(keys.count(-k) == 1);
  }
}

TEST_CASE("omega_total product law and pauli exactness") {
  SUBCASE("three Pauli-Z on one coordinate") {
    const FrequencySet f = omega_total(pauli_strategy(1, {3}));
    CHECK(f.size() == 7);
    CHECK(f.vectors(0, 0) == -6.0);
    CHECK(f.vectors(6, 0) == 6.0);
    CHECK(f.K == 6.0);
  }
  SUBCASE("one Pauli-Z per coordinate, d=2") {
    const FrequencySet f = omega_total(pauli_strategy(2, {1, 1}));
    CHECK(f.size() == 9);
    CHECK(f.K_per_coordinate[0] == 2.0);
    CHECK(f.K_per_coordinate[1] == 2.0);
  }
  SUBCASE("empty strategy") {
    const FrequencySet f = omega_total(pauli_strategy(2, {0, 0}));
    CHECK(f.size() == 1);
    CHECK(f.K == 0.0);
  }
  SUBCASE("pauli exactness for N = 1..8") {
    for (int n = 1; n <= 8; ++n)
      CHECK(omega_total(pauli_strategy(1, {n})).size() == 2 * n + 1);
  }
}

TEST_CASE("omega_total obeys the cardinality cap with a coordinate in the message") {
  EncodingStrategy s;
  s.d = 1;
  s.per_coordinate.resize(1);
  for (int j = 0; j < 6; ++j) {
    double scale = std::pow(13.0, j);
    s.per_coordinate[0].push_back(
        make_diagonal(diag_values({0, 1 * scale, 3 * scale, 9 * scale})));
  }
  // 13^6 frequencies >> cap
  CHECK_THROWS_AS(omega_total(s, kDedupTol, 1000), ResourceError);
  try {
    omega_total(s, kDedupTol, 1000);
  } catch (const ResourceError& e) {
    CHECK(std::string(e.what()).find("coordinate 1") != std::string::npos);
  }
}

TEST_CASE("weak_composition_count") {
  CHECK(weak_composition_count(2, 2) == 3);
  CHECK(weak_composition_count(5, 1) == 1);
  CHECK(weak_composition_count(3, 2) == 4);
  CHECK(weak_composition_count(0, 4) == 1);
  CHECK(weak_composition_count(10, 3) == 66);  // binom(12, 10)
  CHECK_THROWS_AS(weak_composition_count(-1, 2), ValidationError);
  CHECK_THROWS_AS(weak_composition_count(2, 0), ValidationError);
  CHECK_THROWS_AS(weak_composition_count(200, 100), NumericError);  // > 2^64
}

TEST_CASE("bound_pauli") {
  CHECK(bound_pauli(3) == 7);
  CHECK(bound_pauli(0) == 1);
  CHECK(bound_pauli(8) == 17);
}

TEST_CASE("bound_repeated against brute-force sumsets") {
  SUBCASE("N=4, T=1") {
    CHECK(bound_repeated(4, 1) == doctest::Approx(9.0));
    const auto exact = brute_sumset(std::vector<std::vector<long long>>(4, {-1, 0, 1}));
    CHECK(static_cast<double>(exact.size()) <= bound_repeated(4, 1));
    CHECK(exact.size() == 9);
  }
  SUBCASE("N=2, T=2 with Delta = {0, +-1, +-3}") {
    CHECK(bound_repeated(2, 2) == doctest::Approx(27.0));
    const auto exact = brute_sumset(std::vector<std::vector<long long>>(2, {-3, -1, 0, 1, 3}));
    CHECK(static_cast<double>(exact.size()) <= 27.0);
  }
  SUBCASE("N=1 any T gives binom(T,1) * (2/T+1)^T >= 2T+1") {
    for (long long T = 1; T <= 5; ++T) {
      const double b = bound_repeated(1, T);
      CHECK(b == doctest::Approx(static_cast<double>(T) * std::pow(2.0 / T + 1.0, T)));
      CHECK(b >= 2 * T + 1);  // one gate realizes exactly 2T+1
    }
  }
}

TEST_CASE("bound_klocal_worstcase") {
  CHECK(bound_klocal_worstcase(1, 1, false) == doctest::Approx(2.0));
  CHECK(bound_klocal_worstcase(1, 1, true) == doctest::Approx(3.0));
  CHECK(bound_klocal_worstcase(0, 3, true) == doctest::Approx(1.0));
  CHECK(bound_klocal_worstcase(2, 2, false) == doctest::Approx(49.0));
}

TEST_CASE("bound_total_amgm") {
  CHECK(bound_total_amgm({3, 3}, 2) == doctest::Approx(9.0));
  CHECK(bound_total_amgm({1, 9}, 2) == doctest::Approx(25.0));
  CHECK(bound_total_amgm({7}, 1) == doctest::Approx(7.0));
  CHECK_THROWS_AS(bound_total_amgm({0.5, 2}, 2), ValidationError);
  CHECK_THROWS_AS(bound_total_amgm({2, 2, 2}, 2), ValidationError);
}

TEST_CASE("soundness: exact cardinalities never exceed the closed-form bounds") {
  RngStream rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng.uniform_int(2));
    EncodingStrategy s;
    s.d = d;
    s.per_coordinate.resize(d);
    std::vector<double> coord_bounds;
    for (int i = 0; i < d; ++i) {
      const int N = 1 + static_cast<int>(rng.uniform_int(6));
      const bool same_hamiltonian = rng.uniform() < 0.5;
      // dim-3 integer spectra give T <= 3 always
      Eigen::VectorXd spec(3);
      auto draw_spec = [&]() {
        for (int k = 0; k < 3; ++k) spec[k] = static_cast<double>(rng.uniform_int(13)) - 6.0;
      };
      draw_spec();
      double bound;
      if (same_hamiltonian) {
        const HermitianOperator h = make_diagonal(spec);
        const int T = difference_set(eigenvalues(h)).positive_count();
        for (int j = 0; j < N; ++j) s.per_coordinate[i].push_back(h);
        bound = T >= 1 ? bound_repeated(N, T) : 1.0;
      } else {
        for (int j = 0; j < N; ++j) {
          draw_spec();
          s.per_coordinate[i].push_back(make_diagonal(spec));
        }
        bound = bound_klocal_worstcase(N, 2, true);  // dim 3 <= 2^2
      }
      coord_bounds.push_back(std::max(1.0, bound));
    }
    const std::vector<long long> coord_exact = per_coordinate_cardinalities(s);
    const FrequencySet f = omega_total(s);
    long long product = 1;
    for (int i = 0; i < d; ++i) {
      CHECK(static_cast<double>(coord_exact[i]) <= coord_bounds[i]);
      product *= coord_exact[i];
    }
    CHECK(f.size() == product);
    CHECK(static_cast<double>(f.size()) <= bound_total_amgm(coord_bounds, d));
  }
}

TEST_CASE("scaling_exponent_fit") {
  const StrategyFamily pauli = [](int N) {
    return std::vector<DifferenceSet>(N, DifferenceSet{{-2, 0, 2}, 0.0, true});
  };
  const double pauli_slope = scaling_exponent_fit(pauli, {2, 4, 8});
  CHECK(pauli_slope == doctest::Approx(1.0).epsilon(0.15));

  const StrategyFamily t2 = [](int N) {
    return std::vector<DifferenceSet>(N, DifferenceSet{{-3, -1, 0, 1, 3}, 0.0, true});
  };
  CHECK(scaling_exponent_fit(t2, {2, 3, 4, 5, 6}) <= 3.1);

  const StrategyFamily constant = [](int N) {
    return std::vector<DifferenceSet>(N, DifferenceSet{{0.0}, 0.0, true});
  };
  CHECK(scaling_exponent_fit(constant, {2, 4, 8}) == doctest::Approx(0.0));

  CHECK_THROWS_AS(scaling_exponent_fit(pauli, {2, 4}), ValidationError);
}

TEST_CASE("float path dedup uses the tolerance grid") {
  std::vector<Eigen::VectorXd> vecs;
  Eigen::VectorXd a(1), b(1), z(1), na(1), nb(1);
  a[0] = 1.0;
  b[0] = 1.0 + 1e-12;  // same cell at tol 1e-9
  z[0] = 0.0;
  na[0] = -1.0;
  nb[0] = -1.0 - 1e-12;
  vecs = {z, a, b, na, nb};
  const FrequencySet f = make_frequency_set(1, vecs, false, 1e-9);
  CHECK(f.size() == 3);
  CHECK_FALSE(f.integral);
  CHECK(f.tolerance == 1e-9);
}

TEST_SUITE_END();
