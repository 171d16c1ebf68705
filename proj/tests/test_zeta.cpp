#include "towerlab/zeta.hpp"

#include "towerlab/census.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

using namespace towerlab;
using zeta::LPolynomial;

namespace {

// Frozen oracles: counts generated from hand-expanded L-polynomials.
// Hermitian over F_4: L(t) = (1+2t)^2, N_m = 4^m + 1 - 2(-2)^m.
std::vector<Int> hermitian_counts(unsigned M) {
  std::vector<Int> N;
  for (unsigned m = 1; m <= M; ++m) {
    Int sign = (m % 2) ? -int_pow(2, m) : int_pow(2, m);
    N.push_back(int_pow(4, m) + 1 - 2 * sign);
  }
  return N;
}

// Maximal genus-2 curve over F_16: L(t) = (1+4t)^4, N_m = 16^m + 1 - 4(-4)^m.
std::vector<Int> genus2_counts(unsigned M) {
  std::vector<Int> N;
  for (unsigned m = 1; m <= M; ++m) {
    Int sign = (m % 2) ? -int_pow(4, m) : int_pow(4, m);
    N.push_back(int_pow(16, m) + 1 - 4 * sign);
  }
  return N;
}

std::vector<Int> rational_counts(const Int& q, unsigned M) {
  std::vector<Int> N;
  for (unsigned m = 1; m <= M; ++m) N.push_back(int_pow(q, m) + 1);
  return N;
}

}  // namespace

TEST_CASE("genus inference") {
  CHECK(zeta::infer_genus(rational_counts(2, 4), 2) == 0);
  CHECK(zeta::infer_genus(rational_counts(16, 2), 16) == 0);
  CHECK(zeta::infer_genus(hermitian_counts(4), 4) == 1);
  CHECK(zeta::infer_genus(genus2_counts(6), 16) == 2);
  // frozen spot values used throughout the suite
  CHECK(hermitian_counts(4) == std::vector<Int>{9, 9, 81, 225});
  CHECK(genus2_counts(2) == std::vector<Int>{33, 193});
}

TEST_CASE("genus inference is stable under more counts") {
  CHECK(zeta::infer_genus(hermitian_counts(6), 4) == 1);
  CHECK(zeta::infer_genus(hermitian_counts(10), 4) == 1);
  CHECK(zeta::infer_genus(genus2_counts(8), 16) == 2);
}

TEST_CASE("genus inference fails cleanly on insufficient or corrupt data") {
  CHECK_THROWS_AS(zeta::infer_genus(genus2_counts(4), 16), std::domain_error);  // needs N_5, N_6
  auto bad = hermitian_counts(4);
  bad[3] += 1;
  CHECK_THROWS_AS(zeta::infer_genus(bad, 4), std::domain_error);
  CHECK_THROWS_AS(zeta::infer_genus({Int(9)}, 4), std::invalid_argument);
}

TEST_CASE("L-polynomial from counts") {
  auto L0 = zeta::lpoly_from_counts({}, 2, 0);
  CHECK(L0.a == std::vector<Int>{1});

  auto L1 = zeta::lpoly_from_counts(hermitian_counts(2), 4, 1);
  CHECK(L1.a == std::vector<Int>{1, 4, 4});

  auto L2 = zeta::lpoly_from_counts(genus2_counts(4), 16, 2);
  CHECK(L2.a == std::vector<Int>{1, 16, 96, 256, 256});  // (1+4t)^4

  // inconsistent counts break the functional equation
  CHECK_THROWS_AS(zeta::lpoly_from_counts({Int(33), Int(194), Int(4353), Int(64513)}, 16, 2),
                  std::domain_error);
}

TEST_CASE("predicted counts reproduce the oracle") {
  auto L = zeta::lpoly_from_counts(genus2_counts(4), 16, 2);
  CHECK(zeta::predicted_counts(L, 8) == genus2_counts(8));
}

TEST_CASE("class numbers") {
  CHECK(zeta::class_number(zeta::lpoly_from_counts({}, 2, 0)) == 1);
  CHECK(zeta::class_number(zeta::lpoly_from_counts(hermitian_counts(2), 4, 1)) == 9);
  CHECK(zeta::class_number(zeta::lpoly_from_counts(genus2_counts(4), 16, 2)) == 625);  // 5^4
}

TEST_CASE("effective divisor counts") {
  auto L0 = zeta::lpoly_from_counts({}, 2, 0);
  auto A0 = zeta::effective_divisors(L0, 10);
  for (unsigned n = 0; n <= 10; ++n) REQUIRE(A0[n] == int_pow(2, n + 1) - 1);

  auto L1 = zeta::lpoly_from_counts(hermitian_counts(2), 4, 1);
  auto A1 = zeta::effective_divisors(L1, 12);
  CHECK(A1[0] == 1);
  CHECK(A1[1] == 9);  // equals B_1
  for (unsigned n = 1; n <= 12; ++n) REQUIRE(A1[n] == 3 * (int_pow(4, n) - 1));
}

TEST_CASE("A_1 equals B_1 from the census of the same counts") {
  for (auto [N, q] : {std::pair{hermitian_counts(4), Int(4)}, {genus2_counts(6), Int(16)}}) {
    const unsigned g = zeta::infer_genus(N, q);
    auto L = zeta::lpoly_from_counts(std::vector<Int>(N.begin(), N.begin() + 2 * g), q, g);
    std::map<unsigned, Int> Nmap;
    for (unsigned m = 1; m <= N.size(); ++m) Nmap[m] = N[m - 1];
    auto B = census::places_from_counts(Nmap, static_cast<unsigned>(N.size()));
    REQUIRE(zeta::effective_divisors(L, 1)[1] == B.at(1));
  }
}

TEST_CASE("tail formula agrees with the series expansion") {
  for (auto L : {zeta::lpoly_from_counts(hermitian_counts(2), 4, 1),
                 zeta::lpoly_from_counts(genus2_counts(4), 16, 2),
                 zeta::lpoly_from_counts({}, 2, 0)}) {
    auto A = zeta::effective_divisors(L, 2 * L.g + 10);
    for (unsigned n = (L.g == 0 ? 0 : 2 * L.g - 1); n <= 2 * L.g + 10; ++n)
      REQUIRE(zeta::tail_formula(L, n) == A[n]);
  }
}

TEST_CASE("validation catches corrupted polynomials") {
  auto L = zeta::lpoly_from_counts(hermitian_counts(2), 4, 1);
  zeta::validate(L);
  auto broken = L;
  broken.a[2] = 5;
  CHECK_THROWS_AS(zeta::validate(broken), std::domain_error);
  auto wrong_a0 = L;
  wrong_a0.a[0] = 2;
  CHECK_THROWS_AS(zeta::validate(wrong_a0), std::invalid_argument);
}

TEST_CASE("reciprocal roots have modulus sqrt(q)") {
  CHECK(zeta::max_root_modulus_deviation(zeta::lpoly_from_counts(hermitian_counts(2), 4, 1)) <
        1e-9);
  CHECK(zeta::max_root_modulus_deviation(zeta::lpoly_from_counts(genus2_counts(4), 16, 2)) <
        1e-9);
  CHECK(zeta::max_root_modulus_deviation(zeta::lpoly_from_counts({}, 2, 0)) == 0.0);
}

TEST_CASE("Hasse-Weil interval holds") {
  for (auto [L, q] : {std::pair{zeta::lpoly_from_counts(hermitian_counts(2), 4, 1), 4.0},
                      std::pair{zeta::lpoly_from_counts(genus2_counts(4), 16, 2), 16.0}}) {
    const auto N1 = zeta::predicted_counts(L, 1)[0];
    const double excess = std::abs(static_cast<double>(N1 - Int(static_cast<long>(q)) - 1));
    REQUIRE(excess <= 2.0 * L.g * std::sqrt(q) + 1e-9);
  }
}
