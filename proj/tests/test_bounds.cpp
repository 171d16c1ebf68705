#include "towerlab/bounds.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace towerlab;
using bounds::lmd_bounds;
using bounds::make_report;

TEST_CASE("LMD bound instantiations") {
  auto b1 = lmd_bounds(4, 1, 9);
  CHECK(b1.L1 == Rat(9, 10));
  CHECK(b1.L2.exact);
  CHECK(b1.L2.exact_value == 0);  // q^{g-1} - 1 degenerates
  CHECK_FALSE(b1.L3.has_value());  // g = sqrt(q)/2, not strictly above

  auto b2 = lmd_bounds(16, 2, 33);
  CHECK(b2.L1 == Rat(3600, 51));
  CHECK(b2.L2.exact);
  CHECK(b2.L2.exact_value == 216);  // 9 * (15/2) * (48/15)
  CHECK_FALSE(b2.L3.has_value());

  auto b3 = lmd_bounds(4, 3, 1);
  REQUIRE(b3.L3.has_value());
  CHECK(*b3.L3 == Rat(189, 19));

  CHECK_THROWS_AS(lmd_bounds(4, 0, 9), std::domain_error);
}

TEST_CASE("L2 over a non-square field order is flagged inexact") {
  auto b = lmd_bounds(2, 3, 5);
  CHECK_FALSE(b.L2.exact);
  // (sqrt(2)-1)^2 * (2^2-1)/3 * (5+1)/1 = (3-2 sqrt(2)) * 6
  const Real expected = (3 - 2 * boost::multiprecision::sqrt(Real(2))) * 6;
  CHECK(boost::multiprecision::abs(b.L2.value - expected) < Real("1e-40"));
}

TEST_CASE("corollary comparison h > q^g") {
  CHECK(bounds::corollary_check(625, 16, 2));  // 625 > 256
  CHECK(bounds::corollary_check(9, 4, 1));     // 9 > 4
  CHECK_FALSE(bounds::corollary_check(256, 16, 2));
  CHECK_THROWS_AS(bounds::corollary_check(1, 2, 0), std::domain_error);
}

TEST_CASE("reports and ratios") {
  auto herm = make_report(4, 1, 9, 9);
  REQUIRE(herm.h_over_L1.has_value());
  CHECK(*herm.h_over_L1 == 10);
  CHECK_FALSE(herm.h_over_L2.has_value());  // L2 = 0: not applicable
  CHECK_FALSE(herm.hL2_ge_2.has_value());
  CHECK(herm.h_gt_qg);

  auto g2 = make_report(16, 2, 33, 625);
  REQUIRE(g2.h_over_L2.has_value());
  CHECK(*g2.h_over_L2 == Rat(625, 216));
  REQUIRE(g2.hL2_ge_2.has_value());
  CHECK(*g2.hL2_ge_2);
  CHECK(g2.h_gt_qg);

  auto rows = bounds::ratio_table({herm, g2});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].trend_L1 == '?');
  CHECK(rows[1].trend_L1 == '-');  // 625/(3600/51) = 8.85... below 10
  CHECK_FALSE(rows[0].h_over_L2.has_value());
  CHECK_THROWS_AS(bounds::ratio_table({}), std::invalid_argument);
}

TEST_CASE("h dominates every applicable bound on exactly computed curves") {
  struct Curve {
    Int q;
    unsigned g;
    Int B1;
    Int h;
  };
  // (q, g, B1, h) for the exactly computed curves in this artifact:
  // descended Hermitian over F_2, Hermitian over F_4, genus-2 maximal over F_16
  for (const Curve& c : {Curve{2, 1, 3, 3}, Curve{4, 1, 9, 9}, Curve{16, 2, 33, 625}}) {
    auto rep = make_report(c.q, c.g, c.B1, c.h);
    REQUIRE(Rat(c.h) >= rep.L.L1);
    if (rep.L.L3) REQUIRE(Rat(c.h) >= *rep.L.L3);
    if (rep.L.L2.exact) REQUIRE(Rat(c.h) >= rep.L.L2.exact_value);
  }
}

TEST_CASE("proof constant stays below 0.4 for q up to 10^4") {
  Real worst = 0;
  for (std::uint32_t q = 2; q <= 10000; ++q) {
    const Real v = bounds::l2_proof_constant(q);
    REQUIRE(v < Real("0.4"));
    if (v > worst) worst = v;
  }
  CHECK(worst > Real("0.3"));  // the bound is tight-ish near q = 6
}

TEST_CASE("L1 < q^g/(g+1) exactly") {
  for (Int q : {Int(2), Int(3), Int(4), Int(9), Int(16), Int(101)}) {
    for (unsigned g = 1; g <= 12; ++g) {
      auto b = lmd_bounds(q, g, 1);
      REQUIRE(b.L1 < Rat(int_pow(q, g), Int(g) + 1));
    }
  }
}
