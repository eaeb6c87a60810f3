#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "circadia/special.hpp"

using namespace circadia;

namespace {

struct Ref {
  double x;
  double value;
};

// 40-digit mpmath references for the regularized upper incomplete gamma.
constexpr Ref kGammaQHalf[] = {
    {1e-8, 0.99988716208366657513}, {1e-4, 0.98871658444415038308},
    {0.01, 0.8875370839817151078},  {0.1, 0.6547208460185770294},
    {0.5, 0.31731050786291410283},  {1.0, 0.15729920705028513066},
    {1.5, 0.083264516663550401855}, {2.0, 0.045500263896358414401},
    {3.0, 0.014305878435429639526}, {5.0, 0.0015654022580025496775},
    {7.815, 0.00007702287216465514155}, {10.0, 7.7442164310440836377e-6},
    {20.0, 2.5396285894708649707e-10},  {40.0, 3.7440973842028987636e-19},
};

constexpr Ref kGammaQThreeHalves[] = {
    {1e-8, 0.99999999999924774723}, {1e-4, 0.99999924779235549108},
    {0.01, 0.99925224466060880211}, {0.1, 0.97758929776164939951},
    {0.5, 0.80125195690120080243},  {1.0, 0.572406704470879834},
    {1.5, 0.39162517627108895548},  {2.0, 0.2614641299491106222},
    {3.0, 0.11161022509471255998},  {5.0, 0.018566135463043233303},
    {7.815, 0.0013502567169802402733}, {10.0, 0.0001697424355528264308},
    {20.0, 1.0655090334255860815e-8},  {40.0, 3.0692774861724171289e-17},
};

// Two-sided normal p = erfc(|z|/sqrt 2).
constexpr Ref kTwoSided[] = {
    {0.5, 0.61707507745197379272}, {1.0, 0.31731050786291410283},
    {1.959964, 0.049999998192884808605}, {2.0, 0.045500263896358414401},
    {3.0, 0.0026997960632601890533}, {5.0, 5.7330314375838782335e-7},
    {8.0, 1.2441921148543568247e-15},
};

}  // namespace

TEST_CASE("gamma_q matches high-precision references to 1e-10 relative") {
  for (const Ref& r : kGammaQHalf)
    CHECK(std::fabs(special::gamma_q(0.5, r.x) - r.value) <= 1e-10 * r.value);
  for (const Ref& r : kGammaQThreeHalves)
    CHECK(std::fabs(special::gamma_q(1.5, r.x) - r.value) <= 1e-10 * r.value);
}

TEST_CASE("gamma_p and gamma_q are complementary") {
  for (double a : {0.5, 1.0, 1.5, 4.0})
    for (double x : {1e-6, 0.3, 1.0, 2.5, 9.0})
      CHECK(special::gamma_p(a, x) + special::gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal two-sided p matches erfc references") {
  for (const Ref& r : kTwoSided) {
    CHECK(std::fabs(special::normal_two_sided_p(r.x) - r.value) <= 1e-10 * r.value);
    CHECK(special::normal_two_sided_p(-r.x) == special::normal_two_sided_p(r.x));
  }
  CHECK(special::normal_two_sided_p(0.0) == 1.0);
  // z at the conventional 5% two-sided point.
  CHECK(std::fabs(special::normal_two_sided_p(1.959964) - 0.05) < 1e-4);
}

TEST_CASE("normal_sf basic identities") {
  CHECK(special::normal_sf(0.0) == doctest::Approx(0.5));
  CHECK(special::normal_sf(1.959964) == doctest::Approx(0.024999999096442404).epsilon(1e-10));
  CHECK(special::normal_sf(-1.0) + special::normal_sf(1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi-square upper tail, df 3") {
  CHECK(std::fabs(special::chi2_sf(7.815, 3) - 0.050) < 5e-4);
  CHECK(std::fabs(special::chi2_sf(0.5, 3) - 0.919) < 1e-3);
  CHECK(special::chi2_sf(7.815, 3) ==
        doctest::Approx(0.049993902974883895767).epsilon(1e-12));
  CHECK(special::chi2_sf(0.5, 3) == doctest::Approx(0.91889141165467585936).epsilon(1e-12));
  CHECK(special::chi2_sf(0.0, 3) == 1.0);
}
