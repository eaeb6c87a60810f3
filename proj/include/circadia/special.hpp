#pragma once

namespace circadia::special {

// Regularized incomplete gamma functions P(a,x) and Q(a,x), a > 0, x >= 0.
// Series expansion below x < a+1, Lentz continued fraction above, so the
// smaller of the pair is always the one computed directly.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution: Q(df/2, stat/2).
double chi2_sf(double stat, int df);

// Standard normal tails. The two-sided value is Q(1/2, z^2/2) = erfc(|z|/sqrt2).
double normal_sf(double z);
double normal_two_sided_p(double z);

}  // namespace circadia::special
