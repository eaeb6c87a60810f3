#pragma once

#include <stdexcept>
#include <vector>

#include "circadia/types.hpp"

namespace circadia {

struct LmmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LmmFit {
  Vector beta;
  Vector se;
  double sigma_u2 = 0;  // random-intercept variance
  double sigma_e2 = 0;  // residual variance
  double lambda = 0;    // sigma_u2 / sigma_e2
  double loglik = 0;    // maximized ML log-likelihood
  int n_obs = 0;
  int n_groups = 0;
  bool converged = false;
};

// Maximum-likelihood random-intercept model y = X beta + u_g + eps.
//
// For a fixed variance ratio lambda the per-group covariance is
// sigma_e^2 (I + lambda 1 1'), whose inverse is I - lambda/(1+lambda n_g) 1 1'
// and whose log determinant is log(1 + lambda n_g), so beta and sigma_e^2
// profile out in closed form from group-level sufficient statistics. What
// remains is a 1-D concave search over lambda >= 0.
class ProfiledLmm {
 public:
  // Rows must be ordered by group; group_sizes partitions them. Every group
  // must be non-empty and X must have full column rank.
  ProfiledLmm(const Matrix& X, const Vector& y, const std::vector<int>& group_sizes);

  double loglik_at(double lambda) const;
  Vector beta_at(double lambda) const;
  double sigma_e2_at(double lambda) const;

  // Bracketed golden-section maximization over lambda in [0, 1e6] after a
  // logarithmic probe pass; tolerance 1e-9 in lambda, boundary at 0 retained
  // whenever it is not strictly beaten.
  LmmFit fit() const;

  int n_obs() const { return n_; }
  int n_groups() const { return static_cast<int>(group_sizes_.size()); }

 private:
  struct Profile {
    Vector beta;
    double sigma_e2 = 0;
    double loglik = 0;
    Matrix gls_information;  // X' V~^-1 X, for standard errors
  };
  Profile profile_at(double lambda) const;

  int n_ = 0;
  int p_ = 0;
  std::vector<int> group_sizes_;
  Matrix xtx_;                // X'X
  Vector xty_;                // X'y
  double yty_ = 0;            // y'y
  Matrix group_x_sums_;       // p x G, column g = X_g' 1
  Vector group_y_sums_;       // G, element g = y_g' 1
};

LmmFit fit_lmm_ml(const Matrix& X, const Vector& y, const std::vector<int>& group_sizes);

struct WaldTest {
  double z = 0;
  double p = 1;
  bool defined = true;  // false when se == 0
};
std::vector<WaldTest> wald_tests(const LmmFit& fit);

struct LrtResult {
  double stat = 0;
  int df = 0;
  double p = 1;
};

// Likelihood-ratio test of nested ML fits on identical rows; stat clamped at
// zero, p from the chi-square upper tail.
LrtResult lrt(const LmmFit& small_fit, const LmmFit& big_fit);

}  // namespace circadia
