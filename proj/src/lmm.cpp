#include "circadia/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circadia/special.hpp"

namespace circadia {

namespace {
constexpr double kLambdaMax = 1e6;
constexpr double kLambdaTol = 1e-9;
constexpr double kLogTwoPi = 1.8378770664093454836;
}  // namespace

ProfiledLmm::ProfiledLmm(const Matrix& X, const Vector& y, const std::vector<int>& group_sizes)
    : n_(static_cast<int>(X.rows())), p_(static_cast<int>(X.cols())), group_sizes_(group_sizes) {
  if (y.size() != X.rows()) throw LmmError("fit_lmm_ml: y length != rows(X)");
  int total = 0;
  for (int g : group_sizes_) {
    if (g <= 0) throw LmmError("fit_lmm_ml: empty group");
    total += g;
  }
  if (total != n_) throw LmmError("fit_lmm_ml: group sizes do not partition the rows");
  if (n_ <= p_ + 2) throw LmmError("fit_lmm_ml: need n_obs > columns + 2");

  xtx_ = X.transpose() * X;
  xty_ = X.transpose() * y;
  yty_ = y.squaredNorm();

  const int G = static_cast<int>(group_sizes_.size());
  group_x_sums_.resize(p_, G);
  group_y_sums_.resize(G);
  int row = 0;
  for (int g = 0; g < G; ++g) {
    const int ng = group_sizes_[static_cast<std::size_t>(g)];
    group_x_sums_.col(g) = X.middleRows(row, ng).colwise().sum().transpose();
    group_y_sums_[g] = y.segment(row, ng).sum();
    row += ng;
  }
}

ProfiledLmm::Profile ProfiledLmm::profile_at(double lambda) const {
  const int G = static_cast<int>(group_sizes_.size());
  Matrix M = xtx_;
  Vector v = xty_;
  double yy = yty_;
  double logdet = 0;
  for (int g = 0; g < G; ++g) {
    const double ng = static_cast<double>(group_sizes_[static_cast<std::size_t>(g)]);
    const double c = lambda / (1.0 + lambda * ng);
    M.noalias() -= c * group_x_sums_.col(g) * group_x_sums_.col(g).transpose();
    v.noalias() -= c * group_y_sums_[g] * group_x_sums_.col(g);
    yy -= c * group_y_sums_[g] * group_y_sums_[g];
    logdet += std::log1p(lambda * ng);
  }

  Profile prof;
  Eigen::LDLT<Matrix> ldlt(M);
  prof.beta = ldlt.solve(v);
  double rss = yy - 2.0 * prof.beta.dot(v) + prof.beta.dot(M * prof.beta);
  rss = std::max(rss, 1e-300);
  prof.sigma_e2 = rss / n_;
  prof.loglik = -0.5 * n_ * (kLogTwoPi + std::log(prof.sigma_e2) + 1.0) - 0.5 * logdet;
  prof.gls_information = M;
  return prof;
}

double ProfiledLmm::loglik_at(double lambda) const { return profile_at(lambda).loglik; }
Vector ProfiledLmm::beta_at(double lambda) const { return profile_at(lambda).beta; }
double ProfiledLmm::sigma_e2_at(double lambda) const { return profile_at(lambda).sigma_e2; }

LmmFit ProfiledLmm::fit() const {
  // Logarithmic probe pass; ties keep the smaller lambda so an unidentified
  // ratio pins to the OLS boundary.
  std::vector<double> probes = {0.0};
  for (int k = -8; k <= 6; ++k) probes.push_back(std::pow(10.0, k));
  std::size_t best = 0;
  double best_ll = loglik_at(probes[0]);
  for (std::size_t i = 1; i < probes.size(); ++i) {
    double ll = loglik_at(probes[i]);
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }

  double lo = best > 0 ? probes[best - 1] : 0.0;
  double hi = best + 1 < probes.size() ? probes[best + 1] : kLambdaMax;

  // Golden-section search (concave objective).
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = loglik_at(x1);
  double f2 = loglik_at(x2);
  while (b - a > kLambdaTol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = loglik_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = loglik_at(x2);
    }
  }
  double lambda = 0.5 * (a + b);
  double ll = loglik_at(lambda);

  // Explicit boundary handling: keep 0 unless the interior strictly wins.
  double ll0 = loglik_at(0.0);
  if (ll0 >= ll) {
    lambda = 0.0;
    ll = ll0;
  }

  Profile prof = profile_at(lambda);
  LmmFit fit;
  fit.beta = prof.beta;
  fit.lambda = lambda;
  fit.sigma_e2 = prof.sigma_e2;
  fit.sigma_u2 = lambda * prof.sigma_e2;
  fit.loglik = prof.loglik;
  fit.n_obs = n_;
  fit.n_groups = n_groups();
  // Cov(beta) = sigma_e2 * (X' V~^-1 X)^-1 at the optimum.
  Eigen::LDLT<Matrix> ldlt(prof.gls_information);
  Matrix cov = prof.sigma_e2 * ldlt.solve(Matrix::Identity(p_, p_));
  fit.se.resize(p_);
  for (int j = 0; j < p_; ++j) fit.se[j] = std::sqrt(std::max(cov(j, j), 0.0));
  fit.converged = std::isfinite(fit.loglik) && fit.beta.allFinite() && fit.se.allFinite();
  return fit;
}

LmmFit fit_lmm_ml(const Matrix& X, const Vector& y, const std::vector<int>& group_sizes) {
  return ProfiledLmm(X, y, group_sizes).fit();
}

std::vector<WaldTest> wald_tests(const LmmFit& fit) {
  if (!fit.converged) throw LmmError("wald_tests: fit did not converge");
  std::vector<WaldTest> out(static_cast<std::size_t>(fit.beta.size()));
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    WaldTest& t = out[static_cast<std::size_t>(j)];
    if (fit.se[j] <= 0) {
      t.defined = false;
      t.z = 0;
      t.p = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    t.z = fit.beta[j] / fit.se[j];
    t.p = special::normal_two_sided_p(t.z);
  }
  return out;
}

LrtResult lrt(const LmmFit& small_fit, const LmmFit& big_fit) {
  if (small_fit.n_obs != big_fit.n_obs)
    throw LmmError("lrt: fits use different row sets");
  const int df = static_cast<int>(big_fit.beta.size() - small_fit.beta.size());
  if (df <= 0) throw LmmError("lrt: models are not nested (no added coefficients)");
  LrtResult r;
  r.df = df;
  r.stat = std::max(0.0, 2.0 * (big_fit.loglik - small_fit.loglik));
  r.p = special::chi2_sf(r.stat, df);
  return r;
}

}  // namespace circadia
