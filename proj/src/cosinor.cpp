#include "circadia/cosinor.hpp"

#include <cmath>

#include "circadia/circular.hpp"

namespace circadia {

CosinorFit cosinor_fit(const Vector& t_minutes, const Vector& y, double period_minutes,
                       double phase_reference_mod) {
  CosinorFit fit;
  const Eigen::Index n = t_minutes.size();
  fit.n_points = static_cast<int>(n);
  if (n < 3 || y.size() != n) return fit;

  const double w = kTwoPi / period_minutes;
  Matrix X(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = std::cos(w * t_minutes[i]);
    X(i, 2) = std::sin(w * t_minutes[i]);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) return fit;  // all samples at too few distinct phases

  Vector beta = qr.solve(y);
  fit.mesor = beta[0];
  fit.amplitude = std::hypot(beta[1], beta[2]);
  fit.residual_sse = (y - X * beta).squaredNorm();
  fit.valid = true;

  if (fit.amplitude < 1e-9) {
    fit.acrophase_degenerate = true;
    return fit;
  }
  // Peak of M + A*cos(wt - phi) sits at t = phi/w (+ period cycles).
  const double phi = std::atan2(beta[2], beta[1]);
  fit.acrophase_mod = wrap_minutes(phase_reference_mod + phi / w);
  return fit;
}

CosinorFit cosinor_fit_window(const MinuteSeries& hr, std::int64_t start_day,
                              double period_minutes) {
  const std::int64_t first = start_day * kMinutesPerDay;
  const std::int64_t total = static_cast<std::int64_t>(kWindowDays) * kMinutesPerDay;
  std::vector<double> ts, ys;
  ts.reserve(static_cast<std::size_t>(total));
  ys.reserve(static_cast<std::size_t>(total));
  for (std::int64_t m = 0; m < total; ++m) {
    double v = hr.at_minute(first + m);
    if (is_missing(v)) continue;
    ts.push_back(static_cast<double>(m));
    ys.push_back(v);
  }
  Vector t = Eigen::Map<Vector>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  Vector y = Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return cosinor_fit(t, y, period_minutes, /*phase_reference_mod=*/0);
}

std::optional<double> acrophase_delta_minutes(const CosinorFit& a, const CosinorFit& b) {
  if (!a.valid || !b.valid || a.acrophase_degenerate || b.acrophase_degenerate)
    return std::nullopt;
  return circular_delta_minutes(a.acrophase_mod, b.acrophase_mod);
}

}  // namespace circadia
