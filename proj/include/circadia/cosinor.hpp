#pragma once

#include <cstdint>
#include <optional>

#include "circadia/ingest.hpp"
#include "circadia/types.hpp"

namespace circadia {

struct CosinorFit {
  double mesor = 0;          // bpm
  double amplitude = 0;      // bpm, >= 0
  double acrophase_mod = 0;  // minutes-of-day of the fitted maximum, [0, 1440)
  double residual_sse = 0;
  int n_points = 0;
  bool valid = false;               // false: rank-deficient or too few points
  bool acrophase_degenerate = false;  // amplitude below 1e-9 bpm
};

// Ordinary least squares of y = M + b*cos(wt) + c*sin(wt), w = 2pi/period,
// over the given sample times (minutes). Solved by rank-revealing QR on the
// n x 3 design. `phase_reference_mod` is the minute-of-day at t = 0, so the
// reported acrophase is a local clock minute.
CosinorFit cosinor_fit(const Vector& t_minutes, const Vector& y, double period_minutes = 1440,
                       double phase_reference_mod = 0);

// Fits the non-missing minutes of a window's HR grid; t runs from the window
// start, which extract places at local midnight.
CosinorFit cosinor_fit_window(const MinuteSeries& hr, std::int64_t start_day,
                              double period_minutes = 1440);

// Signed circular acrophase difference in minutes, range (-720, 720].
// Requires two valid, non-degenerate fits.
std::optional<double> acrophase_delta_minutes(const CosinorFit& a, const CosinorFit& b);

}  // namespace circadia
