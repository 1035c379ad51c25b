#include "freqstab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "freqstab/errors.hpp"
#include "freqstab/estimator.hpp"

namespace freqstab {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

double mean_over(const TimeSeries& ts, std::size_t first, std::size_t last) {
  if (last <= first) return 0.0;
  double s = 0.0;
  for (std::size_t i = first; i < last; ++i) s += ts.values[i];
  return s / static_cast<double>(last - first);
}

// Samples strictly before t.
std::size_t count_before(const TimeSeries& ts, double t) {
  return static_cast<std::size_t>(
      std::lower_bound(ts.times.begin(), ts.times.end(), t) - ts.times.begin());
}

struct ShortTermFit {
  double level = 0.0;
  double fault_duration = 0.0;
};

// Looks for the power falling back near zero inside the watch window.
std::optional<ShortTermFit> short_term_return(const TimeSeries& v,
                                              std::size_t onset_idx,
                                              double watch_end,
                                              double tolerance,
                                              double recovery_rate) {
  const std::size_t n = v.size();
  std::size_t peak_idx = onset_idx;
  for (std::size_t i = onset_idx; i < n && v.times[i] <= watch_end; ++i) {
    if (v.values[i] > v.values[peak_idx]) peak_idx = i;
  }
  const double peak = v.values[peak_idx];
  if (!(peak > 0.0)) return std::nullopt;

  std::size_t back = n;
  for (std::size_t i = peak_idx + 1; i + 1 < n && v.times[i] <= watch_end; ++i) {
    if (std::abs(v.values[i]) <= tolerance * peak &&
        std::abs(v.values[i + 1]) <= tolerance * peak) {
      back = i;
      break;
    }
  }
  if (back == n) return std::nullopt;

  // Plateau: from onset until the power first drops below half the peak.
  std::size_t drop = onset_idx;
  while (drop < back && v.values[drop] >= 0.5 * peak) ++drop;
  std::vector<double> plateau(v.values.begin() + onset_idx,
                              v.values.begin() + drop);
  ShortTermFit out;
  out.level = plateau.empty() ? peak : median(plateau);

  // Half-level crossing on the recovery flank, then step back half the
  // recovery time to land on the clearance instant.
  const double half = 0.5 * out.level;
  double t_half = v.times[back];
  for (std::size_t i = std::max(drop, onset_idx + 1); i <= back; ++i) {
    if (v.values[i] <= half) {
      const double a = v.values[i - 1], b = v.values[i];
      const double w = a != b ? (a - half) / (a - b) : 0.0;
      t_half = v.times[i - 1] + w * (v.times[i] - v.times[i - 1]);
      break;
    }
  }
  const double ramp_half = recovery_rate > 0.0 ? half / recovery_rate : 0.0;
  out.fault_duration = std::max(0.0, t_half - v.times[onset_idx] - ramp_half);
  return out;
}

}  // namespace

double estimate_noise_sigma(const TimeSeries& trace) {
  if (trace.size() < 3) return 0.0;
  std::vector<double> d(trace.size() - 1);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    d[i] = trace.values[i + 1] - trace.values[i];
  }
  const double m = median(d);
  for (auto& x : d) x = std::abs(x - m);
  // Differencing doubles the variance of white noise.
  return 1.4826 * median(std::move(d)) / std::sqrt(2.0);
}

double default_noise_floor(const TimeSeries& dP, const Thresholds& th,
                           const ClassifierOptions& opt) {
  return std::max(th.power_threshold / 10.0,
                  opt.noise_sigma_factor * estimate_noise_sigma(dP));
}

double detect_onset(const TimeSeries& dP, double noise_floor) {
  if (dP.empty()) {
    throw Error(ErrorCode::InsufficientSamples, "onset detection: empty trace");
  }
  for (std::size_t i = 0; i + 1 < dP.size(); ++i) {
    if (std::abs(dP.values[i]) > noise_floor &&
        std::abs(dP.values[i + 1]) > noise_floor) {
      return dP.times[i];
    }
  }
  std::ostringstream os;
  os << "no sustained excursion above " << noise_floor << " MW";
  throw Error(ErrorCode::NoOnsetFound, os.str());
}

std::optional<DisturbanceEstimate> classify(const TimeSeries& dP_in,
                                            const TimeSeries& df,
                                            const Thresholds& th,
                                            const SystemParameters& p,
                                            const ClassifierOptions& opt) {
  dP_in.validate();
  if (!df.empty()) df.validate();
  th.validate();

  DisturbanceEstimate est;
  est.noise_floor = opt.noise_floor.value_or(default_noise_floor(dP_in, th, opt));
  est.onset_time = detect_onset(dP_in, est.noise_floor);

  // Work on the deficit orientation so the tests below read one way.
  TimeSeries dP = dP_in;
  const std::size_t onset_idx = count_before(dP, est.onset_time);
  if (dP.values[onset_idx] < 0.0) {
    for (auto& x : dP.values) x = -x;
  }

  const double T = th.distribution_time;
  const std::size_t pre_first = count_before(dP, est.onset_time - T);
  const double pre_mean = mean_over(dP, pre_first, onset_idx);
  const auto [post_first, post_last] =
      dP.index_range(est.onset_time, est.onset_time + T);
  if (post_last < post_first + 3) {
    throw Error(ErrorCode::InsufficientSamples,
                "classification: fewer than 3 samples after onset");
  }
  const LineFit fit = fit_line(
      std::span(dP.times).subspan(post_first, post_last - post_first),
      std::span(dP.values).subspan(post_first, post_last - post_first));
  est.fit_slope = fit.slope;
  est.fit_residual_ratio = fit.residual_ratio();

  const bool time_varying =
      std::abs(fit.slope) > opt.slope_significance * th.critical_slope &&
      fit.residual_ratio() < opt.max_residual_ratio;
  const bool rising = time_varying && fit.slope > 0.0;

  bool crossed = false;
  double crossing = est.onset_time;
  est.inception_time = est.onset_time;
  if (rising) {
    crossed = fit.slope * T > th.power_threshold;
    est.inception_time = std::min(fit.zero_crossing(), est.onset_time);
    crossing = est.inception_time + th.power_threshold / fit.slope;
  } else {
    double level = 0.0;
    if (time_varying) {
      level = *std::max_element(dP.values.begin() + post_first,
                                dP.values.begin() + post_last);
    } else {
      level = mean_over(dP, post_first, post_last);
    }
    crossed = level - pre_mean > th.power_threshold;
    for (std::size_t i = post_first; i < post_last; ++i) {
      if (dP.values[i] - pre_mean > th.power_threshold) {
        crossing = dP.times[i];
        break;
      }
    }
    est.dP0 = level - pre_mean;
  }

  const double df_cross =
      df.empty() ? -1.0 : first_crossing(df.times, df.values, th.frequency_threshold);

  if (crossed) {
    est.threshold_crossing = crossing;
    if (rising) {
      est.label = DisturbanceLabel::SecondSlope;
      est.k_s = fit.slope;
    } else {
      est.label = DisturbanceLabel::Step;
      if (auto st = short_term_return(dP, onset_idx,
                                      est.onset_time + opt.watch_window,
                                      opt.return_tolerance, p.recovery_rate)) {
        est.label = DisturbanceLabel::ShortTerm;
        est.dP0 = st->level;
        est.fault_duration = st->fault_duration;
      }
    }
    if (df_cross >= 0.0 && df_cross <= crossing) {
      std::ostringstream os;
      os << "power threshold crossed at t=" << crossing
         << " s but frequency threshold already crossed at t=" << df_cross
         << " s";
      throw AmbiguousClassificationError(
          os.str(), {to_string(est.label), to_string(DisturbanceLabel::MinuteSlope)});
    }
    return est;
  }

  if (df_cross < 0.0) return std::nullopt;

  // Minute level: slow growth, caught once the frequency passes df_sh.
  est.dP0.reset();
  est.label = DisturbanceLabel::MinuteSlope;
  const auto [first, last] = dP.index_range(est.onset_time, df_cross);
  if (last >= first + 3) {
    const LineFit ramp = fit_line(
        std::span(dP.times).subspan(first, last - first),
        std::span(dP.values).subspan(first, last - first));
    if (ramp.slope > 0.0) {
      est.inception_time = std::min(ramp.zero_crossing(), est.onset_time);
    }
    est.fit_slope = ramp.slope;
    est.fit_residual_ratio = ramp.residual_ratio();
  }
  est.t1 = df_cross - est.inception_time;
  est.k_m = minute_slope_at_threshold(p, th.frequency_threshold, *est.t1);
  est.threshold_crossing = df_cross;
  return est;
}

}  // namespace freqstab
