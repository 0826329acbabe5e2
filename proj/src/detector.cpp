#include "tmsc/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tmsc/error.hpp"

namespace tmsc {

namespace {

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

void check_channels(const TimeSeries& voltage, const TimeSeries& current) {
  if (voltage.size() != current.size() || voltage.t0() != current.t0() ||
      voltage.dt() != current.dt()) {
    throw Error(Errc::mismatched_channels,
                "voltage and current must share t0, dt and length");
  }
}

}  // namespace

std::string_view to_string(EventLabel label) noexcept {
  switch (label) {
    case EventLabel::tmsc_candidate: return "tmsc_candidate";
  }
  return "unknown";
}

void DetectorConfig::validate() const {
  morlet.validate();
  if (!(window.length > 0.0)) {
    throw Error(Errc::invalid_config, "window length must be positive");
  }
  if (!(f_min > 0.0) || !(f_max > f_min)) {
    throw Error(Errc::invalid_config, "need 0 < f_min < f_max");
  }
  if (voices_per_octave < 1) {
    throw Error(Errc::invalid_config, "voices per octave must be >= 1");
  }
  if (split && !(split->f_split > 0.0 && split->f_split < f_max)) {
    throw Error(Errc::invalid_config, "need 0 < f_split < f_max");
  }
  if (const auto* fixed = std::get_if<FixedThreshold>(&threshold)) {
    if (!(fixed->value > 0.0 && fixed->value < 1.0)) {
      throw Error(Errc::invalid_config, "fixed threshold must lie in (0, 1)");
    }
  } else if (const auto* robust = std::get_if<RobustThreshold>(&threshold)) {
    if (!(robust->k > 0.0) || !std::isfinite(robust->k)) {
      throw Error(Errc::invalid_config, "robust k must be positive");
    }
  }
  if (!(min_event_gap > 0.0)) {
    throw Error(Errc::invalid_config, "min_event_gap must be positive");
  }
}

BandSplit DetectorConfig::effective_split(double dt) const {
  return split.value_or(default_band_split(dt));
}

double compute_threshold(const TimeSeries& score, const ThresholdPolicy& policy) {
  if (score.size() == 0) throw Error(Errc::empty_score, "");
  if (const auto* fixed = std::get_if<FixedThreshold>(&policy)) {
    return fixed->value;
  }
  const double k = std::get<RobustThreshold>(policy).k;
  const auto values = score.values();
  const double med = median_of({values.begin(), values.end()});
  std::vector<double> deviation(values.size());
  std::transform(values.begin(), values.end(), deviation.begin(),
                 [med](double v) { return std::abs(v - med); });
  const double mad = 1.4826 * median_of(std::move(deviation));
  return med + k * mad;
}

std::vector<FaultEvent> detect_events(const TimeSeries& score, double threshold,
                                      double min_event_gap) {
  if (!std::isfinite(threshold)) {
    throw Error(Errc::invalid_config, "threshold must be finite");
  }
  std::vector<FaultEvent> events;
  const auto s = score.values();
  std::size_t k = 0;
  while (k < s.size()) {
    if (!(s[k] > threshold)) {
      ++k;
      continue;
    }
    const std::size_t first = k;
    std::size_t peak = k;
    while (k < s.size() && s[k] > threshold) {
      if (s[k] > s[peak]) peak = k;
      ++k;
    }
    const std::size_t last = k - 1;
    FaultEvent run{score.time_at(first), score.time_at(last), score.time_at(peak),
                   s[peak], std::numeric_limits<double>::quiet_NaN()};
    if (!events.empty() && run.t_start - events.back().t_end < min_event_gap) {
      auto& prev = events.back();
      prev.t_end = run.t_end;
      if (run.peak_score > prev.peak_score) {
        prev.peak_score = run.peak_score;
        prev.peak_time = run.peak_time;
      }
    } else {
      events.push_back(run);
    }
  }
  return events;
}

void assign_peak_frequencies(std::vector<FaultEvent>& events,
                             const CoherenceMap& map, const BandSplit& split) {
  const auto rows = band_rows(map.grid, split);
  if (rows.empty()) throw Error(Errc::empty_band, "");
  for (auto& e : events) {
    const auto col = static_cast<std::size_t>(std::lround((e.peak_time - map.t0) / map.dt));
    std::size_t best = rows.front();
    for (std::size_t r : rows) {
      if (map.data(r, col) > map.data(best, col)) best = r;
    }
    e.peak_frequency = map.grid.frequencies[best];
  }
}

DetectionReport analyze(const TimeSeries& voltage, const TimeSeries& current,
                        const DetectorConfig& config) {
  config.validate();
  check_channels(voltage, current);
  if (config.min_event_gap < voltage.dt()) {
    throw Error(Errc::invalid_config, "min_event_gap must be at least dt");
  }

  const TimeSeries v = extract_window(voltage, config.window);
  const TimeSeries i = extract_window(current, config.window);
  const BandSplit split = config.effective_split(v.dt());

  const ScaleGrid grid = build_scale_grid(config.f_min, config.f_max,
                                          config.voices_per_octave, config.morlet);
  if (!(split.f_split < grid.frequencies.front())) {
    throw Error(Errc::invalid_config, "f_split must lie below the grid maximum");
  }

  NormalizedMap v_map = normalize_magnitude(cwt(v, grid, config.morlet),
                                            config.normalization);
  NormalizedMap i_map = normalize_magnitude(cwt(i, grid, config.morlet),
                                            config.normalization);
  CoherenceMap coherence = coherence_map(v_map, i_map);
  TimeSeries score = band_score_over_time(coherence, split, config.band_statistic);
  const double threshold = compute_threshold(score, config.threshold);
  auto events = detect_events(score, threshold, config.min_event_gap);
  assign_peak_frequencies(events, coherence, split);

  return DetectionReport{config,
                         split,
                         threshold,
                         std::move(events),
                         std::move(score),
                         mean_coherence_per_frequency(coherence),
                         std::move(v_map),
                         std::move(i_map),
                         std::move(coherence)};
}

std::vector<DetectionReport> analyze_windows(const TimeSeries& voltage,
                                             const TimeSeries& current,
                                             const DetectorConfig& config) {
  check_channels(voltage, current);
  const double span = voltage.duration();
  const double length = config.window.length;
  if (!(length > 0.0)) {
    throw Error(Errc::invalid_config, "window length must be positive");
  }
  const auto count = static_cast<std::size_t>(std::floor(span / length + 1e-9));
  if (count == 0) {
    throw Error(Errc::window_out_of_range,
                "series of " + std::to_string(span) + " s is shorter than one " +
                    std::to_string(length) + " s window");
  }
  std::vector<DetectionReport> reports;
  reports.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    DetectorConfig per_window = config;
    per_window.window.start = voltage.t0() + static_cast<double>(w) * length;
    reports.push_back(analyze(voltage, current, per_window));
  }
  return reports;
}

}  // namespace tmsc
