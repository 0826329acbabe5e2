#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "tmsc/coherence.hpp"
#include "tmsc/signal.hpp"
#include "tmsc/spectral.hpp"

namespace tmsc {

struct FixedThreshold {
  double value;
};

/// median(score) + k * 1.4826 * MAD(score).
struct RobustThreshold {
  double k = 6.0;
};

using ThresholdPolicy = std::variant<FixedThreshold, RobustThreshold>;

struct DetectorConfig {
  WindowSpec window;
  double f_min = 0.0024;
  double f_max = 0.5;
  int voices_per_octave = 12;
  MorletParams morlet;
  /// Unset means default_band_split(dt) of the analyzed data.
  std::optional<BandSplit> split;
  ThresholdPolicy threshold = RobustThreshold{6.0};
  double min_event_gap = 5.0;
  NormalizationScope normalization = NormalizationScope::global;
  BandStatistic band_statistic = BandStatistic::mean;

  /// Checks the data-independent bounds; analyze() adds the dt checks.
  void validate() const;
  BandSplit effective_split(double dt) const;
};

enum class EventLabel { tmsc_candidate };

std::string_view to_string(EventLabel label) noexcept;

struct FaultEvent {
  double t_start;
  double t_end;
  double peak_time;
  double peak_score;
  double peak_frequency;  // NaN until assign_peak_frequencies runs
  EventLabel label = EventLabel::tmsc_candidate;

  bool intersects(double lo, double hi) const noexcept {
    return t_start <= hi && t_end >= lo;
  }
  bool operator==(const FaultEvent&) const = default;
};

/// Everything one window's analysis produced, enough to redraw the
/// coherence spectrum, its frequency/time slices and the per-frequency mean.
struct DetectionReport {
  DetectorConfig config;
  BandSplit split;
  double threshold;
  std::vector<FaultEvent> events;
  TimeSeries score;
  FrequencyProfile mean_profile;
  NormalizedMap voltage_map;
  NormalizedMap current_map;
  CoherenceMap coherence;
};

double compute_threshold(const TimeSeries& score, const ThresholdPolicy& policy);

/// Maximal runs with score > threshold become events; runs whose gap
/// (next start - previous end) is below min_event_gap are merged.
std::vector<FaultEvent> detect_events(const TimeSeries& score, double threshold,
                                      double min_event_gap);

/// Sets each event's peak_frequency to the in-band row with the largest
/// coherence value at its peak_time column.
void assign_peak_frequencies(std::vector<FaultEvent>& events,
                             const CoherenceMap& map, const BandSplit& split);

/// Window, transform both channels, normalize, compare, score, threshold.
DetectionReport analyze(const TimeSeries& voltage, const TimeSeries& current,
                        const DetectorConfig& config);

/// Runs analyze() on consecutive non-overlapping windows of
/// config.window.length, starting at the series start. Trailing samples
/// that do not fill a whole window are ignored.
std::vector<DetectionReport> analyze_windows(const TimeSeries& voltage,
                                             const TimeSeries& current,
                                             const DetectorConfig& config);

}  // namespace tmsc
