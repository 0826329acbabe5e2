#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tmsc/matrix.hpp"
#include "tmsc/signal.hpp"
#include "tmsc/spectral.hpp"

namespace tmsc {

/// Min-max normalized scalogram modulus; entries lie in [0, 1].
struct NormalizedMap {
  Matrix<double> data;
  ScaleGrid grid;
  double t0 = 0.0;
  double dt = 1.0;
};

/// Elementwise | |Ŵ_v| - |Ŵ_i| |. Low values mean the voltage and current
/// spectra agree; high values mark incoherent (fault candidate) regions.
struct CoherenceMap {
  Matrix<double> data;
  ScaleGrid grid;
  double t0 = 0.0;
  double dt = 1.0;

  double time_at(std::size_t col) const noexcept {
    return t0 + static_cast<double>(col) * dt;
  }
};

/// Demarcation between the low- and high-coherence regions.
struct BandSplit {
  double f_split = 0.1;
};

/// 0.1 Hz at 1 Hz sampling, scaled with the sampling rate otherwise.
BandSplit default_band_split(double dt);

/// `global` takes min/max over the whole (t, λ) matrix; `per_scale`
/// normalizes each row separately.
enum class NormalizationScope { global, per_scale };

/// Band aggregation for band_score_over_time.
enum class BandStatistic { mean, max };

NormalizedMap normalize_magnitude(
    const Scalogram& s, NormalizationScope scope = NormalizationScope::global);

CoherenceMap coherence_map(const NormalizedMap& voltage,
                           const NormalizedMap& current);

/// Rows with frequency >= f_split.
std::vector<std::size_t> band_rows(const ScaleGrid& grid, const BandSplit& split);

TimeSeries band_score_over_time(const CoherenceMap& map, const BandSplit& split,
                                BandStatistic statistic = BandStatistic::mean);

struct FrequencySlice {
  double frequency;  // grid frequency actually used
  std::size_t row;
  TimeSeries series;
};

/// Grid row nearest `f` (in log-frequency), as a time series.
FrequencySlice freq_slice(const CoherenceMap& map, double f);

struct ProfilePoint {
  double frequency;
  double value;
};
using FrequencyProfile = std::vector<ProfilePoint>;

/// Column nearest `t`, paired with the grid frequencies.
FrequencyProfile time_slice(const CoherenceMap& map, double t);

/// Per-row time average of the map.
FrequencyProfile mean_coherence_per_frequency(const CoherenceMap& map);

/// Mean of profile values whose frequency lies in [f_lo, f_hi).
double profile_band_mean(const FrequencyProfile& profile, double f_lo,
                         double f_hi);

/// Local maxima strictly above `threshold`. Of two peaks closer than
/// `min_separation` samples only the taller survives.
std::vector<std::size_t> find_peaks(std::span<const double> x, double threshold,
                                    std::size_t min_separation);

/// Samples spanned by the Morlet's time resolution at `scale`: 2√2·λ/dt.
std::size_t morlet_time_resolution(double scale, double dt);

}  // namespace tmsc
