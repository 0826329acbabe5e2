#include "tmsc/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tmsc/error.hpp"

namespace tmsc {

namespace {

constexpr double kDegenerateRange = 1e-15;

void rescale(std::span<double> values, double lo, double hi) {
  const double range = hi - lo;
  if (!(range >= kDegenerateRange)) {
    throw Error(Errc::degenerate_range,
                "scalogram modulus is constant; the window has no structure");
  }
  for (auto& v : values) v = (v - lo) / range;
}

}  // namespace

BandSplit default_band_split(double dt) { return BandSplit{0.1 / dt}; }

NormalizedMap normalize_magnitude(const Scalogram& s, NormalizationScope scope) {
  const std::size_t rows = s.data.rows();
  const std::size_t cols = s.data.cols();
  NormalizedMap out{Matrix<double>(rows, cols), s.grid, s.t0, s.dt};

  auto src = s.data.flat();
  auto dst = out.data.flat();
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (!std::isfinite(src[k].real()) || !std::isfinite(src[k].imag())) {
      throw Error(Errc::non_finite_value, "scalogram entry", k);
    }
    dst[k] = std::abs(src[k]);
  }

  if (scope == NormalizationScope::global) {
    const auto [lo, hi] = std::minmax_element(dst.begin(), dst.end());
    rescale(dst, *lo, *hi);
  } else {
    for (std::size_t r = 0; r < rows; ++r) {
      auto row = out.data.row(r);
      const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
      rescale(row, *lo, *hi);
    }
  }
  return out;
}

CoherenceMap coherence_map(const NormalizedMap& voltage,
                           const NormalizedMap& current) {
  if (voltage.data.rows() != current.data.rows() ||
      voltage.data.cols() != current.data.cols() ||
      voltage.grid != current.grid) {
    throw Error(Errc::shape_mismatch,
                "voltage and current maps differ in shape or grid");
  }
  CoherenceMap out{Matrix<double>(voltage.data.rows(), voltage.data.cols()),
                   voltage.grid, voltage.t0, voltage.dt};
  auto v = voltage.data.flat();
  auto i = current.data.flat();
  auto dst = out.data.flat();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::abs(v[k] - i[k]);
  return out;
}

std::vector<std::size_t> band_rows(const ScaleGrid& grid, const BandSplit& split) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (grid.frequencies[r] >= split.f_split) rows.push_back(r);
  }
  return rows;
}

TimeSeries band_score_over_time(const CoherenceMap& map, const BandSplit& split,
                                BandStatistic statistic) {
  if (!(split.f_split > 0.0)) {
    throw Error(Errc::invalid_config, "f_split must be positive");
  }
  const auto rows = band_rows(map.grid, split);
  if (rows.empty()) {
    throw Error(Errc::empty_band,
                "no grid rows at or above " + std::to_string(split.f_split) + " Hz");
  }
  const std::size_t cols = map.data.cols();
  std::vector<double> score(cols, 0.0);
  for (std::size_t c = 0; c < cols; ++c) {
    double acc = statistic == BandStatistic::mean ? 0.0 : map.data(rows[0], c);
    for (std::size_t r : rows) {
      const double v = map.data(r, c);
      acc = statistic == BandStatistic::mean ? acc + v : std::max(acc, v);
    }
    score[c] = statistic == BandStatistic::mean
                   ? acc / static_cast<double>(rows.size())
                   : acc;
  }
  return TimeSeries(map.t0, map.dt, std::move(score), Unit::dimensionless);
}

FrequencySlice freq_slice(const CoherenceMap& map, double f) {
  const auto& freqs = map.grid.frequencies;
  if (freqs.empty() || !(f >= freqs.back() && f <= freqs.front())) {
    throw Error(Errc::out_of_grid_range,
                std::to_string(f) + " Hz is outside the scale grid");
  }
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < freqs.size(); ++r) {
    const double d = std::abs(std::log(freqs[r] / f));
    if (d < best_dist) {
      best_dist = d;
      best = r;
    }
  }
  const auto row = map.data.row(best);
  return FrequencySlice{freqs[best], best,
                        TimeSeries(map.t0, map.dt,
                                   std::vector<double>(row.begin(), row.end()),
                                   Unit::dimensionless)};
}

FrequencyProfile time_slice(const CoherenceMap& map, double t) {
  const std::size_t cols = map.data.cols();
  const double pos = (t - map.t0) / map.dt;
  if (cols == 0 || !(pos >= -0.5 && pos <= static_cast<double>(cols) - 0.5)) {
    throw Error(Errc::out_of_window,
                std::to_string(t) + " s is outside the analysis window");
  }
  const auto col = std::min(cols - 1, static_cast<std::size_t>(std::lround(std::max(pos, 0.0))));
  FrequencyProfile profile;
  profile.reserve(map.data.rows());
  for (std::size_t r = 0; r < map.data.rows(); ++r) {
    profile.push_back({map.grid.frequencies[r], map.data(r, col)});
  }
  return profile;
}

FrequencyProfile mean_coherence_per_frequency(const CoherenceMap& map) {
  FrequencyProfile profile;
  profile.reserve(map.data.rows());
  for (std::size_t r = 0; r < map.data.rows(); ++r) {
    const auto row = map.data.row(r);
    const double sum = std::accumulate(row.begin(), row.end(), 0.0);
    profile.push_back({map.grid.frequencies[r],
                       row.empty() ? 0.0 : sum / static_cast<double>(row.size())});
  }
  return profile;
}

double profile_band_mean(const FrequencyProfile& profile, double f_lo,
                         double f_hi) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : profile) {
    if (p.frequency >= f_lo && p.frequency < f_hi) {
      sum += p.value;
      ++count;
    }
  }
  if (count == 0) throw Error(Errc::empty_band, "no profile points in band");
  return sum / static_cast<double>(count);
}

std::vector<std::size_t> find_peaks(std::span<const double> x, double threshold,
                                    std::size_t min_separation) {
  std::vector<std::size_t> candidates;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    if (x[k] > threshold && x[k] >= x[k - 1] && x[k] > x[k + 1]) {
      candidates.push_back(k);
    }
  }
  // Tallest first, ties by position.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t k : candidates) {
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t q) {
      const std::size_t d = k > q ? k - q : q - k;
      return d >= min_separation;
    });
    if (clear) kept.push_back(k);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::size_t morlet_time_resolution(double scale, double dt) {
  return static_cast<std::size_t>(std::ceil(2.0 * std::sqrt(2.0) * scale / dt));
}

}  // namespace tmsc
