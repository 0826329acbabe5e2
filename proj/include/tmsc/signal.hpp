#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tmsc {

enum class Unit { volts, amperes, dimensionless };

std::string_view to_string(Unit unit) noexcept;

/// Uniformly sampled real signal: sample k sits at t0 + k*dt.
///
/// The constructor enforces dt > 0, a non-empty value vector and finite
/// samples, so every TimeSeries that exists is valid.
class TimeSeries {
 public:
  TimeSeries(double t0, double dt, std::vector<double> values, Unit unit);

  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return dt_; }
  Unit unit() const noexcept { return unit_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

  double time_at(std::size_t k) const noexcept {
    return t0_ + static_cast<double>(k) * dt_;
  }
  /// Time of the last sample.
  double t_last() const noexcept { return time_at(values_.size() - 1); }
  double duration() const noexcept {
    return static_cast<double>(values_.size()) * dt_;
  }

  bool operator==(const TimeSeries&) const = default;

 private:
  double t0_;
  double dt_;
  std::vector<double> values_;
  Unit unit_;
};

struct Sample {
  double time;
  double value;
};

/// Analysis window; the default length is one FUDS cycle.
struct WindowSpec {
  double start = 0.0;
  double length = 1370.0;
};

inline constexpr double kDefaultWindowLength = 1370.0;

/// Relative default for validate_series: 1% of the expected period.
inline constexpr double kDefaultDtTolerance = 0.01;

/// Checks raw (time, value) pairs for uniform sampling and finiteness.
/// Missing samples are rejected rather than interpolated.
TimeSeries validate_series(std::span<const Sample> raw, double expected_dt,
                           std::optional<double> tolerance, Unit unit);

/// ceil(length/dt) samples starting at the first sample with time >= start.
TimeSeries extract_window(const TimeSeries& ts, const WindowSpec& window);

/// Mirror padding that excludes the edge sample: [1,2,3], n=2 gives
/// [3,2,1,2,3,2,1]. Requires n < size().
TimeSeries pad_reflect(const TimeSeries& ts, std::size_t n);

/// Drops n samples from each end; the inverse of pad_reflect.
TimeSeries trim(const TimeSeries& ts, std::size_t n);

}  // namespace tmsc
