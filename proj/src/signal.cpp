#include "tmsc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tmsc/error.hpp"

namespace tmsc {

std::string_view to_string(Unit unit) noexcept {
  switch (unit) {
    case Unit::volts: return "V";
    case Unit::amperes: return "A";
    case Unit::dimensionless: return "1";
  }
  return "?";
}

TimeSeries::TimeSeries(double t0, double dt, std::vector<double> values,
                       Unit unit)
    : t0_(t0), dt_(dt), values_(std::move(values)), unit_(unit) {
  if (!std::isfinite(t0_)) throw Error(Errc::non_finite_value, "t0");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw Error(Errc::invalid_config, "sample period must be positive");
  }
  if (values_.empty()) throw Error(Errc::too_short, "empty series");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) throw Error(Errc::non_finite_value, "", k);
  }
}

TimeSeries validate_series(std::span<const Sample> raw, double expected_dt,
                           std::optional<double> tolerance, Unit unit) {
  if (!(expected_dt > 0.0)) {
    throw Error(Errc::invalid_config, "expected_dt must be positive");
  }
  if (raw.size() < 2) {
    throw Error(Errc::too_short, "need at least 2 samples, got " +
                                     std::to_string(raw.size()));
  }
  const double tol = tolerance.value_or(kDefaultDtTolerance * expected_dt);

  std::vector<double> values;
  values.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!std::isfinite(raw[k].time) || !std::isfinite(raw[k].value)) {
      throw Error(Errc::non_finite_value, "", k);
    }
    if (k > 0) {
      const double gap = raw[k].time - raw[k - 1].time;
      if (std::abs(gap - expected_dt) > tol) {
        throw Error(Errc::non_uniform_sampling,
                    "gap " + std::to_string(gap) + " s", k);
      }
    }
    values.push_back(raw[k].value);
  }
  return TimeSeries(raw.front().time, expected_dt, std::move(values), unit);
}

TimeSeries extract_window(const TimeSeries& ts, const WindowSpec& window) {
  if (!(window.length > 0.0)) {
    throw Error(Errc::window_out_of_range, "window length must be positive");
  }
  // Guard against 1369.9999999 style round-off in the index arithmetic.
  constexpr double eps = 1e-9;
  const double offset = (window.start - ts.t0()) / ts.dt();
  if (offset < -eps) {
    throw Error(Errc::window_out_of_range, "window starts before the series");
  }
  const auto first =
      static_cast<std::size_t>(std::max(0.0, std::ceil(offset - eps)));
  const auto count =
      static_cast<std::size_t>(std::ceil(window.length / ts.dt() - eps));
  if (first + count > ts.size()) {
    throw Error(Errc::window_out_of_range,
                "window [" + std::to_string(window.start) + ", +" +
                    std::to_string(window.length) + ") exceeds series of " +
                    std::to_string(ts.duration()) + " s");
  }
  const auto values = ts.values().subspan(first, count);
  return TimeSeries(ts.time_at(first), ts.dt(),
                    std::vector<double>(values.begin(), values.end()),
                    ts.unit());
}

TimeSeries pad_reflect(const TimeSeries& ts, std::size_t n) {
  if (n == 0) return ts;
  const std::size_t len = ts.size();
  if (n >= len) {
    throw Error(Errc::pad_too_large, "pad " + std::to_string(n) +
                                         " needs at least " +
                                         std::to_string(n + 1) + " samples");
  }
  const auto x = ts.values();
  std::vector<double> out;
  out.reserve(len + 2 * n);
  for (std::size_t k = n; k >= 1; --k) out.push_back(x[k]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= n; ++k) out.push_back(x[len - 1 - k]);
  return TimeSeries(ts.t0() - static_cast<double>(n) * ts.dt(), ts.dt(),
                    std::move(out), ts.unit());
}

TimeSeries trim(const TimeSeries& ts, std::size_t n) {
  if (2 * n >= ts.size()) {
    throw Error(Errc::too_short, "cannot trim " + std::to_string(n) +
                                     " samples from each end");
  }
  const auto values = ts.values().subspan(n, ts.size() - 2 * n);
  return TimeSeries(ts.time_at(n), ts.dt(),
                    std::vector<double>(values.begin(), values.end()),
                    ts.unit());
}

}  // namespace tmsc
