#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "tmsc/error.hpp"
#include "tmsc/signal.hpp"

using namespace tmsc;

namespace {

template <typename Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected tmsc::Error");
  return Errc::io_error;
}

std::vector<double> values_of(const TimeSeries& ts) {
  return {ts.values().begin(), ts.values().end()};
}

TimeSeries ramp(std::size_t n, double t0 = 0.0, double dt = 1.0) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = static_cast<double>(k);
  return TimeSeries(t0, dt, v, Unit::volts);
}

}  // namespace

TEST_CASE("time series rejects bad construction") {
  CHECK(code_of([] { TimeSeries(0, 0.0, {1.0}, Unit::volts); }) == Errc::invalid_config);
  CHECK(code_of([] { TimeSeries(0, 1.0, {}, Unit::volts); }) == Errc::too_short);
  CHECK(code_of([] { TimeSeries(0, 1.0, {1.0, NAN}, Unit::volts); }) ==
        Errc::non_finite_value);
  const TimeSeries ts(5.0, 0.5, {1, 2, 3}, Unit::amperes);
  CHECK(ts.time_at(2) == 6.0);
  CHECK(ts.t_last() == 6.0);
  CHECK(ts.duration() == 1.5);
}

TEST_CASE("validate_series accepts uniform input") {
  const std::vector<Sample> raw{{0, 3.7}, {1, 3.69}, {2, 3.7}};
  const auto ts = validate_series(raw, 1.0, 0.01, Unit::volts);
  CHECK(ts.t0() == 0.0);
  CHECK(ts.dt() == 1.0);
  CHECK(ts.size() == 3);
  CHECK(ts.unit() == Unit::volts);
}

TEST_CASE("validate_series reports the offending index") {
  const std::vector<Sample> raw{{0, 3.7}, {1, 3.69}, {2.5, 3.7}};
  try {
    validate_series(raw, 1.0, 0.01, Unit::volts);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_uniform_sampling);
    REQUIRE(e.index().has_value());
    CHECK(*e.index() == 2);
  }
}

TEST_CASE("validate_series flags non-finite values and short input") {
  const std::vector<Sample> nan_raw{{0, 1}, {1, NAN}, {2, 1}};
  try {
    validate_series(nan_raw, 1.0, std::nullopt, Unit::volts);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_finite_value);
    CHECK(e.index() == std::optional<std::size_t>(1));
  }
  const std::vector<Sample> one{{0, 1}};
  CHECK(code_of([&] { validate_series(one, 1.0, std::nullopt, Unit::volts); }) ==
        Errc::too_short);
  const std::vector<Sample> backwards{{0, 1}, {-1, 1}};
  CHECK(code_of([&] { validate_series(backwards, 1.0, std::nullopt, Unit::volts); }) ==
        Errc::non_uniform_sampling);
}

TEST_CASE("validate_series default tolerance is one percent of dt") {
  const std::vector<Sample> ok{{0, 1}, {1.009, 1}, {2.0, 1}};
  CHECK_NOTHROW(validate_series(ok, 1.0, std::nullopt, Unit::volts));
  const std::vector<Sample> bad{{0, 1}, {1.02, 1}, {2.0, 1}};
  CHECK(code_of([&] { validate_series(bad, 1.0, std::nullopt, Unit::volts); }) ==
        Errc::non_uniform_sampling);
}

TEST_CASE("validate_series accepts a two-cycle record and is idempotent") {
  std::vector<Sample> raw(2740);
  std::mt19937_64 rng(3);
  const auto noise = oracle::uniform_noise(rng, raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) raw[k] = {static_cast<double>(k), noise[k]};
  const auto ts = validate_series(raw, 1.0, 0.01, Unit::volts);
  CHECK(ts.size() == 2740);
  std::vector<Sample> again(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) again[k] = {ts.time_at(k), ts[k]};
  CHECK(validate_series(again, 1.0, 0.01, Unit::volts) == ts);
}

TEST_CASE("extract_window") {
  const auto ts = ramp(2740);
  const auto first = extract_window(ts, {0, 1370});
  CHECK(first.size() == 1370);
  CHECK(first.t0() == 0.0);
  const auto second = extract_window(ts, {1370, 1370});
  CHECK(second.size() == 1370);
  CHECK(second.t0() == 1370.0);
  CHECK(second[0] == 1370.0);

  CHECK(code_of([] { extract_window(ramp(1000), {0, 1370}); }) == Errc::window_out_of_range);
  CHECK(code_of([&] { extract_window(ts, {-1, 10}); }) == Errc::window_out_of_range);
  CHECK(code_of([&] { extract_window(ts, {0, 0}); }) == Errc::window_out_of_range);

  // Start between samples rounds up; length rounds up to whole samples.
  const auto half = extract_window(ramp(20, 0.0, 0.5), {1.2, 2.1});
  CHECK(half.t0() == 1.5);
  CHECK(half.size() == 5);
}

TEST_CASE("pad_reflect examples") {
  const TimeSeries abc(10.0, 1.0, {1, 2, 3}, Unit::volts);
  const auto padded = pad_reflect(abc, 2);
  CHECK(values_of(padded) == std::vector<double>{3, 2, 1, 2, 3, 2, 1});
  CHECK(padded.t0() == 8.0);

  CHECK(pad_reflect(abc, 0) == abc);

  const TimeSeries sym(0.0, 1.0, {1, 2, 1}, Unit::volts);
  CHECK(values_of(pad_reflect(sym, 1)) == std::vector<double>{2, 1, 2, 1, 2});

  CHECK(code_of([&] { pad_reflect(abc, 3); }) == Errc::pad_too_large);
}

TEST_CASE("window, pad, trim round trip is bit exact") {
  std::mt19937_64 rng(11);
  const TimeSeries ts(0.0, 1.0, oracle::uniform_noise(rng, 600), Unit::volts);
  for (double start : {0.0, 17.0, 250.0}) {
    const auto w = extract_window(ts, {start, 300});
    for (std::size_t n : {0u, 1u, 50u, 299u}) {
      CHECK(trim(pad_reflect(w, n), n) == w);
    }
  }
}

TEST_CASE("operations are pure") {
  const auto ts = ramp(50);
  CHECK(pad_reflect(ts, 7) == pad_reflect(ts, 7));
  CHECK(extract_window(ts, {3, 20}) == extract_window(ts, {3, 20}));
}
