#include "tmsc/battery_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tmsc/error.hpp"
#include "tmsc/fft.hpp"

namespace tmsc {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kSecondsPerHour = 3600.0;

// Drive profile shape.
constexpr double kDriveCutoffHz = 0.05;
constexpr double kDriveCornerHz = 0.01;
constexpr double kDriveNoiseStd = 2.0;
constexpr int kPulsesPerCycle = 40;
constexpr double kPulseMaxAmps = 40.0;
constexpr int kPulseMinSeconds = 2;
constexpr int kPulseMaxSeconds = 4;
constexpr double kDriveMean = -10.0;
constexpr double kDriveLimit = 60.0;

// Portable uniform and Box-Muller normal draws over mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (spare_) {
      const double out = *spare_;
      spare_.reset();
      return out;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

double quantize(double x, double resolution) {
  return resolution > 0.0 ? std::round(x / resolution) * resolution : x;
}

std::vector<double> pseudo_fuds_cycle(std::size_t period, double dt, Rng& rng) {
  std::vector<cplx> noise(period);
  for (auto& v : noise) v = rng.normal();
  FftPlan plan(period);
  plan.forward(noise);
  const double df = 1.0 / (static_cast<double>(period) * dt);
  for (std::size_t k = 0; k < period; ++k) {
    const double signed_k = 2 * k < period ? static_cast<double>(k)
                                           : static_cast<double>(k) - static_cast<double>(period);
    const double f = std::abs(signed_k) * df;
    if (k == 0 || f >= kDriveCutoffHz) {
      noise[k] = 0.0;
    } else {
      noise[k] /= std::sqrt(1.0 + (f / kDriveCornerHz) * (f / kDriveCornerHz));
    }
  }
  plan.inverse(noise);

  std::vector<double> cycle(period);
  double energy = 0.0;
  for (std::size_t k = 0; k < period; ++k) {
    cycle[k] = noise[k].real();
    energy += cycle[k] * cycle[k];
  }
  const double rms = std::sqrt(energy / static_cast<double>(period));
  if (rms > 0.0) {
    for (auto& v : cycle) v *= kDriveNoiseStd / rms;
  }

  for (int p = 0; p < kPulsesPerCycle; ++p) {
    const double amps = kPulseMaxAmps * rng.uniform();
    const auto seconds = kPulseMinSeconds +
                         static_cast<int>(rng.below(kPulseMaxSeconds - kPulseMinSeconds + 1));
    const auto width = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(seconds / dt)));
    if (width >= period) continue;
    const std::size_t start = rng.below(period - width);
    for (std::size_t k = start; k < start + width; ++k) cycle[k] -= amps;
  }

  double mean = 0.0;
  for (double v : cycle) mean += v;
  mean /= static_cast<double>(period);
  for (auto& v : cycle) {
    v = std::clamp(v - mean + kDriveMean, -kDriveLimit, kDriveLimit);
  }
  return cycle;
}

std::vector<double> repeat_to(std::span<const double> cycle, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = cycle[k % cycle.size()];
  return out;
}

}  // namespace

// ---------------------------------------------------------------- OcvCurve

OcvCurve::OcvCurve(std::vector<double> soc, std::vector<double> volts)
    : soc_(std::move(soc)), volts_(std::move(volts)) {
  if (soc_.size() < 2 || soc_.size() != volts_.size()) {
    throw Error(Errc::invalid_config, "OCV table needs >= 2 matching points");
  }
  if (soc_.front() != 0.0 || soc_.back() != 1.0) {
    throw Error(Errc::invalid_config, "OCV table must span SOC 0..1");
  }
  for (std::size_t k = 1; k < soc_.size(); ++k) {
    if (!(soc_[k] > soc_[k - 1]) || !(volts_[k] > volts_[k - 1])) {
      throw Error(Errc::invalid_config, "OCV table must be strictly increasing", k);
    }
  }
}

OcvCurve OcvCurve::nmc_default() {
  return OcvCurve({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                  {3.00, 3.45, 3.55, 3.61, 3.66, 3.72, 3.80, 3.88, 3.97, 4.07, 4.20});
}

double OcvCurve::operator()(double soc) const {
  if (soc <= soc_.front()) return volts_.front();
  if (soc >= soc_.back()) return volts_.back();
  const auto hi = std::upper_bound(soc_.begin(), soc_.end(), soc);
  const auto k = static_cast<std::size_t>(hi - soc_.begin());
  const double w = (soc - soc_[k - 1]) / (soc_[k] - soc_[k - 1]);
  return volts_[k - 1] + w * (volts_[k] - volts_[k - 1]);
}

OcvCurve load_ocv_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> soc;
  std::vector<double> volts;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a;
    std::string b;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b)) {
      throw Error(Errc::parse_error, "expected soc,ocv_v", line_no);
    }
    try {
      soc.push_back(std::stod(a));
      volts.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "bad number", line_no);
    }
  }
  return OcvCurve(std::move(soc), std::move(volts));
}

// ---------------------------------------------------------------- params

void CellParams::validate() const {
  if (!(capacity_ah > 0.0) || !(r0 > 0.0) || !(r1 > 0.0) || !(c1 > 0.0)) {
    throw Error(Errc::invalid_config, "capacity, r0, r1 and c1 must be positive");
  }
  if (!(soc0 >= 0.0 && soc0 <= 1.0)) {
    throw Error(Errc::invalid_config, "soc0 must lie in [0, 1]");
  }
}

std::string_view to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::external_short: return "external_short";
    case FaultKind::current_pulse: return "current_pulse";
    case FaultKind::short_plus_pulse: return "short_plus_pulse";
  }
  return "unknown";
}

std::string_view to_string(PulseDirection direction) noexcept {
  return direction == PulseDirection::charge ? "charge" : "discharge";
}

FaultSpec FaultSpec::external_short(double r_sc, double t_start, double t_end) {
  FaultSpec f{FaultKind::external_short, r_sc, 0.0, PulseDirection::discharge,
              t_start, t_end};
  f.validate();
  return f;
}

FaultSpec FaultSpec::current_pulse(double amps, PulseDirection direction,
                                   double t_start, double t_end) {
  FaultSpec f{FaultKind::current_pulse, 0.0, amps, direction, t_start, t_end};
  f.validate();
  return f;
}

FaultSpec FaultSpec::short_plus_pulse(double r_sc, double amps,
                                      PulseDirection direction, double t_start,
                                      double t_end) {
  FaultSpec f{FaultKind::short_plus_pulse, r_sc, amps, direction, t_start, t_end};
  f.validate();
  return f;
}

double FaultSpec::signed_pulse() const noexcept {
  if (!has_pulse()) return 0.0;
  return direction == PulseDirection::charge ? amps : -amps;
}

bool FaultSpec::active_at(double t) const noexcept {
  return t >= t_start - kTimeEps && t < t_end - kTimeEps;
}

void FaultSpec::validate() const {
  if (!(t_start < t_end)) {
    throw Error(Errc::invalid_config, "fault needs t_start < t_end");
  }
  if (has_short() && !(r_sc > 0.0)) {
    throw Error(Errc::invalid_config, "short resistance must be positive");
  }
  if (has_pulse() && !(amps >= 0.0)) {
    throw Error(Errc::invalid_config, "pulse magnitude must be non-negative");
  }
}

// ---------------------------------------------------------------- simulation

TimeSeries gen_pseudo_fuds(double duration, double dt, std::uint64_t seed) {
  if (!(dt > 0.0) || !(duration >= dt) || !std::isfinite(duration)) {
    throw Error(Errc::invalid_duration, "need duration >= dt > 0");
  }
  const auto period = static_cast<std::size_t>(std::lround(kFudsCycle / dt));
  const auto n = static_cast<std::size_t>(std::lround(duration / dt));
  Rng rng(seed);
  const auto cycle = pseudo_fuds_cycle(period, dt, rng);
  return TimeSeries(0.0, dt, repeat_to(cycle, n), Unit::amperes);
}

SimOutput simulate(const CellParams& params, const TimeSeries& load,
                   std::span<const FaultSpec> faults, const SensorModel& sensor,
                   std::uint64_t seed) {
  params.validate();
  const std::size_t n = load.size();
  const double dt = load.dt();
  const double span_end = load.t0() + load.duration();

  std::vector<FaultSpec> truth(faults.begin(), faults.end());
  for (const auto& f : truth) {
    f.validate();
    if (f.t_start < load.t0() - kTimeEps || f.t_end > span_end + kTimeEps) {
      throw Error(Errc::fault_outside_span,
                  std::string(to_string(f.kind)) + " at " + std::to_string(f.t_start) + " s");
    }
  }
  std::stable_sort(truth.begin(), truth.end(),
                   [](const FaultSpec& a, const FaultSpec& b) { return a.t_start < b.t_start; });

  std::vector<double> voltage(n);
  std::vector<double> measured(n);
  std::vector<double> soc_trace(n);
  std::vector<double> cell_current(n);

  Rng rng(seed);
  const double charge_per_soc = params.capacity_ah * kSecondsPerHour;
  double soc = params.soc0;
  double v_rc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = load.time_at(k);
    if (soc < 0.0 || soc > 1.0) {
      throw Error(Errc::soc_out_of_range, "SOC " + std::to_string(soc), k);
    }

    double external = load[k];  // charge-positive, through the shunt
    std::optional<double> r_sc;
    for (const auto& f : truth) {
      if (!f.active_at(t)) continue;
      external += f.signed_pulse();
      if (f.has_short()) {
        // Parallel shorts combine.
        r_sc = r_sc ? (*r_sc * f.r_sc) / (*r_sc + f.r_sc) : f.r_sc;
      }
    }

    double discharge = -external;
    double terminal = params.ocv(soc) - discharge * params.r0 - v_rc;
    if (r_sc) {
      // v = (ocv - i r0 - v_rc) - (v / r_sc) r0, solved for v.
      terminal *= *r_sc / (*r_sc + params.r0);
      discharge += terminal / *r_sc;
    }

    soc_trace[k] = soc;
    cell_current[k] = discharge;
    voltage[k] = terminal;
    measured[k] = external;

    soc -= discharge * dt / charge_per_soc;
    v_rc += dt * (discharge / params.c1 - v_rc / params.time_constant());
  }

  // Both channels draw on every sample, noisy or not.
  for (std::size_t k = 0; k < n; ++k) {
    const double nv = rng.normal();
    const double ni = rng.normal();
    voltage[k] = quantize(voltage[k] + sensor.voltage_noise_std * nv,
                          sensor.voltage_resolution);
    measured[k] = quantize(measured[k] + sensor.current_noise_std * ni,
                           sensor.current_resolution);
  }

  return SimOutput{TimeSeries(load.t0(), dt, std::move(voltage), Unit::volts),
                   TimeSeries(load.t0(), dt, std::move(measured), Unit::amperes),
                   std::move(truth), std::move(soc_trace), std::move(cell_current)};
}

// ---------------------------------------------------------------- scenarios

std::string_view to_string(Table1Case c) noexcept {
  switch (c) {
    case Table1Case::none: return "none";
    case Table1Case::tmsc1: return "1";
    case Table1Case::tmsc2: return "2";
    case Table1Case::tmsc3: return "3";
    case Table1Case::false_fault4: return "4";
    case Table1Case::hidden_fault5: return "5";
    case Table1Case::all: return "all";
  }
  return "?";
}

std::optional<Table1Case> parse_table1_case(std::string_view text) {
  for (auto c : {Table1Case::none, Table1Case::tmsc1, Table1Case::tmsc2,
                 Table1Case::tmsc3, Table1Case::false_fault4,
                 Table1Case::hidden_fault5, Table1Case::all}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

std::vector<FaultSpec> table1_faults(Table1Case c) {
  constexpr double tmsc_r = 0.5;
  const double cycle2 = kFudsCycle;
  const std::vector<FaultSpec> all{
      FaultSpec::external_short(tmsc_r, 501.0, 503.0),
      FaultSpec::external_short(tmsc_r, 903.0, 906.0),
      FaultSpec::external_short(tmsc_r, 1002.0, 1005.0),
      FaultSpec::current_pulse(60.0, PulseDirection::discharge, cycle2 + 621.0,
                               cycle2 + 625.0),
      FaultSpec::short_plus_pulse(0.1, 40.0, PulseDirection::charge,
                                  cycle2 + 1021.0, cycle2 + 1024.0),
  };
  switch (c) {
    case Table1Case::none: return {};
    case Table1Case::tmsc1: return {all[0]};
    case Table1Case::tmsc2: return {all[1]};
    case Table1Case::tmsc3: return {all[2]};
    case Table1Case::false_fault4: return {all[3]};
    case Table1Case::hidden_fault5: return {all[4]};
    case Table1Case::all: return all;
  }
  return {};
}

SimOutput make_scenario(Table1Case c, std::uint64_t seed,
                        const ScenarioOptions& options) {
  constexpr double dt = 1.0;
  const double duration = 2.0 * kFudsCycle;
  TimeSeries load = gen_pseudo_fuds(duration, dt, seed);
  if (options.profile) {
    const auto& p = *options.profile;
    if (p.dt() != dt) {
      throw Error(Errc::non_uniform_sampling, "drive profile must be sampled at 1 Hz");
    }
    load = TimeSeries(0.0, dt,
                      repeat_to(p.values(), static_cast<std::size_t>(duration / dt)),
                      Unit::amperes);
  }
  const auto faults = table1_faults(c);
  // Decorrelate the sensor-noise stream from the drive-profile stream.
  const std::uint64_t noise_seed = seed ^ 0x9E3779B97F4A7C15ULL;
  return simulate(options.cell, load, faults, options.sensor, noise_seed);
}

}  // namespace tmsc
