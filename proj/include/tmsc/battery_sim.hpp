#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tmsc/signal.hpp"

namespace tmsc {

/// Length of one FUDS cycle in seconds.
inline constexpr double kFudsCycle = 1370.0;

/// Monotone piecewise-linear open-circuit voltage over SOC in [0, 1].
class OcvCurve {
 public:
  OcvCurve(std::vector<double> soc, std::vector<double> volts);

  /// 11-point NMC-like table, 3.0 V at empty to 4.2 V at full. Identical to
  /// data/ocv_nmc.csv.
  static OcvCurve nmc_default();

  double operator()(double soc) const;

  std::span<const double> soc_points() const noexcept { return soc_; }
  std::span<const double> volt_points() const noexcept { return volts_; }

 private:
  std::vector<double> soc_;
  std::vector<double> volts_;
};

/// Reads a `soc,ocv_v` CSV.
OcvCurve load_ocv_csv(const std::filesystem::path& path);

/// First-order Thevenin cell.
struct CellParams {
  double capacity_ah = 38.2;
  double r0 = 0.0035;   // ohmic, Ω
  double r1 = 0.0025;   // polarization, Ω
  double c1 = 20000.0;  // polarization, F (τ = r1·c1 = 50 s)
  OcvCurve ocv = OcvCurve::nmc_default();
  double soc0 = 0.9;

  void validate() const;
  double time_constant() const noexcept { return r1 * c1; }
};

/// Measurement chain applied to the simulated terminal quantities.
/// Resolution 0 disables quantization.
struct SensorModel {
  double voltage_noise_std = 0.001;
  double voltage_resolution = 0.001;
  double current_noise_std = 0.0;
  double current_resolution = 0.0;

  static SensorModel ideal() { return {0.0, 0.0, 0.0, 0.0}; }
};

enum class FaultKind { external_short, current_pulse, short_plus_pulse };
enum class PulseDirection { charge, discharge };

std::string_view to_string(FaultKind kind) noexcept;
std::string_view to_string(PulseDirection direction) noexcept;

/// A fault active on the half-open interval [t_start, t_end).
struct FaultSpec {
  FaultKind kind;
  double r_sc = 0.0;  // Ω, shorts only
  double amps = 0.0;  // pulse magnitude, pulses only
  PulseDirection direction = PulseDirection::discharge;
  double t_start = 0.0;
  double t_end = 0.0;

  static FaultSpec external_short(double r_sc, double t_start, double t_end);
  static FaultSpec current_pulse(double amps, PulseDirection direction,
                                 double t_start, double t_end);
  static FaultSpec short_plus_pulse(double r_sc, double amps,
                                    PulseDirection direction, double t_start,
                                    double t_end);

  bool has_short() const noexcept { return kind != FaultKind::current_pulse; }
  bool has_pulse() const noexcept { return kind != FaultKind::external_short; }
  /// Pulse current in the measured-current sign convention (charge > 0).
  double signed_pulse() const noexcept;
  bool active_at(double t) const noexcept;
  void validate() const;

  bool operator==(const FaultSpec&) const = default;
};

/// Terminal measurements plus the internal trajectories used for checks.
/// Measured current is positive for charge. It includes load and injected
/// pulses but not the external short current, which bypasses the shunt.
struct SimOutput {
  TimeSeries voltage;
  TimeSeries current;
  std::vector<FaultSpec> truth;       // sorted by t_start
  std::vector<double> soc;            // state at the start of each step
  std::vector<double> cell_current;   // discharge-positive, includes shorts
};

/// Deterministic pseudo drive-cycle current (A, charge positive). One
/// 1370 s cycle of low-pass noise plus short discharge pulses, repeated to
/// cover `duration`.
TimeSeries gen_pseudo_fuds(double duration, double dt, std::uint64_t seed);

/// Forward-Euler simulation of the Thevenin cell driven by `load`.
SimOutput simulate(const CellParams& params, const TimeSeries& load,
                   std::span<const FaultSpec> faults,
                   const SensorModel& sensor = {}, std::uint64_t seed = 0);

enum class Table1Case { none, tmsc1, tmsc2, tmsc3, false_fault4, hidden_fault5, all };

std::string_view to_string(Table1Case c) noexcept;
std::optional<Table1Case> parse_table1_case(std::string_view text);

/// Faults #1-#3 sit in cycle 1, #4-#5 in cycle 2; trigger times are
/// relative to the start of their cycle.
std::vector<FaultSpec> table1_faults(Table1Case c);

struct ScenarioOptions {
  CellParams cell;
  SensorModel sensor;
  /// Replaces the pseudo-FUDS drive; repeated or cut to two cycles.
  std::optional<TimeSeries> profile;
};

/// Two FUDS cycles (2740 s at 1 Hz) with the selected faults injected.
SimOutput make_scenario(Table1Case c, std::uint64_t seed,
                        const ScenarioOptions& options = {});

}  // namespace tmsc
