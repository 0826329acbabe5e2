#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tmsc/battery_sim.hpp"
#include "tmsc/coherence.hpp"
#include "tmsc/detector.hpp"
#include "tmsc/matrix.hpp"
#include "tmsc/signal.hpp"
#include "tmsc/spectral.hpp"

namespace tmsc {

struct Telemetry {
  TimeSeries voltage;
  TimeSeries current;
};

/// Reads `time_s,voltage_v,current_a` (columns located by header name).
/// The sample period is inferred from the time column and checked with
/// validate_series at the default tolerance.
Telemetry load_telemetry_csv(const std::filesystem::path& path);

/// Shortest round-trip formatting; load_telemetry_csv reproduces the series.
void write_telemetry_csv(const TimeSeries& voltage, const TimeSeries& current,
                         const std::filesystem::path& path);

/// Reads a `time_s,current_a` drive profile.
TimeSeries load_profile_csv(const std::filesystem::path& path);

/// Significant digits used for every number in reports and matrix dumps.
inline constexpr int kReportDigits = 9;

/// Single-window report.
void write_report_json(const DetectionReport& report,
                       const std::filesystem::path& path);

/// Multi-window report: {"windows": [...], "event_count": n}.
void write_report_json(std::span<const DetectionReport> reports,
                       const std::filesystem::path& path);

std::string report_json_string(const DetectionReport& report);

/// Plot-ready grid: time across, frequency (descending) down.
struct MatrixDump {
  std::vector<double> times;
  std::vector<double> frequencies;
  Matrix<double> values;
};

MatrixDump to_dump(const CoherenceMap& map);
MatrixDump to_dump(const NormalizedMap& map);
/// Modulus of the complex coefficients.
MatrixDump to_dump(const Scalogram& scalogram);

/// Joins dumps side by side; all parts must share the frequency axis.
MatrixDump concat_time(std::span<const MatrixDump> parts);

void dump_matrix_csv(const MatrixDump& dump, const std::filesystem::path& path);
MatrixDump parse_matrix_csv(const std::filesystem::path& path);

void write_truth_json(std::span<const FaultSpec> faults,
                      const std::filesystem::path& path);

}  // namespace tmsc
