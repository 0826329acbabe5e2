#include "tmsc/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "tmsc/error.hpp"

namespace tmsc {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string_view> split_fields(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos
                                        ? std::string_view::npos
                                        : comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line_no) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "bad number '" + std::string(text) + "'", line_no);
  }
  return value;
}

/// Columns of a CSV file, selected by header name.
std::vector<std::vector<double>> read_columns(const std::filesystem::path& path,
                                              std::span<const std::string_view> names) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::too_short, "empty file " + path.string());
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split_fields(line);

  std::vector<std::size_t> index;
  for (const auto name : names) {
    std::size_t found = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) found = c;
    }
    if (found == header.size()) {
      throw Error(Errc::missing_column, "no column '" + std::string(name) + "'");
    }
    index.push_back(found);
  }

  std::vector<std::vector<double>> columns(names.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::parse_error,
                  "expected " + std::to_string(header.size()) + " fields", line_no);
    }
    for (std::size_t c = 0; c < index.size(); ++c) {
      columns[c].push_back(parse_double(fields[index[c]], line_no));
    }
  }
  return columns;
}

/// Period that best reproduces the time column as t0 + k*dt.
double infer_dt(std::span<const double> times) {
  const std::size_t n = times.size();
  const double estimate = (times.back() - times.front()) / static_cast<double>(n - 1);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", estimate);
  std::vector<double> candidates{std::strtod(buf, nullptr), estimate};
  double up = estimate;
  double down = estimate;
  for (int step = 0; step < 2; ++step) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    candidates.push_back(up);
    candidates.push_back(down);
  }
  double best = estimate;
  double best_err = std::numeric_limits<double>::infinity();
  for (double dt : candidates) {
    if (!(dt > 0.0)) continue;
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      err = std::max(err, std::abs(times.front() + static_cast<double>(k) * dt - times[k]));
    }
    if (err < best_err) {
      best = dt;
      best_err = err;
    }
  }
  return best;
}

TimeSeries to_series(std::span<const double> times, std::span<const double> values,
                     double dt, Unit unit) {
  std::vector<Sample> raw(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) raw[k] = {times[k], values[k]};
  return validate_series(raw, dt, std::nullopt, unit);
}

std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string sig9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kReportDigits, x);
  return buf;
}

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(sig9(x).c_str(), nullptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

std::string_view to_string(NormalizationScope s) {
  return s == NormalizationScope::global ? "global" : "per_scale";
}

std::string_view to_string(BandStatistic s) {
  return s == BandStatistic::mean ? "mean" : "max";
}

std::string_view to_string(CwtNormalization n) {
  return n == CwtNormalization::l1 ? "l1" : "l2";
}

json config_json(const DetectorConfig& c, const BandSplit& split) {
  json threshold;
  if (const auto* f = std::get_if<FixedThreshold>(&c.threshold)) {
    threshold = {{"policy", "fixed"}, {"value", num(f->value)}};
  } else {
    threshold = {{"policy", "robust"}, {"k", num(std::get<RobustThreshold>(c.threshold).k)}};
  }
  return {
      {"window_start", num(c.window.start)},
      {"window_length", num(c.window.length)},
      {"f_min", num(c.f_min)},
      {"f_max", num(c.f_max)},
      {"voices_per_octave", c.voices_per_octave},
      {"omega0", num(c.morlet.omega0)},
      {"cwt_normalization", to_string(c.morlet.normalization)},
      {"f_split", num(split.f_split)},
      {"threshold", threshold},
      {"min_event_gap", num(c.min_event_gap)},
      {"normalization", to_string(c.normalization)},
      {"band_statistic", to_string(c.band_statistic)},
  };
}

json report_json(const DetectionReport& r) {
  json events = json::array();
  for (const auto& e : r.events) {
    events.push_back({
        {"t_start", num(e.t_start)},
        {"t_end", num(e.t_end)},
        {"peak_time", num(e.peak_time)},
        {"peak_score", num(e.peak_score)},
        {"peak_frequency", num(e.peak_frequency)},
        {"label", to_string(e.label)},
    });
  }
  json score_values = json::array();
  for (double v : r.score.values()) score_values.push_back(num(v));
  json profile = json::array();
  for (const auto& p : r.mean_profile) {
    profile.push_back({{"frequency", num(p.frequency)}, {"value", num(p.value)}});
  }
  return {
      {"config", config_json(r.config, r.split)},
      {"threshold", num(r.threshold)},
      {"events", events},
      {"band_score", {{"t0", num(r.score.t0())}, {"dt", num(r.score.dt())}, {"values", score_values}}},
      {"mean_profile", profile},
  };
}

void write_json(const json& doc, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

MatrixDump dump_from(const Matrix<double>& values, const ScaleGrid& grid, double t0,
                     double dt) {
  MatrixDump d;
  d.values = values;
  d.frequencies = grid.frequencies;
  d.times.resize(values.cols());
  for (std::size_t c = 0; c < values.cols(); ++c) d.times[c] = t0 + static_cast<double>(c) * dt;
  return d;
}

}  // namespace

Telemetry load_telemetry_csv(const std::filesystem::path& path) {
  constexpr std::array<std::string_view, 3> names{"time_s", "voltage_v", "current_a"};
  const auto cols = read_columns(path, names);
  if (cols[0].size() < 2) {
    throw Error(Errc::too_short, "need at least 2 samples in " + path.string());
  }
  const double dt = infer_dt(cols[0]);
  return {to_series(cols[0], cols[1], dt, Unit::volts),
          to_series(cols[0], cols[2], dt, Unit::amperes)};
}

void write_telemetry_csv(const TimeSeries& voltage, const TimeSeries& current,
                         const std::filesystem::path& path) {
  if (voltage.size() != current.size() || voltage.t0() != current.t0() ||
      voltage.dt() != current.dt()) {
    throw Error(Errc::mismatched_channels, "voltage and current differ in time base");
  }
  auto out = open_out(path);
  out << "time_s,voltage_v,current_a\n";
  for (std::size_t k = 0; k < voltage.size(); ++k) {
    out << shortest(voltage.time_at(k)) << ',' << shortest(voltage[k]) << ','
        << shortest(current[k]) << '\n';
  }
  finish(out, path);
}

TimeSeries load_profile_csv(const std::filesystem::path& path) {
  constexpr std::array<std::string_view, 2> names{"time_s", "current_a"};
  const auto cols = read_columns(path, names);
  if (cols[0].size() < 2) {
    throw Error(Errc::too_short, "need at least 2 samples in " + path.string());
  }
  return to_series(cols[0], cols[1], infer_dt(cols[0]), Unit::amperes);
}

std::string report_json_string(const DetectionReport& report) {
  return report_json(report).dump(2);
}

void write_report_json(const DetectionReport& report,
                       const std::filesystem::path& path) {
  write_json(report_json(report), path);
}

void write_report_json(std::span<const DetectionReport> reports,
                       const std::filesystem::path& path) {
  json windows = json::array();
  std::size_t count = 0;
  for (const auto& r : reports) {
    windows.push_back(report_json(r));
    count += r.events.size();
  }
  write_json({{"windows", windows}, {"event_count", count}}, path);
}

MatrixDump to_dump(const CoherenceMap& map) {
  return dump_from(map.data, map.grid, map.t0, map.dt);
}

MatrixDump to_dump(const NormalizedMap& map) {
  return dump_from(map.data, map.grid, map.t0, map.dt);
}

MatrixDump to_dump(const Scalogram& s) {
  Matrix<double> mag(s.data.rows(), s.data.cols());
  for (std::size_t k = 0; k < mag.flat().size(); ++k) {
    mag.flat()[k] = std::abs(s.data.flat()[k]);
  }
  return dump_from(mag, s.grid, s.t0, s.dt);
}

MatrixDump concat_time(std::span<const MatrixDump> parts) {
  if (parts.empty()) throw Error(Errc::empty_input, "nothing to concatenate");
  MatrixDump out;
  out.frequencies = parts.front().frequencies;
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.frequencies != out.frequencies) {
      throw Error(Errc::shape_mismatch, "dumps have different frequency axes");
    }
    cols += p.times.size();
  }
  out.values = Matrix<double>(out.frequencies.size(), cols);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < out.frequencies.size(); ++r) {
      for (std::size_t c = 0; c < p.times.size(); ++c) {
        out.values(r, offset + c) = p.values(r, c);
      }
    }
    out.times.insert(out.times.end(), p.times.begin(), p.times.end());
    offset += p.times.size();
  }
  return out;
}

void dump_matrix_csv(const MatrixDump& dump, const std::filesystem::path& path) {
  if (dump.values.rows() != dump.frequencies.size() ||
      dump.values.cols() != dump.times.size()) {
    throw Error(Errc::shape_mismatch, "axes do not match the matrix");
  }
  auto out = open_out(path);
  out << "frequency_hz\\time_s";
  for (double t : dump.times) out << ',' << sig9(t);
  out << '\n';
  for (std::size_t r = 0; r < dump.frequencies.size(); ++r) {
    out << sig9(dump.frequencies[r]);
    for (double v : dump.values.row(r)) out << ',' << sig9(v);
    out << '\n';
  }
  finish(out, path);
}

MatrixDump parse_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::too_short, "empty file " + path.string());

  MatrixDump d;
  const auto header = split_fields(line);
  for (std::size_t c = 1; c < header.size(); ++c) d.times.push_back(parse_double(header[c], 1));

  std::vector<double> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(Errc::parse_error, "ragged row", line_no);
    }
    d.frequencies.push_back(parse_double(fields[0], line_no));
    for (std::size_t c = 1; c < fields.size(); ++c) {
      cells.push_back(parse_double(fields[c], line_no));
    }
  }
  d.values = Matrix<double>(d.frequencies.size(), d.times.size());
  std::copy(cells.begin(), cells.end(), d.values.flat().begin());
  return d;
}

void write_truth_json(std::span<const FaultSpec> faults,
                      const std::filesystem::path& path) {
  json list = json::array();
  for (const auto& f : faults) {
    json item{{"kind", to_string(f.kind)}};
    if (f.has_short()) item["r_sc"] = num(f.r_sc);
    if (f.has_pulse()) {
      item["amps"] = num(f.amps);
      item["direction"] = to_string(f.direction);
    }
    item["t_start"] = num(f.t_start);
    item["t_end"] = num(f.t_end);
    list.push_back(item);
  }
  write_json({{"faults", list}}, path);
}

}  // namespace tmsc
