// tmsc: wavelet-coherence short-circuit detection from the command line.
//
// Exit codes: 0 ran with no faults, 2 ran and detected faults, 1 error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tmsc/battery_sim.hpp"
#include "tmsc/detector.hpp"
#include "tmsc/error.hpp"
#include "tmsc/io.hpp"
#include "tmsc/spectral.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitFaults = 2;

tmsc::ThresholdPolicy parse_threshold(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  if (colon == std::string::npos) {
    throw tmsc::Error(tmsc::Errc::invalid_config,
                      "threshold must be fixed:V or robust:K, got '" + text + "'");
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text.substr(colon + 1), &used);
    if (colon + 1 + used != text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw tmsc::Error(tmsc::Errc::invalid_config, "bad threshold value in '" + text + "'");
  }
  if (kind == "fixed") return tmsc::FixedThreshold{value};
  if (kind == "robust") return tmsc::RobustThreshold{value};
  throw tmsc::Error(tmsc::Errc::invalid_config, "unknown threshold policy '" + kind + "'");
}

struct AnalyzeArgs {
  std::string input;
  std::optional<double> window_start;
  double window_len = tmsc::kDefaultWindowLength;
  std::optional<double> f_split;
  double f_min = 0.0024;
  double f_max = 0.5;
  int voices = 12;
  double omega0 = 6.0;
  std::string threshold = "robust:6";
  std::string report;
  std::string dump_coherence;
};

struct SimulateArgs {
  std::string scenario = "all";
  std::uint64_t seed = 42;
  std::string profile;
  std::string out;
  std::string truth;
};

struct SpectrumArgs {
  std::string input;
  std::string channel = "voltage";
  std::string out;
  double f_min = 0.0024;
  double f_max = 0.5;
  int voices = 12;
  double omega0 = 6.0;
};

int run_analyze(const AnalyzeArgs& a) {
  const auto data = tmsc::load_telemetry_csv(a.input);

  tmsc::DetectorConfig config;
  config.window.length = a.window_len;
  config.f_min = a.f_min;
  config.f_max = a.f_max;
  config.voices_per_octave = a.voices;
  config.morlet.omega0 = a.omega0;
  config.threshold = parse_threshold(a.threshold);
  if (a.f_split) config.split = tmsc::BandSplit{*a.f_split};

  std::vector<tmsc::DetectionReport> reports;
  if (a.window_start) {
    config.window.start = *a.window_start;
    reports.push_back(tmsc::analyze(data.voltage, data.current, config));
  } else {
    reports = tmsc::analyze_windows(data.voltage, data.current, config);
  }

  std::size_t total = 0;
  for (const auto& r : reports) {
    std::printf("window %.9g s +%.9g s: threshold %.6g, %zu event(s)\n",
                r.config.window.start, r.config.window.length, r.threshold,
                r.events.size());
    for (const auto& e : r.events) {
      std::printf("  %s %.9g-%.9g s peak %.9g s score %.6g at %.6g Hz\n",
                  std::string(tmsc::to_string(e.label)).c_str(), e.t_start, e.t_end,
                  e.peak_time, e.peak_score, e.peak_frequency);
    }
    total += r.events.size();
  }

  if (!a.report.empty()) {
    if (a.window_start) {
      tmsc::write_report_json(reports.front(), a.report);
    } else {
      tmsc::write_report_json(std::span<const tmsc::DetectionReport>(reports), a.report);
    }
  }
  if (!a.dump_coherence.empty()) {
    std::vector<tmsc::MatrixDump> parts;
    for (const auto& r : reports) parts.push_back(tmsc::to_dump(r.coherence));
    tmsc::dump_matrix_csv(tmsc::concat_time(parts), a.dump_coherence);
  }
  return total > 0 ? kExitFaults : kExitClean;
}

int run_simulate(const SimulateArgs& a) {
  const auto scenario = tmsc::parse_table1_case(a.scenario);
  if (!scenario || *scenario == tmsc::Table1Case::none) {
    throw tmsc::Error(tmsc::Errc::invalid_config,
                      "scenario must be all, 1, 2, 3, 4 or 5, got '" + a.scenario + "'");
  }
  tmsc::ScenarioOptions options;
  if (!a.profile.empty()) options.profile = tmsc::load_profile_csv(a.profile);
  const auto sim = tmsc::make_scenario(*scenario, a.seed, options);
  tmsc::write_telemetry_csv(sim.voltage, sim.current, a.out);
  if (!a.truth.empty()) tmsc::write_truth_json(sim.truth, a.truth);
  std::printf("wrote %zu samples, %zu fault(s)\n", sim.voltage.size(), sim.truth.size());
  return kExitClean;
}

int run_spectrum(const SpectrumArgs& a) {
  const auto data = tmsc::load_telemetry_csv(a.input);
  tmsc::MorletParams morlet;
  morlet.omega0 = a.omega0;
  morlet.validate();
  const auto grid = tmsc::build_scale_grid(a.f_min, a.f_max, a.voices, morlet);
  const auto& series = a.channel == "voltage" ? data.voltage : data.current;
  tmsc::dump_matrix_csv(tmsc::to_dump(tmsc::cwt(series, grid, morlet)), a.out);
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient micro short-circuit detection by wavelet coherence"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Detect incoherent events in telemetry");
  analyze->add_option("--input", an.input, "CSV with time_s,voltage_v,current_a")
      ->required()->check(CLI::ExistingFile);
  analyze->add_option("--window-start", an.window_start,
                      "Analyze one window from this time (default: tile the input)");
  analyze->add_option("--window-len", an.window_len, "Window length in seconds")
      ->capture_default_str();
  analyze->add_option("--f-split", an.f_split, "Band demarcation in Hz (default 0.1/dt)");
  analyze->add_option("--f-min", an.f_min, "Lowest grid frequency")->capture_default_str();
  analyze->add_option("--f-max", an.f_max, "Highest grid frequency")->capture_default_str();
  analyze->add_option("--voices", an.voices, "Voices per octave")->capture_default_str();
  analyze->add_option("--omega0", an.omega0, "Morlet center frequency")->capture_default_str();
  analyze->add_option("--threshold", an.threshold, "fixed:V or robust:K")
      ->capture_default_str();
  analyze->add_option("--report", an.report, "Write a JSON report here");
  analyze->add_option("--dump-coherence", an.dump_coherence,
                      "Write the coherence map as CSV here");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate faulted cell telemetry");
  simulate->add_option("--scenario", sim.scenario, "all, 1, 2, 3, 4 or 5")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Drive profile and sensor noise seed")
      ->capture_default_str();
  simulate->add_option("--profile", sim.profile, "CSV with time_s,current_a at 1 Hz")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Telemetry CSV output")->required();
  simulate->add_option("--truth", sim.truth, "Injected faults as JSON");

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "Dump a scalogram magnitude grid");
  spectrum->add_option("--input", sp.input, "CSV with time_s,voltage_v,current_a")
      ->required()->check(CLI::ExistingFile);
  spectrum->add_option("--channel", sp.channel, "voltage or current")
      ->check(CLI::IsMember({"voltage", "current"}))->capture_default_str();
  spectrum->add_option("--out", sp.out, "Matrix CSV output")->required();
  spectrum->add_option("--f-min", sp.f_min, "Lowest grid frequency")->capture_default_str();
  spectrum->add_option("--f-max", sp.f_max, "Highest grid frequency")->capture_default_str();
  spectrum->add_option("--voices", sp.voices, "Voices per octave")->capture_default_str();
  spectrum->add_option("--omega0", sp.omega0, "Morlet center frequency")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (*analyze) return run_analyze(an);
    if (*simulate) return run_simulate(sim);
    if (*spectrum) return run_spectrum(sp);
  } catch (const tmsc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
