// beaconsim: run one beaconing scenario or compare two metrics files.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "beaconsim/config.hpp"
#include "beaconsim/engine.hpp"
#include "beaconsim/errors.hpp"
#include "beaconsim/metrics.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

void init_logging() {
  auto logger = spdlog::stderr_color_mt("beaconsim");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("BEACONSIM_LOG")) {
    auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      spdlog::warn("unknown BEACONSIM_LOG level '{}', keeping warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

struct RunArgs {
  std::string protocol;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> duration_s;
  std::string out_path;
  std::string trace_path;
  std::string analysis_path;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw beaconsim::IoError("cannot open " + path + " for writing");
  return out;
}

int run_command(const RunArgs& args) {
  beaconsim::SimConfig cfg;
  if (!args.config_path.empty()) beaconsim::apply_config_file(args.config_path, cfg);
  if (!args.protocol.empty()) cfg.protocol = beaconsim::parse_protocol(args.protocol);
  if (args.seed) cfg.seed = *args.seed;
  if (args.duration_s) cfg.duration_s = *args.duration_s;
  if (!args.out_path.empty()) cfg.metrics_path = args.out_path;
  if (!args.trace_path.empty()) cfg.trace_path = args.trace_path;
  if (!args.analysis_path.empty()) cfg.analysis_path = args.analysis_path;
  cfg.validate();

  std::ofstream trace;
  std::ofstream analysis;
  beaconsim::RunObservers observers;
  if (!cfg.trace_path.empty()) {
    trace = open_output(cfg.trace_path);
    trace << beaconsim::kTraceHeader << '\n';
    observers.on_reception = [&](const beaconsim::TraceRecord& r) {
      trace << beaconsim::format_trace_line(r) << '\n';
    };
  }
  if (!cfg.analysis_path.empty()) {
    analysis = open_output(cfg.analysis_path);
    analysis << beaconsim::kAnalysisHeader << '\n';
    observers.on_analysis = [&](const beaconsim::AnalysisRecord& r) {
      analysis << beaconsim::format_analysis_line(r) << '\n';
    };
  }

  spdlog::info("running protocol={} seed={} duration={}s vehicles={}", beaconsim::to_string(cfg.protocol),
               cfg.seed, cfg.duration_s, cfg.mobility.n_vehicles);
  beaconsim::Simulator sim(cfg, std::move(observers));
  const auto rows = sim.run();

  if (cfg.metrics_path.empty()) {
    std::cout << beaconsim::format_metrics_csv(rows);
  } else {
    beaconsim::write_metrics_csv(rows, cfg.metrics_path);
  }
  if (trace.is_open() && !trace.flush()) throw beaconsim::IoError("failed writing " + cfg.trace_path);
  if (analysis.is_open() && !analysis.flush()) throw beaconsim::IoError("failed writing " + cfg.analysis_path);
  return 0;
}

int compare_command(const std::string& a_path, const std::string& b_path) {
  const auto a = beaconsim::read_metrics_csv(a_path);
  const auto b = beaconsim::read_metrics_csv(b_path);
  std::cout << beaconsim::format_comparison(beaconsim::compare_runs(a, b));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();

  CLI::App app{"Deterministic VANET beacon power-control simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one scenario and write per-epoch metrics");
  run->add_option("--protocol", run_args.protocol, "Power control: pbpc, dfpav or none")
      ->check(CLI::IsMember({"pbpc", "dfpav", "none"}));
  run->add_option("--config", run_args.config_path, "Key-value config file (section.key = value)");
  run->add_option("--seed", run_args.seed, "Scenario seed");
  run->add_option("--duration-s", run_args.duration_s, "Simulated seconds");
  run->add_option("--out", run_args.out_path, "Metrics CSV path (stdout when omitted)");
  run->add_option("--trace", run_args.trace_path, "Optional per-reception beacon trace CSV");
  run->add_option("--analysis", run_args.analysis_path, "Optional per-vehicle channel analysis CSV");

  std::string a_path;
  std::string b_path;
  auto* compare = app.add_subcommand("compare", "Compare two metrics CSVs (ratios are b/a)");
  compare->add_option("csv_a", a_path)->required();
  compare->add_option("csv_b", b_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(run_args);
    if (*compare) return compare_command(a_path, b_path);
  } catch (const beaconsim::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kExitConfig;
  } catch (const beaconsim::SchemaError& e) {
    spdlog::error("schema mismatch: {}", e.what());
    return kExitConfig;
  } catch (const beaconsim::IoError& e) {
    spdlog::error("I/O error: {}", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
