// speechjudge command-line entry point.
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/pipeline/annotation.h"
#include "speechjudge/pipeline/commands.h"
#include "speechjudge/pipeline/export.h"

namespace sj = speechjudge;
namespace pl = speechjudge::pipeline;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kBadConfig = 2,
  kPendingRationales = 3,
  kAborted = 4,
};

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> concurrency;
  std::optional<std::string> backend;
  bool both_orders = false;
  int stage = 1;
  double sigma = 1.0;
  std::string host = "127.0.0.1";
  int port = 8088;
  std::string log_level = "info";
};

pl::PipelineConfig load(const Overrides& o) {
  auto config = pl::load_config(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.concurrency) config.concurrency = *o.concurrency;
  if (o.backend) config.backend = sj::judge::parse_backend(*o.backend);
  if (o.both_orders) config.both_orders = true;
  config.validate();
  return config;
}

pl::AnnotationServer* g_server = nullptr;

int serve(const pl::PipelineConfig& config, const Overrides& o) {
  const auto records = pl::load_dataset_records(config.dataset_dir);
  pl::ModelLabels model;
  for (auto backend : {"e2e", "cascaded"}) {
    const auto path = config.dataset_dir / fmt::format("verdicts_{}.jsonl", backend);
    if (std::filesystem::exists(path)) {
      model = pl::load_model_labels(path);
      spdlog::info("model labels from {}", path.string());
      break;
    }
  }
  pl::AnnotationStore store(config.dataset_dir / "annotations.jsonl");
  pl::AnnotationService service(records, std::move(model), store, config.seed);
  pl::AnnotationServer server(service, config.dataset_dir);
  const int port = server.bind(o.host, o.port);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  spdlog::info("annotation facade on http://{}:{}", o.host, port);
  server.run();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech preference data construction, judging and metrics"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error")
      ->capture_default_str();

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Pipeline config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Override the global seed");
    sub->add_option("--concurrency", o.concurrency, "Parallel work units / in-flight calls")
        ->check(CLI::PositiveNumber);
    return sub;
  };

  auto* build_semantic = with_config(app.add_subcommand("build-semantic", "Build semantic pairs"));
  auto* build_acoustic = with_config(app.add_subcommand("build-acoustic", "Build acoustic pairs"));
  auto* judge_cmd = with_config(app.add_subcommand("judge", "Judge a dataset and report metrics"));
  auto* report_cmd = with_config(app.add_subcommand("report", "Print a stored metric report"));
  auto* export_cmd = with_config(app.add_subcommand("export-sft", "Export training records"));
  auto* serve_cmd = with_config(app.add_subcommand("serve", "Run the annotation HTTP facade"));
  auto* reward_cmd = app.add_subcommand("reward-table", "Print the accuracy reward grid");

  for (auto* sub : {judge_cmd, report_cmd}) {
    sub->add_option("--backend", o.backend, "e2e or cascaded")
        ->check(CLI::IsMember({"e2e", "cascaded"}));
  }
  judge_cmd->add_flag("--both-orders", o.both_orders, "Also judge with responses swapped");
  export_cmd->add_option("--stage", o.stage, "1 (semantic) or 2 (acoustic + replay)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  reward_cmd->add_option("--sigma", o.sigma, "Gaussian spread")->capture_default_str();
  serve_cmd->add_option("--host", o.host)->capture_default_str();
  serve_cmd->add_option("--port", o.port, "0 picks a free port")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }
  spdlog::set_default_logger(spdlog::stderr_color_mt("speechjudge"));
  spdlog::set_level(spdlog::level::from_str(o.log_level));

  try {
    if (reward_cmd->parsed()) {
      std::cout << pl::cmd_reward_table(o.sigma);
      return kOk;
    }
    const auto config = load(o);
    if (build_semantic->parsed()) {
      const auto m = pl::cmd_build_semantic(config, pl::make_build_services(config));
      std::cout << pl::to_json(m).dump(2) << '\n';
    } else if (build_acoustic->parsed()) {
      const auto m = pl::cmd_build_acoustic(config, pl::make_build_services(config));
      std::cout << pl::to_json(m).dump(2) << '\n';
    } else if (judge_cmd->parsed()) {
      const auto records = pl::load_dataset_records(config.dataset_dir);
      const auto out = pl::cmd_judge(config, pl::make_judge_clients(config, records));
      std::cout << sj::metrics::render_table(out.report,
                                             std::string(sj::judge::to_string(config.backend)));
    } else if (report_cmd->parsed()) {
      std::cout << pl::cmd_report(config.dataset_dir, config.backend);
    } else if (export_cmd->parsed()) {
      const auto summary = pl::cmd_export_sft(config, o.stage);
      std::cout << fmt::format("{}: {} semantic, {} acoustic, {} pending excluded\n",
                               summary.output.string(), summary.semantic, summary.acoustic,
                               summary.pending.size());
      for (const auto& p : summary.pending) std::cout << "pending: " << p << '\n';
      if (!summary.pending.empty()) return kPendingRationales;
    } else if (serve_cmd->parsed()) {
      return serve(config, o);
    }
  } catch (const sj::ConfigError& e) {
    spdlog::error("{}", e.what());
    return kBadConfig;
  } catch (const sj::TransportError& e) {
    spdlog::error("{}", e.what());
    return kAborted;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kFailure;
  }
  return kOk;
}
