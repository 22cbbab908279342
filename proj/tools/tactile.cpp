// tactile: offline simulation, device checks and the live service.
//
//   tactile simulate [--config PATH] --out DIR [--set KEY=VALUE]...
//   tactile check    [--config PATH] [--set KEY=VALUE]...
//   tactile serve    [--config PATH] [--bind ADDR:PORT] [--static DIR] [--set KEY=VALUE]...
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tactile/checks.hpp"
#include "tactile/config.hpp"
#include "tactile/error.hpp"
#include "tactile/kernels.hpp"
#include "tactile/server.hpp"
#include "tactile/session.hpp"
#include "tactile/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

using namespace tactile;

session::SessionConfig load_config(const std::string& path,
                                   const std::vector<std::string>& overrides) {
  if (!path.empty()) return config::load(path, overrides);
  nlohmann::json doc = config::to_json(session::SessionConfig{});
  for (const auto& o : overrides) config::apply_override(doc, o);
  session::SessionConfig cfg = config::from_json(doc);
  session::validate(cfg);
  return cfg;
}

int simulate(const std::string& config_path, const std::string& out_dir,
             const std::vector<std::string>& overrides) {
  const session::SessionConfig cfg = load_config(config_path, overrides);
  const session::SessionTrace trace = session::run_session(cfg);
  trace_io::export_trace(trace, out_dir);
  const std::optional<double> score = session::coupling_score(trace);
  std::cout << "triggers: " << trace.trigger_count() << "\n"
            << "sound_events: " << trace.sound_events.size() << "\n"
            << "coupling_score: " << (score ? std::to_string(*score) : "undefined") << "\n"
            << "wrote: " << out_dir << "\n";
  return kExitOk;
}

int check(const std::string& config_path, const std::vector<std::string>& overrides) {
  const session::SessionConfig cfg = load_config(config_path, overrides);
  bool all = true;
  for (const checks::CheckResult& r : checks::run_all(cfg)) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.pass;
  }
  std::cout << "kernels: " << kernels::name(kernels::active_isa()) << "\n";
  return all ? kExitOk : kExitRuntime;
}

int serve(const std::string& config_path, const std::string& bind,
          const std::string& static_dir, const std::vector<std::string>& overrides) {
  const session::SessionConfig cfg = load_config(config_path, overrides);
  app::ServerOptions options;
  app::parse_bind(bind, options);
  options.static_dir = static_dir;
  app::Server server(cfg, options);
  std::cout << "serving on " << options.address << ":" << server.port()
            << " (ws: /ws, config: /config, static: " << static_dir << ")" << std::endl;
  server.run();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Closed tactile loop simulator"};
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string bind = "127.0.0.1:8080";
  std::string static_dir = "ui/dist";
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "session config JSON (defaults if omitted)");
    sub->add_option("--set", overrides, "override KEY=VALUE, dotted key path")->take_all();
  };

  CLI::App* sim = cli.add_subcommand("simulate", "run a session and export its trace");
  add_common(sim);
  sim->add_option("--out", out_dir, "output directory")->required();

  CLI::App* chk = cli.add_subcommand("check", "run the quantitative device checks");
  add_common(chk);

  CLI::App* srv = cli.add_subcommand("serve", "run a live session over WebSocket");
  add_common(srv);
  srv->add_option("--bind", bind, "ADDR:PORT");
  srv->add_option("--static", static_dir, "directory of UI assets");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (sim->parsed()) return simulate(config_path, out_dir, overrides);
    if (chk->parsed()) return check(config_path, overrides);
    if (srv->parsed()) return serve(config_path, bind, static_dir, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return e.path() == config_path ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}
