#include "tactile/checks.hpp"

#include <set>
#include <sstream>

#include "tactile/kernels.hpp"

namespace tactile::checks {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

CheckResult effective_resolution(const session::SessionConfig& cfg) {
  const int steps = sensing::effective_steps(cfg.light, cfg.sensor);
  return {"effective-resolution",
          steps >= kMinEffectiveSteps && steps <= kMaxEffectiveSteps,
          std::to_string(steps) + " distinct detected steps (want " +
              std::to_string(kMinEffectiveSteps) + "-" + std::to_string(kMaxEffectiveSteps) +
              ")"};
}

CheckResult level_census(const session::SessionConfig& cfg) {
  constexpr std::size_t n = 20001;  // u = -1 + i * 1e-4
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = -1.0 + static_cast<double>(i) * 1e-4;
  std::vector<std::int32_t> levels(n);
  kernels::quantize_levels(u, cfg.actuator.levels, levels);

  bool monotone = true;
  bool idempotent = true;
  std::set<int> distinct;
  for (std::size_t i = 0; i < n; ++i) {
    distinct.insert(levels[i]);
    if (i > 0 && levels[i] < levels[i - 1]) monotone = false;
    const actuation::Quantized q = actuation::quantize(u[i], cfg.actuator.levels);
    if (q.level != levels[i] || actuation::quantize(q.u_q, cfg.actuator.levels).level != q.level) {
      idempotent = false;
    }
  }
  const bool full_range = !distinct.empty() && *distinct.begin() == 0 &&
                          *distinct.rbegin() == actuation::kLevels - 1;
  const bool pass = distinct.size() == actuation::kLevels && full_range && monotone && idempotent;
  return {"level-census", pass,
          std::to_string(distinct.size()) + " distinct levels (want " +
              std::to_string(actuation::kLevels) + "), monotone=" + (monotone ? "yes" : "no") +
              ", idempotent=" + (idempotent ? "yes" : "no")};
}

CheckResult rate_exactness(const session::SessionConfig& cfg) {
  session::SessionConfig one_second = cfg;
  one_second.duration_s = 1.0;
  const session::SessionTrace trace = session::run_session(one_second);
  const auto want_sensor = static_cast<std::size_t>(cfg.sensor.rate_hz);
  const auto want_actuator = static_cast<std::size_t>(cfg.actuator.rate_hz);
  const auto want_physics = static_cast<std::size_t>(1.0 / cfg.physics.dt + 0.5);
  bool codes_ok = true;
  for (const auto& r : trace.sensor_rows) {
    if (r.raw_code < 0 || r.raw_code > cfg.sensor.full_scale()) codes_ok = false;
  }
  const bool pass = trace.sensor_rows.size() == want_sensor &&
                    trace.actuator_rows.size() == want_actuator &&
                    trace.physics_rows.size() == want_physics && codes_ok;
  return {"rate-exactness", pass,
          "1 s -> sensor " + std::to_string(trace.sensor_rows.size()) + "/" +
              std::to_string(want_sensor) + ", actuator " +
              std::to_string(trace.actuator_rows.size()) + "/" + std::to_string(want_actuator) +
              ", physics " + std::to_string(trace.physics_rows.size()) + "/" +
              std::to_string(want_physics) + (codes_ok ? "" : ", raw code out of range")};
}

CheckResult coupling_vs_rigid(const session::SessionConfig& cfg) {
  const session::SessionTrace live = session::run_session(cfg);
  const session::SessionTrace rigid = session::run_session(session::rigid_hand(cfg));
  const std::optional<double> score = session::coupling_score(live);
  const std::optional<double> baseline = session::coupling_score(rigid);
  if (!score) {
    return {"coupling-vs-rigid", false,
            "no trigger (or too short after it): coupling score undefined"};
  }
  const double floor = baseline.value_or(0.0);
  const bool pass = *score > kMinCouplingScore && *score > kCouplingOverBaseline * floor;
  return {"coupling-vs-rigid", pass,
          "score " + fmt(*score) + ", rigid baseline " +
              (baseline ? fmt(*baseline) : std::string{"undefined"}) + ", triggers " +
              std::to_string(live.trigger_count())};
}

std::vector<CheckResult> run_all(const session::SessionConfig& cfg) {
  return {effective_resolution(cfg), level_census(cfg), rate_exactness(cfg),
          coupling_vs_rigid(cfg)};
}

}  // namespace tactile::checks
