// bearing_game command-line tool.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bearing_game/bearing_game.hpp"

namespace fs = std::filesystem;
using namespace bearing_game;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kOk = 0, kThresholdFailed = 1, kConfigError = 2, kRuntimeError = 3, kDomainError = 4 };

constexpr const char* kExitHelp =
    "Exit codes: 0 ok, 1 suite threshold failed, 2 config error, 3 runtime error, 4 domain error.";

std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void writeManifest(const fs::path& dir, const std::string& command, const std::string& configPath, json resolved) {
  json m;
  m["command"] = command;
  m["config_path"] = configPath;
  m["output_dir"] = dir.string();
  m["resolved_config"] = std::move(resolved);
  m["determinism"] = "no randomness; data files are byte-identical across runs on one platform";
  m["tool_version"] = kToolVersion;
  m["created_utc"] = utcTimestamp();
  writeText((dir / "manifest.json").string(), m.dump(2) + "\n");
}

fs::path prepareDir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + out + "': " + ec.message());
  return dir;
}

unsigned jobsDefault() {
  if (const char* env = std::getenv("BEARING_GAME_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    throw ConfigError("BEARING_GAME_JOBS", "must be a positive integer");
  }
  return defaultJobs();
}

const char* hazardName(HazardKind k) {
  switch (k) {
    case HazardKind::NonResponsive: return "non_responsive";
    case HazardKind::OptimalAgile: return "optimal_agile";
    case HazardKind::FiniteTurn: return "finite_turn";
    case HazardKind::Stationary: return "stationary";
  }
  return "?";
}

json toJson(const ScenarioSpec& s, const ResolvedScenario& r) {
  json j;
  if (s.caseId) j["case_id"] = toString(*s.caseId);
  else j["custom"] = {{"va_knots", s.custom->vaKnots}, {"speed_ratio", s.custom->speedRatio}, {"intersect_deg", s.custom->intersectDeg}};
  j["r0_m"] = s.r0M;
  j["hazard_behavior"] = hazardName(s.hazard);
  j["hazard_turn_rate"] = s.hazardTurnRate;
  j["pursuit_gain"] = s.pursuitGain;
  j["strategy"] = s.strategy == AircraftStrategy::Kind::BearingOnly ? "bearing_only" : "optimal_known_speed";
  j["tie_break"] = s.tieBreak == TieBreak::Left ? "left" : "right";
  j["hysteresis_rad"] = s.hysteresisRad;
  j["bank_deg"] = s.bankDeg;
  j["dt"] = r.config.stepSize;
  j["max_time"] = r.config.maxTime;
  j["output"] = {{"dir", s.outputDir}, {"units", s.siUnits ? "si" : "normalized"}};
  j["derived"] = {{"aircraft_speed_mps", r.units.aircraftSpeedSI},
                  {"aircraft_turn_rate_radps", r.units.aircraftTurnRateSI},
                  {"length_scale_m", r.units.lengthScale()},
                  {"nmac_radius_normalized", r.options.nmacRadius}};
  return j;
}

/// Keeps at most about maxRows evenly spaced samples (always including the last).
Trajectory thin(const Trajectory& tr, std::size_t maxRows) {
  if (tr.samples.size() <= maxRows) return tr;
  const std::size_t stride = (tr.samples.size() + maxRows - 1) / maxRows;
  Trajectory out;
  for (std::size_t i = 0; i < tr.samples.size(); i += stride) out.samples.push_back(tr.samples[i]);
  return out;
}

struct SimulateArgs {
  std::string config;
  std::string caseId;
  double r0 = 0.0;
  std::string out;
  double dt = 0.0;
  bool si = false;
  bool normalized = false;
};

int cmdSimulate(const SimulateArgs& a) {
  ScenarioSpec spec;
  if (!a.config.empty()) {
    spec = loadScenario(a.config);
    if (!a.caseId.empty()) {
      spec.caseId = parseCaseId(a.caseId);
      spec.custom.reset();
    }
  } else {
    if (a.caseId.empty()) throw ConfigError("config", "give --config or --case with --r0");
    spec.caseId = parseCaseId(a.caseId);
    if (!(a.r0 > 0.0)) throw ConfigError("r0_m", "--r0 is required with --case and must be positive");
  }
  if (a.r0 > 0.0) spec.r0M = a.r0;
  if (a.dt > 0.0) spec.dt = a.dt;
  if (a.si) spec.siUnits = true;
  if (a.normalized) spec.siUnits = false;
  std::string outDir = a.out.empty() ? spec.outputDir : a.out;
  if (outDir.empty()) outDir = "out/simulate";

  const ResolvedScenario r = resolve(spec);
  const SimResult res = simulate(r.initial, r.strategy, r.hazard, r.config, r.options);

  const fs::path dir = prepareDir(outDir);
  const double L = r.units.lengthScale();
  const OutputScale scale = spec.siUnits ? OutputScale{L, r.units.timeScale()} : OutputScale{};
  {
    std::ostringstream csv;
    writeTrajectoryCsv(csv, thin(res.trajectory, 20000), scale);
    writeText((dir / "trajectory.csv").string(), csv.str());
  }
  const CsvTable traj = CsvTable::load((dir / "trajectory.csv").string());
  writeText((dir / "trajectory.svg").string(),
            trajectorySvg(traj, spec.siUnits ? "m" : "L", spec.siUnits ? "s" : "1/omega_a"));

  json summary;
  summary["scenario"] = spec.label();
  summary["r0_m"] = spec.r0M;
  summary["miss_distance_m"] = res.missDistance * L;
  summary["miss_distance_normalized"] = res.missDistance;
  summary["miss_time_s"] = r.units.toSITime(res.missTime);
  summary["miss_time_normalized"] = res.missTime;
  summary["global_min_range_m"] = res.globalMinRange * L;
  summary["initially_closing"] = res.initiallyClosing;
  summary["nmac"] = res.has(EventKind::NMAC);
  summary["collision"] = res.has(EventKind::Collision);
  json events = json::array();
  for (const auto& e : res.events) {
    events.push_back({{"kind", toString(e.kind)}, {"time_s", r.units.toSITime(e.time)}, {"range_m", e.state.range() * L}});
  }
  summary["events"] = events;
  writeText((dir / "summary.json").string(), summary.dump(2) + "\n");
  writeManifest(dir, "simulate", a.config, toJson(spec, r));

  std::printf("%s r0=%.0f m: miss %.1f m at t=%.2f s, NMAC=%s%s%s\n", spec.label().c_str(), spec.r0M,
              res.missDistance * L, r.units.toSITime(res.missTime), res.has(EventKind::NMAC) ? "true" : "false",
              res.has(EventKind::Collision) ? ", Collision" : "", res.initiallyClosing ? "" : " (not initially closing)");
  return kOk;
}

int cmdSweep(const std::string& caseId, std::vector<double> ranges, double dt, unsigned jobs, const std::string& out) {
  const TestCase& tc = testCase(parseCaseId(caseId));
  if (ranges.empty()) ranges.assign(kSuiteRangesM.begin(), kSuiteRangesM.end());
  SuiteOptions opt;
  if (dt > 0.0) opt.dt = dt;
  const UnitSystem units = UnitSystem::fromKnots(tc.vaKnots, opt.bankDeg);
  const auto points = sweep(
      ranges,
      [&](double r0) {
        const SuiteSetup s = suiteSetup(tc, r0, opt);
        return std::tuple{s.initial, s.config, s.options};
      },
      AircraftStrategy::bearingOnly(opt.hysteresisBand), NonResponsive{}, jobs);

  std::vector<SuiteRun> runs;
  for (const auto& p : points) {
    const auto& res = p.result;
    runs.push_back({tc.id, p.r0, units.toSILength(res.missDistance), res.missDistance, units.toSITime(res.missTime),
                    units.toSILength(res.globalMinRange), res.has(EventKind::NMAC), res.has(EventKind::Collision)});
  }
  const fs::path dir = prepareDir(out);
  suiteTable(runs).save((dir / "sweep.csv").string());
  writeText((dir / "sweep.svg").string(), suiteSvg(CsvTable::load((dir / "sweep.csv").string())));
  writeManifest(dir, "sweep", "", {{"case_id", caseId}, {"ranges_m", ranges}, {"dt", opt.dt}, {"jobs", jobs}});
  for (const auto& r : runs) std::printf("%s r0=%.0f m: miss %.1f m\n", toString(r.id), r.r0M, r.missM);
  return kOk;
}

int cmdField(double vh, const std::string& out) {
  const auto field = trajectoryField(vh, geometricRanges(0.05, 4.0, 24), {2.0 * kPi, 1e-2});
  const fs::path dir = prepareDir(out);
  fieldTable(field).save((dir / "field.csv").string());
  writeText((dir / "field.svg").string(), fieldSvg(CsvTable::load((dir / "field.csv").string())));
  writeManifest(dir, "field", "", {{"vh", vh}, {"rT_min", 0.05}, {"rT_max", 4.0}, {"rT_count", 24}, {"tau_step", 1e-2}});
  std::printf("field v_h=%g: %zu trajectories, lines of minimum range at +-%.4f rad\n", vh, field.size(),
              terminalBearing(vh));
  return kOk;
}

int cmdBarrier(double vh, double rho, const std::string& out) {
  const BarrierCurve b = barrier(vh, rho);
  const fs::path dir = prepareDir(out);
  barrierTable(b).save((dir / "barrier.csv").string());
  writeText((dir / "barrier.svg").string(), barrierSvg(CsvTable::load((dir / "barrier.csv").string())));
  writeManifest(dir, "barrier", "", {{"vh", vh}, {"rho", rho}, {"tau_step", 1e-3}});
  std::printf("barrier v_h=%g rho=%g: branches meet the y-axis at y=%.4f\n", vh, rho, b.rightBranch.back().y);
  return kOk;
}

int cmdSuite(double dt, unsigned jobs, const std::string& out) {
  SuiteOptions opt;
  if (dt > 0.0) opt.dt = dt;
  opt.jobs = jobs;
  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = runSuite(opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = prepareDir(out);
  suiteTable(runs).save((dir / "suite.csv").string());
  writeText((dir / "suite.svg").string(), suiteSvg(CsvTable::load((dir / "suite.csv").string())));

  const auto checks = checkThresholds(runs);
  CsvTable t;
  t.header = {"check", "result", "detail"};
  bool ok = true;
  for (const auto& c : checks) {
    t.addRow({c.name, c.pass ? "PASS" : "FAIL", c.detail});
    ok = ok && c.pass;
  }
  t.save((dir / "thresholds.csv").string());
  writeManifest(dir, "suite", "", {{"dt", opt.dt}, {"bank_deg", opt.bankDeg}, {"hysteresis_rad", opt.hysteresisBand},
                                   {"jobs", jobs}, {"ranges_m", kSuiteRangesM}, {"wall_clock_s", seconds}});

  for (const auto& r : runs) std::printf("%-4s r0=%-5.0f miss %8.1f m%s\n", toString(r.id), r.r0M, r.missM, r.nmac ? "  NMAC" : "");
  for (const auto& c : checks) std::printf("%s  %s (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  std::printf("suite wall clock %.2f s\n", seconds);
  return ok ? kOk : kThresholdFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bearing-only collision-avoidance game: simulation, trajectory fields, barriers and the encounter suite."};
  app.footer(kExitHelp);
  app.require_subcommand(1);

  unsigned jobs = 1;
  try {
    jobs = jobsDefault();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }

  SimulateArgs sim;
  auto* simCmd = app.add_subcommand("simulate", "Run one encounter from a scenario file or a catalogue case");
  simCmd->add_option("--config", sim.config, "Scenario JSON file");
  simCmd->add_option("--case", sim.caseId, "Catalogue case (H1 H2 C1 C6 C11 C16 O1 O2)");
  simCmd->add_option("--r0", sim.r0, "Initial range [m]");
  simCmd->add_option("--out", sim.out, "Output directory");
  simCmd->add_option("--dt", sim.dt, "Step size (normalised time)");
  auto* siFlag = simCmd->add_flag("--si", sim.si, "Write SI units (default)");
  simCmd->add_flag("--normalized", sim.normalized, "Write normalised units")->excludes(siFlag);

  std::string sweepCase = "H1";
  std::vector<double> sweepRanges;
  double sweepDt = 0.0;
  std::string sweepOut = "out/sweep";
  auto* sweepCmd = app.add_subcommand("sweep", "Miss-distance against initial range for one catalogue case");
  sweepCmd->add_option("--case", sweepCase, "Catalogue case")->capture_default_str();
  sweepCmd->add_option("--r0", sweepRanges, "Initial ranges [m] (default 1000 1500 2000)");
  sweepCmd->add_option("--dt", sweepDt, "Step size (normalised time)");
  sweepCmd->add_option("--jobs", jobs, "Parallel runs (default: BEARING_GAME_JOBS or hardware threads)");
  sweepCmd->add_option("--out", sweepOut, "Output directory")->capture_default_str();

  double fieldVh = 0.5;
  std::string fieldOut = "out/field";
  auto* fieldCmd = app.add_subcommand("field", "Optimal trajectory field");
  fieldCmd->add_option("--vh", fieldVh, "Hazard speed ratio, 0 < v_h <= 1")->capture_default_str();
  fieldCmd->add_option("--out", fieldOut, "Output directory")->capture_default_str();

  double barrierVh = 0.5;
  double barrierRho = 0.3;
  std::string barrierOut = "out/barrier";
  auto* barrierCmd = app.add_subcommand("barrier", "Barrier for a miss-distance threshold");
  barrierCmd->add_option("--vh", barrierVh, "Hazard speed ratio, 0 < v_h < 1")->capture_default_str();
  barrierCmd->add_option("--rho", barrierRho, "Miss-distance threshold (normalised)")->capture_default_str();
  barrierCmd->add_option("--out", barrierOut, "Output directory")->capture_default_str();

  double suiteDt = 0.0;
  std::string suiteOut = "out/suite";
  auto* suiteCmd = app.add_subcommand("suite", "All catalogue cases at 1000, 1500 and 2000 m with threshold checks");
  suiteCmd->add_option("--dt", suiteDt, "Step size (normalised time)");
  suiteCmd->add_option("--jobs", jobs, "Parallel runs (default: BEARING_GAME_JOBS or hardware threads)");
  suiteCmd->add_option("--out", suiteOut, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (jobs == 0) throw ConfigError("jobs", "must be positive");
    if (*simCmd) return cmdSimulate(sim);
    if (*sweepCmd) return cmdSweep(sweepCase, sweepRanges, sweepDt, jobs, sweepOut);
    if (*fieldCmd) return cmdField(fieldVh, fieldOut);
    if (*barrierCmd) return cmdBarrier(barrierVh, barrierRho, barrierOut);
    if (*suiteCmd) return cmdSuite(suiteDt, jobs, suiteOut);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const UndefinedTerminationLine& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
