// fowler: command-line front end.
//
// Exit codes: 0 success, 1 numerical failure (or failed checks in verify),
// 2 usage or validation error. Errors are reported on stderr as a single line
// `ERROR <CODE>: <detail>`.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fowler/classify.hpp"
#include "fowler/error.hpp"
#include "fowler/invariants.hpp"
#include "fowler/io.hpp"
#include "fowler/model.hpp"
#include "fowler/ode.hpp"
#include "fowler/serialize.hpp"
#include "fowler/shooting.hpp"
#include "fowler/transform.hpp"
#include "fowler/verify.hpp"

namespace {

using namespace fowler;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteState:
    case ErrorCode::StepSizeUnderflow:
    case ErrorCode::BracketNotFound:
    case ErrorCode::NoReturnDetected:
    case ErrorCode::EmptyTrajectory:
    case ErrorCode::NonPositiveComponent:
    case ErrorCode::StencilOutOfDomain:
      return 1;
    default:
      return 2;
  }
}

// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file(path, text);
  }
}

unsigned worker_count(unsigned requested) {
  if (const char* env = std::getenv("FOWLER_THREADS")) {
    const double v = parse_double(env);
    if (!(v >= 1) || v != std::floor(v)) throw Error(ErrorCode::InvalidArgument, "FOWLER_THREADS must be a positive integer");
    return unsigned(v);
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- integrate ---------------------------------------------------------------

template <class T>
T field(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("config is missing '") + key + "'");
  return j.at(key);
}

std::vector<double> lambda_of(const Json& j, int p) {
  if (!j.contains("lambda")) {
    if (p != 1) throw Error(ErrorCode::InvalidArgument, "config needs 'lambda' when p > 1");
    return {1.0};
  }
  auto lam = j.at("lambda").get<std::vector<double>>();
  if (int(lam.size()) != p) throw Error(ErrorCode::InvalidArgument, "'lambda' must have p entries");
  if (!is_unit_vector(lam)) throw Error(ErrorCode::InvalidArgument, "'lambda' must be a unit vector");
  return lam;
}

CylState initial_state(const Json& cfg, const Params& P) {
  const Json& init = require(cfg, "init");
  const std::string type = require(init, "type").get<std::string>();
  const double t0 = field(init, "t0", 0.0);
  const auto lam = lambda_of(init, P.p);
  if (type == "spherical") {
    const double mu = field(init, "mu", 1.0);
    if (!(mu > 0)) throw Error(ErrorCode::InvalidArgument, "mu must be positive");
    return CylState::scaled(t0, spherical_state(P, mu, t0), lam);
  }
  if (type == "even") {
    const double a = require(init, "a").get<double>();
    const double b = field(init, "b", 0.0);
    return CylState::even(t0, a, b, lam);
  }
  if (type == "state") {
    auto y = require(init, "y").get<std::vector<double>>();
    if (y.size() != 4 * std::size_t(P.p)) throw Error(ErrorCode::InvalidArgument, "'y' must have 4p entries");
    CylState s(t0, P.p);
    s.y = std::move(y);
    return s;
  }
  throw Error(ErrorCode::InvalidArgument, "init.type must be spherical, even or state");
}

int cmd_integrate(const std::string& config_path, const std::string& out, const std::string& report,
                  const std::string& events) {
  Json cfg;
  try {
    cfg = Json::parse(read_file(config_path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Io, std::string("invalid JSON config: ") + e.what());
  }
  try {
    const auto P = derive_params(require(cfg, "n").get<int>(), field(cfg, "p", 1));
    const auto init = initial_state(cfg, P);
    StepperConfig sc;
    const std::string method = field<std::string>(cfg, "method", "rk4");
    if (method == "rk4") sc.method = Method::FixedRK4;
    else if (method == "dp45") sc.method = Method::AdaptiveDP45;
    else throw Error(ErrorCode::InvalidArgument, "method must be rk4 or dp45");
    sc.dt = field(cfg, "dt", sc.dt);
    sc.abs_tol = field(cfg, "abs_tol", sc.abs_tol);
    sc.rel_tol = field(cfg, "rel_tol", sc.rel_tol);
    sc.zero_tolerance = field(cfg, "zero_tolerance", sc.zero_tolerance);
    if (cfg.contains("divergence_bound")) sc.divergence_bound = cfg.at("divergence_bound").get<double>();
    sc.t_end = require(cfg, "t_end").get<double>();
    if (!(sc.dt > 0) || !(sc.abs_tol > 0) || !(sc.rel_tol > 0) || !(sc.zero_tolerance >= 0))
      throw Error(ErrorCode::InvalidArgument, "step size and tolerances must be positive");

    const auto tr = integrate(P, init, sc);
    std::ostringstream csv;
    write_trajectory_csv(csv, P, tr);
    emit(out, csv.str());
    if (!report.empty()) write_file(report, dump_json(to_json(make_report(P, tr))));
    if (!events.empty()) write_file(events, dump_json(events_json(tr)));
    return 0;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config field has the wrong type: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the critical fourth-order Gross-Pitaevskii system", "fowler"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  int n = 0, p = 1;
  std::string format = "json", out, report, events, config, input, suite = "all";
  double a = 0, a_min = 0, a_max = 0, periods = 1;
  int steps = 9;
  unsigned threads = 0;
  bool relative = false;

  auto* constants = app.add_subcommand("constants", "Print the dimension-derived constants");
  constants->add_option("--n", n, "Dimension (>= 5)")->required();
  constants->add_option("--p", p, "Number of components (>= 1)");
  constants->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  constants->add_option("--out", out, "Output path (default stdout)");

  auto* integ = app.add_subcommand("integrate", "Integrate the cylinder system from a JSON config");
  integ->add_option("--config", config, "JSON config path")->required();
  integ->add_option("--out", out, "Trajectory CSV path (default stdout)");
  integ->add_option("--report", report, "Invariant report JSON path");
  integ->add_option("--events", events, "Events JSON path");

  auto* del = app.add_subcommand("delaunay", "Shoot a Delaunay orbit of necksize a");
  del->add_option("--n", n, "Dimension (>= 5)")->required();
  del->add_option("--a", a, "Necksize")->required();
  del->add_flag("--relative", relative, "Interpret --a as a fraction of a0");
  del->add_option("--periods", periods, "Length of the orbit CSV in periods");
  del->add_option("--out", out, "Orbit CSV path");
  del->add_option("--json", report, "Orbit summary JSON path (default stdout)");

  auto* atl = app.add_subcommand("atlas", "Tabulate (a, b, T_a, H, residual) over a grid of necksizes");
  atl->add_option("--n", n, "Dimension (>= 5)")->required();
  atl->add_option("--a-min", a_min, "Smallest necksize")->required();
  atl->add_option("--a-max", a_max, "Largest necksize")->required();
  atl->add_option("--steps", steps, "Number of grid points");
  atl->add_flag("--relative", relative, "Interpret --a-min/--a-max as fractions of a0");
  atl->add_option("--threads", threads, "Worker count (default: available cores; FOWLER_THREADS overrides)");
  atl->add_option("--out", out, "Atlas CSV path (default stdout)");

  auto* cls = app.add_subcommand("classify", "Classify sampled radial data by the Pohozaev sign");
  cls->add_option("--input", input, "RadialGrid CSV (r,u_1,...,u_p)")->required();
  cls->add_option("--n", n, "Dimension (>= 5)")->required();
  cls->add_option("--out", out, "Report JSON path (default stdout)");

  auto* ver = app.add_subcommand("verify", "Run property suites or the acceptance criteria");
  std::vector<std::string> allowed{"all", "acceptance"};
  for (const auto& s : suite_names()) allowed.push_back(s);
  ver->add_option("--suite", suite, "all, acceptance, or one suite name")->check(CLI::IsMember(allowed));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR InvalidArgument: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*constants) {
      const auto P = derive_params(n, p);
      if (format == "csv") {
        std::ostringstream os;
        write_params_csv(os, P);
        emit(out, os.str());
      } else {
        emit(out, dump_json(to_json(P)));
      }
      return 0;
    }
    if (*integ) return cmd_integrate(config, out, report, events);
    if (*del) {
      const auto P = derive_params(n, 1);
      const double av = relative ? a * P.a0 : a;
      if (!(periods > 0)) throw Error(ErrorCode::InvalidArgument, "--periods must be positive");
      AtlasRow row = atlas(P, {av}, 1).front();
      if (!row.error.empty()) {
        const auto colon = row.error.find(':');
        std::cerr << "ERROR " << row.error << "\n";
        const std::string code = row.error.substr(0, colon);
        return code == "NecksizeOutOfRange" || code == "DegenerateOrbit" ? 2 : 1;
      }
      if (!out.empty()) {
        const PeriodicOrbit orbit(P, row.a, row.b, row.T_a, 1e-3);
        std::ostringstream os;
        write_trajectory_csv(os, P, orbit.realize(0.0, periods * row.T_a));
        write_file(out, os.str());
      }
      emit(report, dump_json(to_json(row)));
      return 0;
    }
    if (*atl) {
      const auto P = derive_params(n, 1);
      if (steps < 1) throw Error(ErrorCode::InvalidArgument, "--steps must be at least 1");
      const double lo = relative ? a_min * P.a0 : a_min, hi = relative ? a_max * P.a0 : a_max;
      if (!(lo <= hi)) throw Error(ErrorCode::InvalidArgument, "--a-min must not exceed --a-max");
      std::vector<double> grid;
      for (int k = 0; k < steps; ++k)
        grid.push_back(steps == 1 ? lo : lo + (hi - lo) * double(k) / double(steps - 1));
      const auto rows = atlas(P, grid, worker_count(threads));
      std::ostringstream os;
      write_atlas_csv(os, rows);
      emit(out, os.str());
      bool any_failed = false;
      for (const auto& r : rows)
        if (!r.error.empty()) {
          std::cerr << "row a=" << format_double(r.a) << ": " << r.error << "\n";
          any_failed = true;
        }
      return any_failed ? 1 : 0;
    }
    if (*cls) {
      const auto P = derive_params(n, 1);
      std::istringstream is(read_file(input));
      const auto grid = read_radial_csv(is);
      const auto rep = classify(grid, derive_params(P.n, grid.components()));
      emit(out, dump_json(to_json(rep)));
      return 0;
    }
    if (*ver) {
      std::vector<CheckResult> results;
      if (suite == "acceptance") {
        results = run_acceptance();
      } else if (suite == "all") {
        for (const auto& s : suite_names()) {
          auto r = run_suite(s);
          results.insert(results.end(), r.begin(), r.end());
        }
      } else {
        results = run_suite(suite);
      }
      bool ok = true;
      for (const auto& r : results) {
        std::cout << format_check(r) << "\n";
        ok = ok && r.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "ERROR " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ERROR Internal: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
