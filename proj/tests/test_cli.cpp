#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "fowler/model.hpp"
#include "fowler/transform.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::current_path() / "cli_scratch";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run_cli(const std::string& args) {
  const auto err_path = scratch() / "stderr.txt";
  const std::string cmd = std::string("'") + FOWLER_BIN + "' " + args + " 2>'" + err_path.string() + "'";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err_path);
  return r;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("constants --n 6 matches the golden file") {
  const auto r = run_cli("constants --n 6 --p 1 --format json");
  CHECK(r.code == 0);
  CHECK(r.out == slurp(fs::path(FOWLER_FIXTURES) / "constants_n6_p1.json"));
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["K0"] == 9);
  CHECK(j["a0"].get<double>() == doctest::Approx(0.782542).epsilon(1e-6));
}

TEST_CASE("constants errors and csv") {
  const auto bad = run_cli("constants --n 4");
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("ERROR DimensionTooSmall: ", 0) == 0);
  CHECK(std::count(bad.err.begin(), bad.err.end(), '\n') == 1);

  const auto csv = run_cli("constants --n 6 --format csv");
  CHECK(csv.code == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 2);

  const auto out = scratch() / "c.json";
  CHECK(run_cli("constants --n 7 --p 2 --out '" + out.string() + "'").code == 0);
  CHECK(nlohmann::json::parse(slurp(out))["p"] == 2);
}

TEST_CASE("usage errors exit 2 and help exits 0") {
  const auto unknown = run_cli("constants --n 6 --bogus");
  CHECK(unknown.code == 2);
  CHECK(unknown.err.rfind("ERROR InvalidArgument: ", 0) == 0);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("").code == 2);
  for (const char* sub : {"constants", "integrate", "delaunay", "atlas", "classify", "verify"}) {
    CAPTURE(sub);
    const auto h = run_cli(std::string(sub) + " --help");
    CHECK(h.code == 0);
    CHECK(h.out.find("--") != std::string::npos);
  }
  CHECK(run_cli("--help").code == 0);
}

TEST_CASE("integrate writes trajectory, report and events") {
  const auto dir = scratch();
  write(dir / "homo.json", R"({"n": 6, "p": 1, "dt": 1e-3, "t_end": 2.0,
    "init": {"type": "spherical", "mu": 1.0, "t0": -2.0}})");
  const auto traj = dir / "homo.csv", rep = dir / "homo_report.json", ev = dir / "homo_events.json";
  const auto r = run_cli("integrate --config '" + (dir / "homo.json").string() + "' --out '" + traj.string() +
                        "' --report '" + rep.string() + "' --events '" + ev.string() + "'");
  CHECK(r.code == 0);
  const auto csv = slurp(traj);
  CHECK(csv.rfind("t,v_1,d1_1,d2_1,d3_1,H\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4002);
  const auto report = nlohmann::json::parse(slurp(rep));
  for (const char* key : {"H0", "max_drift", "pohozaev_cyl", "pohozaev_sph", "monitors"}) CHECK(report.contains(key));
  CHECK(report["max_drift"].get<double>() <= 1e-10);
  const auto events = nlohmann::json::parse(slurp(ev));
  CHECK(events["terminal"] == "Completed");
  REQUIRE(events["events"].size() >= 1);
  CHECK(events["events"][0]["kind"] == "DerivZero");
  CHECK(events["events"][0]["component"] == 1);

  // identical inputs give byte-identical outputs
  const auto again = dir / "homo2.csv";
  CHECK(run_cli("integrate --config '" + (dir / "homo.json").string() + "' --out '" + again.string() + "'").code == 0);
  CHECK(slurp(again) == csv);
}

TEST_CASE("integrate config validation") {
  const auto dir = scratch();
  write(dir / "bad_n.json", R"({"n": 3, "t_end": 1, "init": {"type": "even", "a": 0.5, "b": 0.0}})");
  const auto r = run_cli("integrate --config '" + (dir / "bad_n.json").string() + "'");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("ERROR DimensionTooSmall: ", 0) == 0);

  write(dir / "garbage.json", "{ not json");
  CHECK(run_cli("integrate --config '" + (dir / "garbage.json").string() + "'").code == 2);
  CHECK(run_cli("integrate --config '" + (dir / "missing.json").string() + "'").code == 2);

  write(dir / "kind.json", R"({"n": 6, "t_end": 1, "init": {"type": "teapot"}})");
  CHECK(run_cli("integrate --config '" + (dir / "kind.json").string() + "'").code == 2);
}

TEST_CASE("delaunay summary and orbit") {
  const auto dir = scratch();
  const auto orbit = dir / "orbit.csv";
  const auto r = run_cli("delaunay --n 6 --a 0.6 --relative --periods 2 --out '" + orbit.string() + "'");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* key : {"a", "b", "T_a", "H", "residual"}) CHECK(j.contains(key));
  CHECK(j["b"].get<double>() == doctest::Approx(0.356625887124).epsilon(1e-10));
  CHECK(j["H"].get<double>() < 0);
  CHECK(slurp(orbit).rfind("t,v_1,d1_1,d2_1,d3_1,H\n", 0) == 0);

  const auto out_of_range = run_cli("delaunay --n 6 --a 1.1 --relative");
  CHECK(out_of_range.code == 2);
  CHECK(out_of_range.err.rfind("ERROR NecksizeOutOfRange: ", 0) == 0);
}

TEST_CASE("atlas is ordered and independent of the worker count") {
  const auto one = run_cli("atlas --n 6 --a-min 0.2 --a-max 0.9 --steps 4 --relative --threads 1");
  const auto two = run_cli("atlas --n 6 --a-min 0.2 --a-max 0.9 --steps 4 --relative --threads 3");
  CHECK(one.code == 0);
  CHECK(two.code == 0);
  CHECK(one.out == two.out);
  CHECK(one.out.rfind("a,b,T_a,H,residual\n", 0) == 0);
  CHECK(std::count(one.out.begin(), one.out.end(), '\n') == 5);
  CHECK(run_cli("atlas --n 6 --a-min 0.9 --a-max 0.2 --relative").code == 2);
}

TEST_CASE("classify reads a radial CSV") {
  const auto P = fowler::derive_params(6, 1);
  const auto g = fowler::sample_radial([&](double r) { return fowler::spherical_profile(P, 1.0, r); }, {1.0}, 1e-4,
                                       1e2, 2000);
  const auto path = scratch() / "bubble.csv";
  {
    std::ofstream out(path);
    fowler::write_csv(out, g);
  }
  const auto r = run_cli("classify --n 6 --input '" + path.string() + "'");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "NonSingularSpherical");
  for (const char* key : {"pohozaev", "uncertainty", "gamma_hat", "necksize_hat", "period_hat", "lambda_hat",
                          "semi_singular"})
    CHECK(j.contains(key));

  write(scratch() / "short.csv", "r,u_1\n1,1\n2,0.5\n");
  const auto bad = run_cli("classify --n 6 --input '" + (scratch() / "short.csv").string() + "'");
  CHECK(bad.code == 2);
  CHECK(bad.err.rfind("ERROR InvalidGrid: ", 0) == 0);
}

TEST_CASE("verify runs a single suite") {
  const auto r = run_cli("verify --suite kelvin");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("PASS ", 0) == 0);
  CHECK(run_cli("verify --suite nonsense").code == 2);
}
