#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "zkio/config.hpp"
#include "zkio/dispatch.hpp"
#include "zkio/output.hpp"
#include "zkio/serialize.hpp"

using namespace zkio;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("zk_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> problems_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd = std::string(ZK_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

const char* kSmallDecay =
    "[grid]\nNx = 32\nNy = 32\n[integrator]\nT = 2\n[experiment]\nkind = decay\n";

}  // namespace

TEST_CASE("minimal config takes defaults") {
    const RunConfig c = parse_config_text("[experiment]\nkind = decay\n");
    CHECK(c.kind == Kind::decay);
    CHECK(c.scenario.grid.L == doctest::Approx(std::numbers::pi / 2));
    CHECK(c.scenario.grid.dim == 2);
    CHECK(c.scenario.grid.nx == 128);
    CHECK(c.scenario.grid.ny == 128);
    CHECK(c.scenario.grid.half_width == 6.0);
    CHECK(c.scenario.profile.family == zk::ProfileFamily::bump);
    CHECK(c.scenario.profile.amplitude == 1e-5);
    CHECK(c.scenario.integrator.T == 20.0);
    CHECK(c.scenario.integrator.dt == 0.0);
    CHECK(c.scenario.integrator.scheme == zk::Scheme::imex_bdf2);
    CHECK(c.scenario.integrator.energy_tol == 1e-4);
    CHECK(c.scenario.integrator.diagnostic_stride == 33);
    CHECK(c.output_directory == "out");
    CHECK(c.write_csv);
    CHECK(c.write_json);
    CHECK(parse_config_text("").kind == Kind::decay);
    const RunConfig d3 = parse_config_text("[grid]\ndim = 3\n");
    CHECK(d3.scenario.grid.nx == 64);
    CHECK(d3.scenario.grid.nz == 64);
}

TEST_CASE("config errors are all reported") {
    const auto p = problems_of("[grid]\nL = -1\nNy = 100\n[integrator]\nscheme = rk4\nT = 0\n");
    CHECK(mentions(p, "grid.L must be positive"));
    CHECK(mentions(p, "grid.Ny must be a power of two"));
    CHECK(mentions(p, "integrator.scheme"));
    CHECK(mentions(p, "integrator.T must be positive"));
    CHECK(p.size() == 4);

    const auto g = problems_of("[gird]\nL = 1\n");
    CHECK(mentions(g, "gird"));
    CHECK(mentions(g, "did you mean '[grid]'"));
    const auto k = problems_of("[integrator]\nespilon = 0.1\n");
    CHECK(mentions(k, "did you mean 'integrator.epsilon'"));
    CHECK(mentions(problems_of("[grid]\nL = abc\n"), "grid.L must be a number"));
    CHECK(mentions(problems_of("[experiment]\nkind = sweep\n"), "experiment.kind"));
    CHECK(mentions(problems_of("[grid]\nNz = 16\n"), "grid.Nz is only valid"));
    CHECK(mentions(problems_of("[experiment]\nkind = epsilon-convergence\nepsilons = 1e-3\n"),
                   "at least 3"));
    CHECK(mentions(problems_of("[output]\nformats = csv, png\n"), "output.formats"));
    CHECK(mentions(problems_of("[grid\n"), "malformed"));
    CHECK_THROWS_AS(parse_config("/nonexistent/zk.ini"), ConfigError);
}

TEST_CASE("edit distance") {
    CHECK(edit_distance("gird", "grid") == 2);
    CHECK(edit_distance("", "abc") == 3);
    CHECK(edit_distance("epsilon", "epsilon") == 0);
}

TEST_CASE("reports round trip through JSON") {
    const zk::SmallnessReport s = zk::smallness_check(1.2, 3e-4, 1e-6, zk::ConstantSet::estimate4);
    CHECK(smallness_from_json(json::parse(to_json(s).dump())) == s);

    zk::DecayFit f{"h2_ut", 4.0, 18.0, 35.1, 0.999, 0.39, 90.2, 141};
    CHECK(decay_fit_from_json(json::parse(to_json(f).dump())) == f);

    zk::ConvergenceReport c;
    c.values = {4e-3, 2e-3, 1e-3};
    c.errors = {0.1, 0.05, 0.025};
    c.fitted_order = std::numeric_limits<double>::quiet_NaN();
    c.degenerate = true;
    c.statuses = {zk::RunStatus::completed, zk::RunStatus::nan, zk::RunStatus::blowup, zk::RunStatus::completed};
    CHECK(convergence_from_json(json::parse(to_json(c).dump())) == c);

    zk::PerturbationReport p;
    p.delta = 1e-3;
    p.gap0 = 1.0 / 3.0;
    p.times = {0, 0.1};
    p.gap = {1.0 / 3.0, 0.2};
    p.integral = {0, 1e-20};
    p.envelope = {1.0 / 3.0, 1.0 / 3.0};
    p.gronwall_constant = 1.0;
    p.bound_satisfied = true;
    CHECK(perturbation_from_json(json::parse(to_json(p).dump())) == p);

    zk::LemmaReport l;
    l.entries.push_back({"ode", "case", 0.5, 0.0, true});
    l.entries.push_back({"steklov", "other", 1.0 / 7.0, 0.99, false});
    l.passed = 1;
    l.total = 2;
    CHECK(lemmas_from_json(json::parse(to_json(l).dump())) == l);

    const json e = envelope("smallness", to_json(s), "[grid]\n");
    CHECK(e["schema_version"] == 1);
    CHECK(e["kind"] == "smallness");
    CHECK(e["config"] == "[grid]\n");
    CHECK(e.contains("generated_at"));
}

TEST_CASE("series CSV round trips bit for bit") {
    zk::FunctionalSeries s(3);
    for (int n = 0; n < 3; ++n) {
        s[n].t = 0.1 * n;
        s[n].l2 = std::exp(-n) / 3.0;
        s[n].weighted = 1e-300 * (n + 1);
        s[n].trace0 = -2.9862174459515032e-13;
        s[n].boundary_leak = 2.3e-21;
    }
    const std::string text = series_to_csv(s);
    CHECK(text.substr(0, text.find('\n')) ==
          "t,l2,weighted,h1,h2_partial,bracket2,trace0,ut_l2,ut_weighted,boundary_leak");
    const zk::FunctionalSeries back = series_from_csv(text);
    REQUIRE(back.size() == 3);
    for (int n = 0; n < 3; ++n) {
        zk::FunctionalSnapshot a = s[n];
        a.flux_right = 0.0;
        CHECK(back[n] == a);
    }
    CHECK_THROWS(series_from_csv("t,l2\n0,1\n"));
}

TEST_CASE("atomic writes") {
    const fs::path dir = scratch("atomic");
    prepare_output_dir(dir);
    write_atomic(dir / "a.txt", "one");
    write_atomic(dir / "a.txt", "two");
    CHECK(slurp(dir / "a.txt") == "two");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
    CHECK(files == 1);
    {
        std::ofstream blocker(dir / "blocker");
    }
    CHECK_THROWS_AS(prepare_output_dir(dir / "blocker" / "sub"), OutputError);
    fs::remove_all(dir);
}

TEST_CASE("dispatch writes the decay artifacts") {
    const fs::path dir = scratch("decay");
    std::ostringstream out, err;
    const RunConfig cfg = parse_config_text(kSmallDecay);
    CHECK(dispatch(cfg, dir.string(), out, err) == kExitOk);
    CHECK(fs::exists(dir / "series.csv"));
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "smallness.json"));
    CHECK(slurp(dir / "config.ini") == kSmallDecay);
    const json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep["schema_version"] == 1);
    CHECK(rep["config"] == kSmallDecay);
    CHECK(rep["label"] == "certified");
    CHECK(rep["fits"].size() == 5);
    CHECK(out.str().find("smallness (theorem): PASS") != std::string::npos);
    CHECK(out.str().find("weighted: rate") != std::string::npos);

    // determinism apart from generated_at
    const fs::path again = scratch("decay2");
    std::ostringstream o2, e2;
    CHECK(dispatch(cfg, again.string(), o2, e2) == kExitOk);
    CHECK(slurp(dir / "series.csv") == slurp(again / "series.csv"));
    json a = json::parse(slurp(dir / "report.json")), b = json::parse(slurp(again / "report.json"));
    a.erase("generated_at");
    b.erase("generated_at");
    CHECK(a == b);
    CHECK(slurp(dir / "report.json").size() == slurp(again / "report.json").size());
    const zk::FunctionalSeries back = series_from_csv(slurp(dir / "series.csv"));
    CHECK(back.size() > 10);
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("dispatch exit codes") {
    std::ostringstream out, err;
    SUBCASE("zero profile is degenerate, not a failure") {
        const fs::path dir = scratch("zero");
        const RunConfig cfg = parse_config_text(std::string(kSmallDecay) + "[profile]\nfamily = zero\n");
        CHECK(dispatch(cfg, dir.string(), out, err) == kExitOk);
        CHECK(json::parse(slurp(dir / "report.json"))["degenerate"] == true);
        fs::remove_all(dir);
    }
    SUBCASE("ten times the default step blows up large data") {
        // empirical: amplitude 50 completes at dt = 0.25 dx and diverges at 2.5 dx
        const fs::path dir = scratch("unstable");
        const double dt = 10 * 0.25 * (std::numbers::pi / 2) / 129;
        const std::string base = "[profile]\namplitude = 50\n[experiment]\nkind = single-run\n[integrator]\nT = 5\n";
        CHECK(dispatch(parse_config_text(base), dir.string(), out, err) == kExitOk);
        const RunConfig cfg = parse_config_text(base + "dt = " + std::to_string(dt) + "\n");
        CHECK(dispatch(cfg, dir.string(), out, err) == kExitSolverFailure);
        const json rep = json::parse(slurp(dir / "report.json"));
        CHECK(rep["status"] != "completed");
        fs::remove_all(dir);
    }
    SUBCASE("unwritable output directory") {
        const fs::path dir = scratch("blocked");
        fs::create_directories(dir);
        { std::ofstream f(dir / "file"); }
        CHECK(dispatch(parse_config_text(kSmallDecay), (dir / "file" / "out").string(), out, err) == kExitOutput);
        fs::remove_all(dir);
    }
}

TEST_CASE("command line interface") {
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const fs::path log = dir / "log.txt";

    CHECK(run_cli("version", log) == 0);
    CHECK(slurp(log).find("zk 0.1.0") != std::string::npos);

    CHECK(run_cli("check-smallness --L 1 --norm-u0 0 --J0 0", log) == 0);
    const json s = json::parse(slurp(log));
    CHECK(s["K2"] == 905969664.0);
    CHECK(s["C1"] == 2.0);
    CHECK(s["schema_version"] == 1);
    CHECK(run_cli("check-smallness --L 1 --norm-u0 0 --J0 0 --constants=estimate4 --output-dir " +
                      (dir / "sm").string(), log) == 0);
    CHECK(json::parse(slurp(dir / "sm" / "smallness.json"))["constants"] == "estimate4");
    CHECK(run_cli("check-smallness --L 1 --norm-u0 0 --J0 0 --constants=other", log) == 2);
    CHECK(run_cli("check-smallness --L -1 --norm-u0 0 --J0 0", log) == 2);

    CHECK(run_cli("", log) == 2);
    CHECK(run_cli("run " + (dir / "missing.ini").string(), log) == 2);
    {
        std::ofstream f(dir / "bad.ini");
        f << "[grid]\nL = -1\n[gird]\n";
    }
    CHECK(run_cli("run " + (dir / "bad.ini").string(), log) == 2);
    CHECK(slurp(log).find("grid.L must be positive") != std::string::npos);
    CHECK(slurp(log).find("[grid]") != std::string::npos);

    {
        std::ofstream f(dir / "ok.ini");
        f << kSmallDecay;
    }
    CHECK(run_cli("run " + (dir / "ok.ini").string() + " --output-dir " + (dir / "o").string(), log) == 0);
    CHECK(fs::exists(dir / "o" / "series.csv"));
    fs::remove_all(dir);
}
