#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qwlim_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QWLIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const TempDir& dir, const std::string& name,
                      const std::string& text) {
    const fs::path p = dir.path / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("version flag") {
    CHECK(run_cli("--version") == 0);
}

TEST_CASE("resonance subcommand and exit codes") {
    TempDir dir;
    const fs::path good = write_config(dir, "res.json",
        R"({"schema":1,"potential":{"kind":"well","a":3.141592653589793,"b":1.0},"N":401})");
    CHECK(run_cli("resonance --config " + good.string() + " --out " +
                  (dir.path / "out").string()) == 0);
    const std::string report = slurp(dir.path / "out" / "report.json");
    CHECK(report.find("\"resonant\": true") != std::string::npos);
    CHECK(report.find("\"parity\": \"odd\"") != std::string::npos);

    const fs::path nonres = write_config(dir, "nonres.json",
        R"({"schema":1,"potential":{"kind":"well","a":1.0,"b":1.0},"N":401,"require_resonant":true})");
    CHECK(run_cli("resonance --config " + nonres.string() + " --out " +
                  (dir.path / "out2").string()) == 2);

    const fs::path bad = write_config(dir, "bad.json", "{not json");
    CHECK(run_cli("resonance --config " + bad.string()) == 1);

    const fs::path zero = write_config(dir, "zero.json",
        R"({"schema":1,"potential":{"kind":"from-curvature","curvature":
            {"kind":"piecewise","segments":[{"value":0.0,"from":0.0,"to":1.0}]}}})");
    CHECK(run_cli("resonance --config " + zero.string() + " --out " +
                  (dir.path / "out3").string()) == 3);

    CHECK(run_cli("resonance --config /no/such/file") != 0);
}

TEST_CASE("limit-op fixtures for the three wells") {
    TempDir dir;
    struct Case { double a; const char* expect; };
    const Case cases[] = {{M_PI / 2.0, "\"kind\": \"dirichlet\""},
                          {M_PI, "\"kind\": \"resonant\""},
                          {2.0 * M_PI, "\"kind\": \"resonant\""}};
    int idx = 0;
    for (const auto& cs : cases) {
        std::ostringstream cfg;
        cfg << R"({"schema":1,"potential":{"kind":"well","a":)" << cs.a
            << R"(,"b":1.0},"N":801})";
        const fs::path p = write_config(dir, "lo" + std::to_string(idx) + ".json",
                                        cfg.str());
        const fs::path out = dir.path / ("lo_out" + std::to_string(idx));
        REQUIRE(run_cli("limit-op --config " + p.string() + " --out " +
                        out.string()) == 0);
        const std::string doc = slurp(out / "pointop.json");
        CHECK(doc.find(cs.expect) != std::string::npos);
        const std::string scat = slurp(out / "scattering.csv");
        CHECK(scat.rfind("p,ReT,ImT,R_plus", 0) == 0);
        ++idx;
    }
}

TEST_CASE("curve subcommand writes the polyline and the report") {
    TempDir dir;
    const fs::path cfg = write_config(dir, "curve.json",
        R"({"schema":1,"curvature":{"kind":"piecewise","segments":[
            {"value":6.2831853071795862,"from":0.0,"to":0.3},
            {"value":-6.2831853071795862,"from":0.3,"to":1.0}]},
            "range":[-1.0,2.0],"step":0.001})");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("curve --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string poly = slurp(out / "polyline.csv");
    CHECK(poly.rfind("t,x,y,angle", 0) == 0);
    const std::string pj = slurp(out / "curve.json");
    CHECK(pj.find("\"self_intersects\": false") != std::string::npos);
    // theta = 2a(2x - b) with a = pi, x = 0.3, b = 1
    CHECK(pj.find("-2.513274122871") != std::string::npos);
}

TEST_CASE("scan subcommand is deterministic byte for byte") {
    TempDir dir;
    const fs::path cfg = write_config(dir, "scan.json",
        R"({"schema":1,"family":"well-depth","b":1.0,"from":2.5,"to":4.0,
            "points":16,"refine":true})");
    const fs::path o1 = dir.path / "o1", o2 = dir.path / "o2";
    REQUIRE(run_cli("scan --config " + cfg.string() + " --out " + o1.string()) == 0);
    REQUIRE(run_cli("scan --config " + cfg.string() + " --out " + o2.string()) == 0);
    CHECK(slurp(o1 / "scan.csv") == slurp(o2 / "scan.csv"));
    CHECK(slurp(o1 / "scan.json") == slurp(o2 / "scan.json"));
    CHECK(slurp(o1 / "scan.json").find("3.14159265358979") != std::string::npos);
}

TEST_CASE("converge-1d subcommand at toy resolution") {
    TempDir dir;
    const fs::path cfg = write_config(dir, "c1d.json",
        R"({"schema":1,"potential":{"kind":"well","a":3.141592653589793,"b":1.0},
            "k":[0,1],"eps_list":[0.4,0.2],"n_quad":201,
            "grid":{"t_min":-8.0,"t_max":8.0,"step":0.004},
            "probes":[{"center":1.0,"halfwidth":1.5}],
            "negative_control":true})");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("converge-1d --config " + cfg.string() + " --out " +
                    out.string()) == 0);
    const std::string table = slurp(out / "table.csv");
    CHECK(table.rfind("eps,error", 0) == 0);
    const std::string summary = slurp(out / "summary.json");
    CHECK(summary.find("\"limit_kind\": \"resonant\"") != std::string::npos);
    CHECK(fs::exists(out / "control.csv"));
}

TEST_CASE("converge-2d subcommand at toy resolution") {
    TempDir dir;
    const fs::path cfg = write_config(dir, "c2d.json",
        R"({"schema":1,
            "curvature":{"kind":"bump","amplitude":2.7564387879,"from":-2.0,"to":2.0,"shape":"odd"},
            "alpha":3.0,"d":1.0,"k":[0,1],"eps_list":[0.5,0.35],
            "grid_policy":{"fine_step_frac":0.05,"coarse_step":0.1,"growth":1.3,"s_points":21},
            "L_policy":{"headroom":10.0},
            "probes":[{"center":1.2,"halfwidth":1.5}],
            "refinement_check":false,"negative_control":true,"N":801})");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("converge-2d --config " + cfg.string() + " --out " +
                    out.string()) == 0);
    const std::string table = slurp(out / "table2d.csv");
    CHECK(table.rfind("eps,diag_error,offdiag_norm,control_error", 0) == 0);
    const std::string summary = slurp(out / "summary2d.json");
    CHECK(summary.find("\"limit_kind\": \"resonant\"") != std::string::npos);
}

TEST_CASE("evolve subcommand reports the norm drift") {
    TempDir dir;
    const fs::path cfg = write_config(dir, "ev.json",
        R"({"schema":1,"op":{"kind":"resonant","c1":1.0,"c2":0.0},
            "packet":{"center":-4.0,"momentum":3.0,"width":1.0},
            "grid":{"L":20.0,"step":0.05},"quad_step":0.004,"times":[0.4]})");
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("evolve --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "snapshot_00.csv"));
    const std::string doc = slurp(out / "evolve.json");
    CHECK(doc.find("max_norm_drift") != std::string::npos);
    const auto pos = doc.find("\"max_norm_drift\": ");
    const double drift = std::stod(doc.substr(pos + 18));
    CHECK(drift < 1e-4);
}

TEST_CASE("triple-well scan root matches the closed form") {
    TempDir dir;
    // a1 from the closed form at beta = 0.4, a2 = 1, a3 = 6
    const double beta = 0.4, a2 = 1.0, a3 = 6.0;
    const double t = std::tan(beta);
    const double a1 = (a2 * a2 * t + a2 * a3 * t) / (t * (a3 * t * t - a2));
    std::ostringstream cfg;
    cfg.precision(17);
    cfg << R"({"schema":1,"family":"triple-a1","a2":1.0,"a3":6.0,"b":[)"
        << beta / a1 << "," << beta / a2 << "," << beta / a3 << R"(],
        "from":)" << 0.9 * a1 << R"(,"to":)" << 1.1 * a1 << R"(,"points":9,"refine":true})";
    const fs::path p = write_config(dir, "tw.json", cfg.str());
    const fs::path out = dir.path / "out";
    REQUIRE(run_cli("scan --config " + p.string() + " --out " + out.string()) == 0);
    const std::string summary = slurp(out / "scan.json");
    const auto pos = summary.find("\"roots\": [");
    REQUIRE(pos != std::string::npos);
    const double root = std::stod(summary.substr(summary.find('[', pos) + 1));
    CHECK(std::abs(root - a1) < 1e-8 * a1);
}
