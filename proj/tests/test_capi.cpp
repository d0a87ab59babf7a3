#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qwlim.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("qwlim_capi_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(qwlim_version()) == "0.1.0");
    CHECK(std::string(qwlim_status_name(QWLIM_OK)) == "ok");
    CHECK(std::string(qwlim_status_name(QWLIM_ERROR_HYPOTHESIS)) ==
          "hypothesis-violated");
}

TEST_CASE("curvature handle round trip") {
    qwlim_curvature* c = nullptr;
    const char* doc = R"({"kind":"piecewise","segments":[
        {"value":6.2831853071795862,"from":0.0,"to":0.5},
        {"value":-6.2831853071795862,"from":0.5,"to":1.0}]})";
    REQUIRE(qwlim_curvature_parse(doc, &c) == QWLIM_OK);
    double theta = 1.0;
    CHECK(qwlim_total_angle(c, &theta) == QWLIM_OK);
    CHECK(theta == doctest::Approx(0.0).epsilon(1e-14));
    int verdict = -1;
    CHECK(qwlim_curve_self_intersects(c, -1.0, 2.0, 1e-3, &verdict) == QWLIM_OK);
    CHECK(verdict == 0);

    qwlim_potential* p = nullptr;
    REQUIRE(qwlim_potential_from_curvature(c, &p) == QWLIM_OK);
    qwlim_resonance_report rep{};
    REQUIRE(qwlim_detect_resonance(p, 801, &rep) == QWLIM_OK);
    CHECK(rep.resonant == 1);
    CHECK(rep.parity == -1); // ab = pi: odd resonance
    qwlim_potential_free(p);
    qwlim_curvature_free(c);
}

TEST_CASE("parse errors carry messages") {
    qwlim_curvature* c = nullptr;
    CHECK(qwlim_curvature_parse("{not json", &c) == QWLIM_ERROR_PARSE);
    CHECK(std::string(qwlim_last_error()).size() > 0);
    CHECK(qwlim_curvature_parse(R"({"kind":"nope"})", &c) ==
          QWLIM_ERROR_INVALID_ARGUMENT);
    CHECK(qwlim_curvature_parse(nullptr, &c) == QWLIM_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("zero curvature is a hypothesis violation") {
    qwlim_curvature* c = nullptr;
    REQUIRE(qwlim_curvature_parse(
                R"({"kind":"piecewise","segments":[{"value":0.0,"from":0.0,"to":1.0}]})",
                &c) == QWLIM_OK);
    qwlim_potential* p = nullptr;
    CHECK(qwlim_potential_from_curvature(c, &p) == QWLIM_ERROR_HYPOTHESIS);
    qwlim_curvature_free(c);
}

TEST_CASE("resonance margin and scattering") {
    qwlim_potential* p = nullptr;
    REQUIRE(qwlim_potential_parse(R"({"kind":"well","a":3.141592653589793,"b":1.0})",
                                  &p) == QWLIM_OK);
    double margin = 1.0;
    CHECK(qwlim_resonance_margin(p, &margin) == QWLIM_OK);
    CHECK(std::abs(margin) < 1e-12);
    qwlim_potential_free(p);

    qwlim_pointop* op = nullptr;
    REQUIRE(qwlim_pointop_resonant(2.0, 1.0, &op) == QWLIM_OK);
    qwlim_scattering s{};
    CHECK(qwlim_scattering_matrix(op, &s) == QWLIM_OK);
    CHECK(s.transmission == 3.0 / 5.0);
    CHECK(s.reflection_plus == 4.0 / 5.0);
    CHECK(s.reflection_minus == -4.0 / 5.0);
    qwlim_pointop_free(op);

    CHECK(qwlim_pointop_resonant(0.0, 0.0, &op) == QWLIM_ERROR_INVALID_ARGUMENT);
    qwlim_pointop* d = nullptr;
    REQUIRE(qwlim_pointop_dirichlet(&d) == QWLIM_OK);
    CHECK(qwlim_scattering_matrix(d, &s) == QWLIM_OK);
    CHECK(s.transmission == 0.0);
    CHECK(s.reflection_plus == -1.0);
    qwlim_pointop_free(d);
}

TEST_CASE("run driver writes resonance outputs") {
    TempDir dir;
    const char* config = R"({"schema":1,
        "potential":{"kind":"well","a":3.141592653589793,"b":1.0},
        "N":801,"dump_phi0":true})";
    REQUIRE(qwlim_run("resonance", config, dir.path.c_str(), 1, 0) == QWLIM_OK);
    const std::string report = slurp(dir.path / "report.json");
    CHECK(report.find("\"resonant\": true") != std::string::npos);
    CHECK(std::filesystem::exists(dir.path / "phi0.csv"));

    // schema guard and non-resonant requirement
    CHECK(qwlim_run("resonance", R"({"potential":{"kind":"well","a":1.0,"b":1.0}})",
                    dir.path.c_str(), 1, 0) == QWLIM_ERROR_INVALID_ARGUMENT);
    CHECK(qwlim_run("resonance",
                    R"({"schema":1,"potential":{"kind":"well","a":1.0,"b":1.0},
                        "N":401,"require_resonant":true})",
                    dir.path.c_str(), 1, 0) == QWLIM_ERROR_NOT_RESONANT);
    CHECK(qwlim_run("nope", R"({"schema":1})", dir.path.c_str(), 1, 0) ==
          QWLIM_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("run driver scan finds the square-well roots") {
    TempDir dir;
    const char* config = R"({"schema":1,"family":"well-depth","b":1.0,
        "from":1.0,"to":7.0,"points":61,"refine":true})";
    REQUIRE(qwlim_run("scan", config, dir.path.c_str(), 1, 0) == QWLIM_OK);
    const std::string summary = slurp(dir.path / "scan.json");
    CHECK(summary.find("3.14159265358979") != std::string::npos);
    CHECK(summary.find("6.28318530717958") != std::string::npos);
}
