#include "qwlim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qwlim::io {

namespace {

double need_number(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw std::invalid_argument(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
}

std::string need_string(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw std::invalid_argument(std::string("missing string field '") + key + "'");
    return j[key].get<std::string>();
}

std::vector<CurvatureSegment> segments_from_json(const Json& j) {
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
        throw std::invalid_argument("piecewise document needs a 'segments' array");
    std::vector<CurvatureSegment> segs;
    for (const auto& s : j["segments"])
        segs.push_back({need_number(s, "value"), need_number(s, "from"),
                        need_number(s, "to")});
    return segs;
}

} // namespace

CurvatureProfile curvature_from_json(const Json& j) {
    const std::string kind = need_string(j, "kind");
    if (kind == "piecewise") return CurvatureProfile::piecewise(segments_from_json(j));
    if (kind == "bump") {
        BumpShape shape = BumpShape::Even;
        if (j.contains("shape")) {
            const std::string s = j["shape"].get<std::string>();
            if (s == "odd")
                shape = BumpShape::Odd;
            else if (s != "even")
                throw std::invalid_argument("bump shape must be 'even' or 'odd'");
        }
        return CurvatureProfile::bump(need_number(j, "amplitude"),
                                      need_number(j, "from"), need_number(j, "to"),
                                      shape);
    }
    if (kind == "smoothed") {
        if (!j.contains("base"))
            throw std::invalid_argument("smoothed document needs a 'base' profile");
        return CurvatureProfile::smoothed(curvature_from_json(j["base"]),
                                          need_number(j, "eps"),
                                          need_number(j, "beta"));
    }
    throw std::invalid_argument("unknown curvature kind '" + kind + "'");
}

Potential1D potential_from_json(const Json& j) {
    const std::string kind = need_string(j, "kind");
    if (kind == "well")
        return Potential1D::single_well(need_number(j, "a"), need_number(j, "b"));
    if (kind == "triple-well") {
        if (!j.contains("a") || !j.contains("b") || j["a"].size() != 3 ||
            j["b"].size() != 3)
            throw std::invalid_argument("triple-well needs arrays a[3] and b[3]");
        std::array<double, 3> a{}, b{};
        for (int i = 0; i < 3; ++i) {
            a[i] = j["a"][i].get<double>();
            b[i] = j["b"][i].get<double>();
        }
        return Potential1D::triple_well(a, b);
    }
    if (kind == "piecewise") {
        std::vector<PotentialSegment> segs;
        for (const auto& s : segments_from_json(j))
            segs.push_back({s.value, s.from, s.to});
        return Potential1D::piecewise(segs);
    }
    if (kind == "from-curvature") {
        if (!j.contains("curvature"))
            throw std::invalid_argument("from-curvature needs a 'curvature' document");
        return Potential1D::from_curvature(curvature_from_json(j["curvature"]));
    }
    throw std::invalid_argument("unknown potential kind '" + kind + "'");
}

PointInteraction pointop_from_json(const Json& j) {
    const std::string kind = need_string(j, "kind");
    if (kind == "dirichlet") return PointInteraction::dirichlet();
    if (kind == "resonant")
        return PointInteraction::resonant(need_number(j, "c1"), need_number(j, "c2"));
    throw std::invalid_argument("unknown point-interaction kind '" + kind + "'");
}

Json curvature_to_json(const CurvatureProfile& gamma) {
    Json j;
    switch (gamma.kind()) {
        case CurvatureProfile::Kind::Piecewise: {
            j["kind"] = "piecewise";
            Json segs = Json::array();
            for (const auto& s : gamma.segments())
                segs.push_back({{"value", s.value}, {"from", s.from}, {"to", s.to}});
            j["segments"] = segs;
            break;
        }
        case CurvatureProfile::Kind::Bump:
            j["kind"] = "bump";
            j["amplitude"] = gamma.bump_amplitude();
            j["from"] = gamma.support_min();
            j["to"] = gamma.support_max();
            j["shape"] = gamma.bump_shape() == BumpShape::Odd ? "odd" : "even";
            break;
        case CurvatureProfile::Kind::Smoothed: {
            j["kind"] = "smoothed";
            Json base;
            base["kind"] = "piecewise";
            Json segs = Json::array();
            for (const auto& s : gamma.segments())
                segs.push_back({{"value", s.value}, {"from", s.from}, {"to", s.to}});
            base["segments"] = segs;
            j["base"] = base;
            j["eps"] = gamma.smoothing_eps();
            j["beta"] = gamma.smoothing_beta();
            break;
        }
    }
    return j;
}

Json pointop_to_json(const PointInteraction& op) {
    Json j;
    if (op.is_dirichlet()) {
        j["kind"] = "dirichlet";
    } else {
        j["kind"] = "resonant";
        j["c1"] = op.c1();
        j["c2"] = op.c2();
    }
    return j;
}

Json resonance_report_to_json(const ResonanceReport& report) {
    Json j;
    j["schema"] = 1;
    j["resonant"] = report.resonant;
    j["sigma_min"] = report.sigma_min;
    j["threshold"] = report.threshold;
    j["c1"] = report.c1;
    j["c2"] = report.c2;
    j["A"] = report.plateau_left;
    j["B"] = report.plateau_right;
    j["N"] = report.n_nodes;
    j["parity"] = report.parity == Parity::Even
                      ? "even"
                      : (report.parity == Parity::Odd ? "odd" : "none");
    return j;
}

std::string format_double(double v, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
    return buf;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad1 + Json(it.key()).dump() + ": ";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& el : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad1;
                dump_rec(el, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>(), 17);
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

void write_json_file(const std::string& path, const Json& j) {
    atomic_write(path, dump_json(j));
}

void write_csv_file(const std::string& path, const std::vector<std::string>& header,
                    const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t c = 0; c < header.size(); ++c)
        out << (c ? "," : "") << header[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c], 12);
        out << "\n";
    }
    atomic_write(path, out.str());
}

Json parse_json_text(const std::string& text) {
    return Json::parse(text); // throws nlohmann parse_error with byte location
}

} // namespace qwlim::io
