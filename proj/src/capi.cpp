#include "qwlim.h"

#include <exception>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "qwlim/errors.hpp"
#include "qwlim/geometry.hpp"
#include "qwlim/io.hpp"
#include "qwlim/lowenergy.hpp"
#include "qwlim/point_interaction.hpp"
#include "qwlim/potential.hpp"
#include "qwlim/runners.hpp"
#include "qwlim/shooting.hpp"

struct qwlim_curvature {
    qwlim::CurvatureProfile value;
};
struct qwlim_potential {
    qwlim::Potential1D value;
};
struct qwlim_pointop {
    qwlim::PointInteraction value;
};

namespace {

thread_local std::string g_last_error;

qwlim_status record(qwlim_status s, const std::string& message) {
    g_last_error = message;
    return s;
}

template <class Fn>
qwlim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QWLIM_OK;
    } catch (const nlohmann::json::parse_error& e) {
        return record(QWLIM_ERROR_PARSE, e.what());
    } catch (const qwlim::HypothesisError& e) {
        return record(QWLIM_ERROR_HYPOTHESIS, e.what());
    } catch (const qwlim::NotResonantError& e) {
        return record(QWLIM_ERROR_NOT_RESONANT, e.what());
    } catch (const qwlim::SolverError& e) {
        return record(QWLIM_ERROR_SOLVER, e.what());
    } catch (const std::invalid_argument& e) {
        return record(QWLIM_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return record(QWLIM_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return record(QWLIM_ERROR_IO, e.what());
    } catch (const std::ios_base::failure& e) {
        return record(QWLIM_ERROR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return record(QWLIM_ERROR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(QWLIM_ERROR_INTERNAL, e.what());
    } catch (...) {
        return record(QWLIM_ERROR_INTERNAL, "unknown error");
    }
}

qwlim_status require(bool ok, const char* message) {
    return ok ? QWLIM_OK : record(QWLIM_ERROR_INVALID_ARGUMENT, message);
}

} // namespace

extern "C" {

const char* qwlim_version(void) { return "0.1.0"; }

const char* qwlim_status_name(qwlim_status s) {
    switch (s) {
        case QWLIM_OK: return "ok";
        case QWLIM_ERROR_INVALID_ARGUMENT: return "invalid-argument";
        case QWLIM_ERROR_PARSE: return "parse-error";
        case QWLIM_ERROR_HYPOTHESIS: return "hypothesis-violated";
        case QWLIM_ERROR_SOLVER: return "solver-failure";
        case QWLIM_ERROR_IO: return "io-error";
        case QWLIM_ERROR_NOT_RESONANT: return "not-resonant";
        case QWLIM_ERROR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* qwlim_last_error(void) { return g_last_error.c_str(); }

qwlim_status qwlim_curvature_parse(const char* json, qwlim_curvature** out) {
    if (auto s = require(json && out, "null argument")) return s;
    return guarded([&]() {
        const auto doc = qwlim::io::parse_json_text(json);
        *out = new qwlim_curvature{qwlim::io::curvature_from_json(doc)};
    });
}

void qwlim_curvature_free(qwlim_curvature* c) { delete c; }

qwlim_status qwlim_potential_parse(const char* json, qwlim_potential** out) {
    if (auto s = require(json && out, "null argument")) return s;
    return guarded([&]() {
        const auto doc = qwlim::io::parse_json_text(json);
        *out = new qwlim_potential{qwlim::io::potential_from_json(doc)};
    });
}

qwlim_status qwlim_potential_from_curvature(const qwlim_curvature* c,
                                            qwlim_potential** out) {
    if (auto s = require(c && out, "null argument")) return s;
    return guarded([&]() {
        *out = new qwlim_potential{qwlim::Potential1D::from_curvature(c->value)};
    });
}

void qwlim_potential_free(qwlim_potential* p) { delete p; }

qwlim_status qwlim_pointop_parse(const char* json, qwlim_pointop** out) {
    if (auto s = require(json && out, "null argument")) return s;
    return guarded([&]() {
        const auto doc = qwlim::io::parse_json_text(json);
        *out = new qwlim_pointop{qwlim::io::pointop_from_json(doc)};
    });
}

qwlim_status qwlim_pointop_resonant(double c1, double c2, qwlim_pointop** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    return guarded([&]() {
        *out = new qwlim_pointop{qwlim::PointInteraction::resonant(c1, c2)};
    });
}

qwlim_status qwlim_pointop_dirichlet(qwlim_pointop** out) {
    if (auto s = require(out != nullptr, "null argument")) return s;
    return guarded([&]() {
        *out = new qwlim_pointop{qwlim::PointInteraction::dirichlet()};
    });
}

void qwlim_pointop_free(qwlim_pointop* op) { delete op; }

qwlim_status qwlim_total_angle(const qwlim_curvature* c, double* theta) {
    if (auto s = require(c && theta, "null argument")) return s;
    return guarded([&]() { *theta = c->value.total_angle(); });
}

qwlim_status qwlim_curve_self_intersects(const qwlim_curvature* c, double t_min,
                                         double t_max, double step, int* verdict) {
    if (auto s = require(c && verdict, "null argument")) return s;
    return guarded([&]() {
        const qwlim::Polyline p = qwlim::reconstruct_curve(c->value, t_min, t_max, step);
        *verdict = qwlim::self_intersects(p) ? 1 : 0;
    });
}

qwlim_status qwlim_detect_resonance(const qwlim_potential* p, int n_nodes,
                                    qwlim_resonance_report* out) {
    if (auto s = require(p && out, "null argument")) return s;
    return guarded([&]() {
        const qwlim::ResonanceReport rep = qwlim::detect_resonance(p->value, n_nodes);
        out->resonant = rep.resonant ? 1 : 0;
        out->sigma_min = rep.sigma_min;
        out->threshold = rep.threshold;
        out->c1 = rep.c1;
        out->c2 = rep.c2;
        out->plateau_left = rep.plateau_left;
        out->plateau_right = rep.plateau_right;
        out->parity = rep.parity == qwlim::Parity::Even
                          ? 1
                          : (rep.parity == qwlim::Parity::Odd ? -1 : 0);
        out->n_nodes = rep.n_nodes;
    });
}

qwlim_status qwlim_resonance_margin(const qwlim_potential* p, double* margin) {
    if (auto s = require(p && margin, "null argument")) return s;
    return guarded([&]() { *margin = qwlim::resonance_margin(p->value); });
}

qwlim_status qwlim_scattering_matrix(const qwlim_pointop* op, qwlim_scattering* out) {
    if (auto s = require(op && out, "null argument")) return s;
    return guarded([&]() {
        const qwlim::ScatteringData d = qwlim::scattering_matrix(op->value);
        out->transmission = d.transmission;
        out->reflection_plus = d.reflection_plus;
        out->reflection_minus = d.reflection_minus;
    });
}

qwlim_status qwlim_run(const char* cmd, const char* config_json,
                       const char* out_dir, int threads, int verbose) {
    if (auto s = require(cmd && config_json && out_dir, "null argument")) return s;
    return guarded([&]() {
        qwlim::RunOptions opts;
        opts.threads = threads > 0 ? threads : 1;
        opts.verbose = verbose != 0;
        qwlim::run_command(cmd, config_json, out_dir, opts);
    });
}

} // extern "C"
