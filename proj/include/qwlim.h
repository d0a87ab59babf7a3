/*
 * qwlim - quantum waveguide thin-limit toolkit, C interface.
 *
 * The library computes zero-energy resonances of curvature-induced 1D
 * potentials, the limiting point interaction on the line, and convergence
 * tables of the scaled 1D and 2D strip resolvents. Objects are owned
 * behind opaque handles; every call returns a status code and a per-thread
 * message is available through qwlim_last_error().
 *
 * Document schemas (curvature, potential, point operator, run configs)
 * are described in the project README.
 */
#ifndef QWLIM_H
#define QWLIM_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define QWLIM_API __declspec(dllexport)
#else
#define QWLIM_API __attribute__((visibility("default")))
#endif

typedef enum qwlim_status {
    QWLIM_OK = 0,
    QWLIM_ERROR_INVALID_ARGUMENT = 1,
    QWLIM_ERROR_PARSE = 2,
    QWLIM_ERROR_HYPOTHESIS = 3, /* a standing model assumption is violated */
    QWLIM_ERROR_SOLVER = 4,
    QWLIM_ERROR_IO = 5,
    QWLIM_ERROR_NOT_RESONANT = 6,
    QWLIM_ERROR_INTERNAL = 7
} qwlim_status;

QWLIM_API const char *qwlim_version(void);
QWLIM_API const char *qwlim_status_name(qwlim_status s);
/* Message of the last failing call on this thread; empty string if none. */
QWLIM_API const char *qwlim_last_error(void);

typedef struct qwlim_curvature qwlim_curvature;
typedef struct qwlim_potential qwlim_potential;
typedef struct qwlim_pointop qwlim_pointop;

/* ---- construction ---------------------------------------------------- */
QWLIM_API qwlim_status qwlim_curvature_parse(const char *json,
                                             qwlim_curvature **out);
QWLIM_API void qwlim_curvature_free(qwlim_curvature *c);

QWLIM_API qwlim_status qwlim_potential_parse(const char *json,
                                             qwlim_potential **out);
QWLIM_API qwlim_status qwlim_potential_from_curvature(const qwlim_curvature *c,
                                                      qwlim_potential **out);
QWLIM_API void qwlim_potential_free(qwlim_potential *p);

QWLIM_API qwlim_status qwlim_pointop_parse(const char *json, qwlim_pointop **out);
QWLIM_API qwlim_status qwlim_pointop_resonant(double c1, double c2,
                                              qwlim_pointop **out);
QWLIM_API qwlim_status qwlim_pointop_dirichlet(qwlim_pointop **out);
QWLIM_API void qwlim_pointop_free(qwlim_pointop *op);

/* ---- geometry --------------------------------------------------------- */
QWLIM_API qwlim_status qwlim_total_angle(const qwlim_curvature *c, double *theta);
/* Reconstructs the curve over [t_min, t_max] at the given step and tests
 * for self-intersection; verdict is 0 or 1. */
QWLIM_API qwlim_status qwlim_curve_self_intersects(const qwlim_curvature *c,
                                                   double t_min, double t_max,
                                                   double step, int *verdict);

/* ---- resonance analysis ------------------------------------------------ */
typedef struct qwlim_resonance_report {
    int resonant;
    double sigma_min;
    double threshold;
    double c1, c2; /* sign convention: c1 >= 0, else c2 > 0 */
    double plateau_left, plateau_right;
    int parity; /* 0 none, +1 even, -1 odd */
    int n_nodes;
} qwlim_resonance_report;

QWLIM_API qwlim_status qwlim_detect_resonance(const qwlim_potential *p,
                                              int n_nodes,
                                              qwlim_resonance_report *out);
/* End slope of the zero-energy shot; zero exactly at a resonance. */
QWLIM_API qwlim_status qwlim_resonance_margin(const qwlim_potential *p,
                                              double *margin);

/* ---- scattering of the limit operator ---------------------------------- */
typedef struct qwlim_scattering {
    double transmission;
    double reflection_plus;
    double reflection_minus;
} qwlim_scattering;

QWLIM_API qwlim_status qwlim_scattering_matrix(const qwlim_pointop *op,
                                               qwlim_scattering *out);

/* ---- batch drivers ------------------------------------------------------
 * cmd is one of: resonance | scan | limit-op | converge-1d | converge-2d |
 * curve | evolve. config_json is the config document text; outputs are
 * written into out_dir. threads >= 1; verbose prints per-step progress. */
QWLIM_API qwlim_status qwlim_run(const char *cmd, const char *config_json,
                                 const char *out_dir, int threads, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* QWLIM_H */
