/* C interface to the time-domain NRBC kernel library and the spherical
 * cloak simulator.  All functions return a status code; details of the last
 * failure on the calling thread are available from tdnrbc_last_error().
 * Handles are opaque and must be released with their destroy function. */
#ifndef TDNRBC_H
#define TDNRBC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  TDNRBC_OK = 0,
  TDNRBC_ERR_INVALID_ARGUMENT = 1,
  TDNRBC_ERR_DOMAIN = 2,
  TDNRBC_ERR_CONVERGENCE = 3,
  TDNRBC_ERR_IO = 4,
  TDNRBC_ERR_CONFIG = 5,
  TDNRBC_ERR_MODEL = 6,
  TDNRBC_ERR_INTERNAL = 7
} tdnrbc_status;

typedef enum { TDNRBC_ZEROS_K = 0, TDNRBC_ZEROS_COMBINED = 1 } tdnrbc_zero_kind;

const char* tdnrbc_version(void);
/* message of the most recent failure on this thread, empty if none */
const char* tdnrbc_last_error(void);

/* ---- pole tables ------------------------------------------------------ */

/* number of zeros for degree l (l for K, l+1 for the combined family) */
tdnrbc_status tdnrbc_pole_count(tdnrbc_zero_kind kind, int l, int* count);

/* fills re/im/residual arrays of length tdnrbc_pole_count(kind, l) */
tdnrbc_status tdnrbc_poles(tdnrbc_zero_kind kind, int l, double* re, double* im,
                           double* residual);

/* CSV "l,j,re,im,residual" for l = 1..lmax, written atomically */
tdnrbc_status tdnrbc_write_zeros_csv(tdnrbc_zero_kind kind, int lmax,
                                     const char* path);

/* ---- convolution kernels ---------------------------------------------- */

/* relative errors of the two closed-form routes to (rho_l * psi_l)(t) */
tdnrbc_status tdnrbc_kernel_crosscheck(int l, double b, double c,
                                       const double* times, int n_times,
                                       double* err_out);

/* CSV "l,t,e" over the given degree and time lists */
tdnrbc_status tdnrbc_write_kernel_test_csv(double b, double c, const int* ls,
                                           int n_ls, const double* ts, int n_ts,
                                           const char* path);

/* trapezoidal recursive-convolution convergence study: max error against the
 * closed form of (sigma_l * sin(omega0 t))(t_end) for each step size */
tdnrbc_status tdnrbc_convolve_study(int l, double b, double c, double omega0,
                                    double t_end, const double* dts, int n_dts,
                                    double* err_out);

/* ---- simulation -------------------------------------------------------- */

typedef struct tdnrbc_sim tdnrbc_sim;

tdnrbc_status tdnrbc_sim_create_from_file(const char* config_path,
                                          tdnrbc_sim** sim_out);
tdnrbc_status tdnrbc_sim_create_from_string(const char* config_text,
                                            tdnrbc_sim** sim_out);
void tdnrbc_sim_destroy(tdnrbc_sim* sim);

/* worker threads for the mode-parallel loops (default: hardware) */
tdnrbc_status tdnrbc_sim_set_threads(tdnrbc_sim* sim, int threads);

/* runs the scenario; when out_dir is non-NULL writes run-manifest,
 * diagnostics.csv, zeros/*.csv and snapshots/t_<time>.csv underneath it */
tdnrbc_status tdnrbc_sim_run(tdnrbc_sim* sim, const char* out_dir);

/* shielding metric S = max_{r < 0.9 R1} |D_z| / A at the final time */
tdnrbc_status tdnrbc_sim_shielding(const tdnrbc_sim* sim, double* s_out);

/* largest mode-coefficient magnitude observed during the run */
tdnrbc_status tdnrbc_sim_max_norm(const tdnrbc_sim* sim, double* out);

/* number of collected snapshots and sample count of snapshot i */
tdnrbc_status tdnrbc_sim_snapshot_count(const tdnrbc_sim* sim, int* count);
tdnrbc_status tdnrbc_sim_snapshot_size(const tdnrbc_sim* sim, int index,
                                       size_t* n_points);
/* copies x, y and Re(Dz) arrays of snapshot i (each of length n_points) */
tdnrbc_status tdnrbc_sim_snapshot_data(const tdnrbc_sim* sim, int index,
                                       double* x, double* y, double* re_dz);

/* ---- slice utilities --------------------------------------------------- */

/* filter a snapshot CSV by stride and radius; stride >= 1, rmax < 0 keeps all */
tdnrbc_status tdnrbc_slice_export(const char* src_csv, const char* dst_csv,
                                  int stride, double rmax);

#ifdef __cplusplus
}
#endif

#endif /* TDNRBC_H */
