#include "tdnrbc.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <memory>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloaksim.hpp"
#include "config.hpp"
#include "convolve.hpp"
#include "io.hpp"
#include "nrbk.hpp"
#include "specfun.hpp"

namespace {

thread_local std::string g_last_error;

tdnrbc_status fail(tdnrbc_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

tdnrbc_status guard(const std::function<void()>& body) {
  try {
    body();
    return TDNRBC_OK;
  } catch (const std::invalid_argument& e) {
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(TDNRBC_ERR_DOMAIN, e.what());
  } catch (const std::overflow_error& e) {
    return fail(TDNRBC_ERR_DOMAIN, e.what());
  } catch (const std::runtime_error& e) {
    return fail(TDNRBC_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return fail(TDNRBC_ERR_INTERNAL, e.what());
  }
}

const tdnrbc::PoleSet& pole_set(tdnrbc_zero_kind kind, int l) {
  return kind == TDNRBC_ZEROS_K ? tdnrbc::k_zeros(l) : tdnrbc::combined_zeros(l);
}

}  // namespace

struct tdnrbc_sim {
  tdnrbc::Scenario scenario;
  std::unique_ptr<tdnrbc::Simulation> simulation;
  tdnrbc::RunResult result;
  bool has_result = false;
};

extern "C" {

const char* tdnrbc_version(void) { return "0.1.0"; }

const char* tdnrbc_last_error(void) { return g_last_error.c_str(); }

tdnrbc_status tdnrbc_pole_count(tdnrbc_zero_kind kind, int l, int* count) {
  if (!count) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "count is NULL");
  return guard([&] { *count = static_cast<int>(pole_set(kind, l).poles.size()); });
}

tdnrbc_status tdnrbc_poles(tdnrbc_zero_kind kind, int l, double* re, double* im,
                           double* residual) {
  if (!re || !im || !residual)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "output array is NULL");
  return guard([&] {
    const tdnrbc::PoleSet& set = pole_set(kind, l);
    for (std::size_t j = 0; j < set.poles.size(); ++j) {
      re[j] = set.poles[j].real();
      im[j] = set.poles[j].imag();
      residual[j] = set.residuals[j];
    }
  });
}

tdnrbc_status tdnrbc_write_zeros_csv(tdnrbc_zero_kind kind, int lmax,
                                     const char* path) {
  if (!path) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "path is NULL");
  return guard([&] {
    tdnrbc::ZeroKind k = kind == TDNRBC_ZEROS_K ? tdnrbc::ZeroKind::KZeros
                                                : tdnrbc::ZeroKind::CombinedZeros;
    tdnrbc::atomic_write(path, tdnrbc::zeros_csv(k, lmax));
  });
}

tdnrbc_status tdnrbc_kernel_crosscheck(int l, double b, double c,
                                       const double* times, int n_times,
                                       double* err_out) {
  if (!times || !err_out || n_times < 1)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "bad time array");
  return guard([&] {
    std::vector<double> ts(times, times + n_times);
    std::vector<double> errs = tdnrbc::kernel_crosscheck(l, b, c, ts);
    std::copy(errs.begin(), errs.end(), err_out);
  });
}

tdnrbc_status tdnrbc_write_kernel_test_csv(double b, double c, const int* ls,
                                           int n_ls, const double* ts, int n_ts,
                                           const char* path) {
  if (!ls || !ts || !path || n_ls < 1 || n_ts < 1)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "bad argument");
  return guard([&] {
    std::vector<int> lv(ls, ls + n_ls);
    std::vector<double> tv(ts, ts + n_ts);
    tdnrbc::atomic_write(path, tdnrbc::kernel_test_csv(b, c, lv, tv));
  });
}

tdnrbc_status tdnrbc_convolve_study(int l, double b, double c, double omega0,
                                    double t_end, const double* dts, int n_dts,
                                    double* err_out) {
  if (!dts || !err_out || n_dts < 1)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "bad step array");
  return guard([&] {
    tdnrbc::KernelPtr kernel = tdnrbc::sigma_kernel(l, b, c);
    for (int d = 0; d < n_dts; ++d) {
      double dt = dts[d];
      tdnrbc::ConvolutionState st = tdnrbc::make_state(*kernel, dt);
      long steps = std::lround(t_end / dt);
      for (long n = 0; n < steps; ++n)
        tdnrbc::advance(st, std::sin(omega0 * n * dt),
                        std::sin(omega0 * (n + 1) * dt));
      tdnrbc::cplx got = tdnrbc::value(*kernel, st, std::sin(omega0 * t_end));
      // closed form of sigma_l * sin(omega0 t): per pole,
      // e^{pt} * sin(w t) = [(e^{iwt}-e^{pt})/(iw-p) - (e^{-iwt}-e^{pt})/(-iw-p)] / 2i
      tdnrbc::cplx exact = 0.0;
      for (std::size_t j = 0; j < kernel->rate_poles.size(); ++j) {
        tdnrbc::cplx p = kernel->rate_poles[j];
        tdnrbc::cplx iw(0.0, omega0);
        tdnrbc::cplx conv =
            ((std::exp(iw * t_end) - std::exp(p * t_end)) / (iw - p) -
             (std::exp(-iw * t_end) - std::exp(p * t_end)) / (-iw - p)) /
            tdnrbc::cplx(0.0, 2.0);
        exact += kernel->weights[j] * conv;
      }
      err_out[d] = std::abs(got - exact);
    }
  });
}

tdnrbc_status tdnrbc_sim_create_from_file(const char* config_path,
                                          tdnrbc_sim** sim_out) {
  if (!config_path || !sim_out)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guard([&] {
    auto sim = std::make_unique<tdnrbc_sim>();
    sim->scenario = tdnrbc::parse_config_file(config_path);
    *sim_out = sim.release();
  });
}

tdnrbc_status tdnrbc_sim_create_from_string(const char* config_text,
                                            tdnrbc_sim** sim_out) {
  if (!config_text || !sim_out)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  return guard([&] {
    auto sim = std::make_unique<tdnrbc_sim>();
    sim->scenario = tdnrbc::parse_config_text(config_text);
    *sim_out = sim.release();
  });
}

void tdnrbc_sim_destroy(tdnrbc_sim* sim) { delete sim; }

tdnrbc_status tdnrbc_sim_set_threads(tdnrbc_sim* sim, int threads) {
  if (!sim) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "sim is NULL");
  if (threads < 1) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "threads must be >= 1");
  sim->scenario.threads = threads;
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_sim_run(tdnrbc_sim* sim, const char* out_dir) {
  if (!sim) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "sim is NULL");
  return guard([&] {
    namespace fs = std::filesystem;
    sim->simulation = std::make_unique<tdnrbc::Simulation>(sim->scenario);
    sim->simulation->prepare();
    std::string dir;
    if (out_dir && *out_dir) {
      dir = out_dir;
      fs::create_directories(dir);
      fs::create_directories(dir + "/snapshots");
      fs::create_directories(dir + "/zeros");
      // the manifest lands on disk before time stepping begins
      tdnrbc::atomic_write(
          dir + "/run-manifest",
          tdnrbc::manifest_text(sim->simulation->scenario(),
                                sim->simulation->setup_info(), tdnrbc_version()));
      tdnrbc::atomic_write(dir + "/zeros/k.csv",
                           tdnrbc::zeros_csv(tdnrbc::ZeroKind::KZeros,
                                             sim->scenario.L));
      tdnrbc::atomic_write(dir + "/zeros/combined.csv",
                           tdnrbc::zeros_csv(tdnrbc::ZeroKind::CombinedZeros,
                                             sim->scenario.L));
    }
    sim->result = sim->simulation->run();
    sim->has_result = true;
    if (!dir.empty()) {
      tdnrbc::atomic_write(dir + "/diagnostics.csv",
                           tdnrbc::diagnostics_csv(sim->result.diagnostics));
      for (const tdnrbc::FieldSnapshot& snap : sim->result.snapshots)
        tdnrbc::atomic_write(
            dir + "/snapshots/" + tdnrbc::snapshot_filename(snap.time),
            tdnrbc::snapshot_csv(snap, sim->scenario.slice.full_vector));
    }
  });
}

tdnrbc_status tdnrbc_sim_shielding(const tdnrbc_sim* sim, double* s_out) {
  if (!sim || !s_out) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!sim->has_result) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "run first");
  *s_out = sim->result.final_shielding;
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_sim_max_norm(const tdnrbc_sim* sim, double* out) {
  if (!sim || !out) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!sim->has_result) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "run first");
  *out = sim->result.max_mode_norm;
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_sim_snapshot_count(const tdnrbc_sim* sim, int* count) {
  if (!sim || !count) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!sim->has_result) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "run first");
  *count = static_cast<int>(sim->result.snapshots.size());
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_sim_snapshot_size(const tdnrbc_sim* sim, int index,
                                       size_t* n_points) {
  if (!sim || !n_points) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!sim->has_result) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "run first");
  if (index < 0 || index >= static_cast<int>(sim->result.snapshots.size()))
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "snapshot index out of range");
  *n_points = sim->result.snapshots[index].x.size();
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_sim_snapshot_data(const tdnrbc_sim* sim, int index,
                                       double* x, double* y, double* re_dz) {
  if (!sim || !x || !y || !re_dz)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "NULL argument");
  if (!sim->has_result) return fail(TDNRBC_ERR_INVALID_ARGUMENT, "run first");
  if (index < 0 || index >= static_cast<int>(sim->result.snapshots.size()))
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "snapshot index out of range");
  const tdnrbc::FieldSnapshot& snap = sim->result.snapshots[index];
  for (std::size_t i = 0; i < snap.x.size(); ++i) {
    x[i] = snap.x[i];
    y[i] = snap.y[i];
    re_dz[i] = snap.Dz[i].real();
  }
  return TDNRBC_OK;
}

tdnrbc_status tdnrbc_slice_export(const char* src_csv, const char* dst_csv,
                                  int stride, double rmax) {
  if (!src_csv || !dst_csv || stride < 1)
    return fail(TDNRBC_ERR_INVALID_ARGUMENT, "bad argument");
  return guard([&] {
    std::ifstream in(src_csv, std::ios::binary);
    if (!in) throw std::runtime_error(std::string("cannot open ") + src_csv);
    std::string header;
    if (!std::getline(in, header))
      throw std::runtime_error("empty snapshot file");
    std::ostringstream out;
    out << header << '\n';
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      bool keep = (row % stride) == 0;
      if (keep && rmax >= 0.0) {
        std::stringstream ls(line);
        std::string sx, sy;
        std::getline(ls, sx, ',');
        std::getline(ls, sy, ',');
        double r = std::hypot(std::stod(sx), std::stod(sy));
        keep = r <= rmax;
      }
      if (keep) out << line << '\n';
      ++row;
    }
    tdnrbc::atomic_write(dst_csv, out.str());
  });
}

}  // extern "C"
