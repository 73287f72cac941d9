// Command-line front end.  Links only the public C API.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "tdnrbc.h"

namespace {

int die(tdnrbc_status st, const char* what) {
  if (st == TDNRBC_OK) return 0;
  std::fprintf(stderr, "tdnrbc: %s failed: %s\n", what, tdnrbc_last_error());
  return static_cast<int>(st);
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stoi(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stod(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-domain NRBC kernels and spherical cloak simulator"};
  app.require_subcommand(1);

  // zeros
  auto* zeros = app.add_subcommand("zeros", "emit Bessel-combination zero tables");
  std::string zkind = "k", zout = "zeros.csv";
  int zlmax = 50;
  zeros->add_option("--kind", zkind, "k or combined")
      ->check(CLI::IsMember({"k", "combined"}));
  zeros->add_option("--lmax", zlmax, "largest degree")->check(CLI::Range(1, 200));
  zeros->add_option("--out", zout, "output CSV path");

  // kernel-test
  auto* ktest = app.add_subcommand("kernel-test",
                                   "cross-validate the rho kernel against the "
                                   "sigma-only route");
  double kb = 3.0, kc = 5.0;
  std::string kls = "1,5,10,15,30,50", kts = "1,2,4,10", kout = "kernel-test.csv";
  ktest->add_option("--b", kb, "sphere radius");
  ktest->add_option("--c", kc, "wave speed");
  ktest->add_option("--l", kls, "comma-separated degrees");
  ktest->add_option("--t", kts, "comma-separated times");
  ktest->add_option("--out", kout, "output CSV path");

  // convolve-test
  auto* ctest = app.add_subcommand(
      "convolve-test", "trapezoidal recursive-convolution convergence study");
  int cl = 3;
  double cb = 1.0, cc = 1.0, comega = 3.0, ct_end = 2.0;
  std::string cdts = "0.02,0.01,0.005,0.0025";
  ctest->add_option("--l", cl, "kernel degree");
  ctest->add_option("--b", cb, "sphere radius");
  ctest->add_option("--c", cc, "wave speed");
  ctest->add_option("--omega", comega, "test signal frequency");
  ctest->add_option("--t-end", ct_end, "integration horizon");
  ctest->add_option("--dt", cdts, "comma-separated step sizes");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a cloak scenario");
  std::string config_path, out_dir = "run";
  int threads = 0;
  sim->add_option("--config", config_path, "scenario config file")->required();
  sim->add_option("--out", out_dir, "run directory");
  sim->add_option("--threads", threads, "worker threads (0: hardware)");

  // slice-export
  auto* slice = app.add_subcommand("slice-export",
                                   "filter or subsample a snapshot CSV");
  std::string sin_path, sout_path;
  int stride = 1;
  double rmax = -1.0;
  slice->add_option("--in", sin_path, "snapshot CSV from a run directory")
      ->required();
  slice->add_option("--out", sout_path, "destination CSV")->required();
  slice->add_option("--stride", stride, "keep every stride-th row")
      ->check(CLI::PositiveNumber);
  slice->add_option("--rmax", rmax, "keep rows with hypot(x, y) <= rmax");

  CLI11_PARSE(app, argc, argv);

  if (zeros->parsed()) {
    tdnrbc_zero_kind kind =
        zkind == "k" ? TDNRBC_ZEROS_K : TDNRBC_ZEROS_COMBINED;
    return die(tdnrbc_write_zeros_csv(kind, zlmax, zout.c_str()), "zeros");
  }

  if (ktest->parsed()) {
    std::vector<int> ls = parse_int_list(kls);
    std::vector<double> ts = parse_double_list(kts);
    return die(tdnrbc_write_kernel_test_csv(kb, kc, ls.data(),
                                            static_cast<int>(ls.size()),
                                            ts.data(),
                                            static_cast<int>(ts.size()),
                                            kout.c_str()),
               "kernel-test");
  }

  if (ctest->parsed()) {
    std::vector<double> dts = parse_double_list(cdts);
    std::vector<double> errs(dts.size());
    tdnrbc_status st =
        tdnrbc_convolve_study(cl, cb, cc, comega, ct_end, dts.data(),
                              static_cast<int>(dts.size()), errs.data());
    if (st != TDNRBC_OK) return die(st, "convolve-test");
    std::printf("%12s %14s %10s\n", "dt", "max error", "ratio");
    for (std::size_t i = 0; i < dts.size(); ++i) {
      if (i == 0)
        std::printf("%12g %14.6e %10s\n", dts[i], errs[i], "-");
      else
        std::printf("%12g %14.6e %10.3f\n", dts[i], errs[i],
                    errs[i - 1] / errs[i]);
    }
    return 0;
  }

  if (sim->parsed()) {
    tdnrbc_sim* handle = nullptr;
    tdnrbc_status st = tdnrbc_sim_create_from_file(config_path.c_str(), &handle);
    if (st != TDNRBC_OK) return die(st, "simulate");
    if (threads == 0) {
      if (const char* env = std::getenv("TDNRBC_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) {
      st = tdnrbc_sim_set_threads(handle, threads);
      if (st != TDNRBC_OK) {
        tdnrbc_sim_destroy(handle);
        return die(st, "simulate");
      }
    }
    st = tdnrbc_sim_run(handle, out_dir.c_str());
    if (st != TDNRBC_OK) {
      tdnrbc_sim_destroy(handle);
      return die(st, "simulate");
    }
    double s = 0.0;
    tdnrbc_sim_shielding(handle, &s);
    std::printf("run complete: outputs in %s, shielding S = %.6e\n",
                out_dir.c_str(), s);
    tdnrbc_sim_destroy(handle);
    return 0;
  }

  if (slice->parsed()) {
    return die(tdnrbc_slice_export(sin_path.c_str(), sout_path.c_str(), stride,
                                   rmax),
               "slice-export");
  }
  return 1;
}
