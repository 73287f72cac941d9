#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incident.hpp"
#include "newmark.hpp"
#include "sem1d.hpp"

namespace tdnrbc {

struct SliceSpec {
  double extent = 1.0;  // XY plane covers [-extent, extent]^2
  int n = 201;          // points per axis
  bool full_vector = false;
};

struct Scenario {
  IncidentWave incident;
  std::optional<DrudeParams> cloak;  // disabled when absent
  int E = 20;
  int N = 20;
  int L = 40;
  double b = 1.0;
  double R3 = 0.95;
  double c = 1.0;
  NewmarkParams nm;
  double t_end = 11.0;
  double diag_dt = 0.1;
  std::vector<double> snapshot_times = {1.0, 3.0, 5.0, 7.0, 9.0, 11.0};
  SliceSpec slice;
  int threads = 0;  // 0: hardware default

  void validate() const;
};

struct FieldSnapshot {
  double time = 0.0;
  int n = 0;
  double extent = 0.0;
  // only points with r <= b, row-major order of the full grid
  std::vector<double> x, y;
  std::vector<int> region;  // 0 cloaked, 1 cloak layer, 2 free space, 3 shell
  std::vector<cplx> Dx, Dy, Dz;
};

struct Diagnostics {
  std::vector<double> time;
  std::vector<double> shielding;        // max |D_z| (r < 0.9 R1) / A
  std::vector<double> interior_energy;  // mean |D|^2 over the interior probe
  std::vector<double> shell_energy;     // mean |D|^2 over the shell probe
};

struct RunResult {
  std::vector<FieldSnapshot> snapshots;
  Diagnostics diagnostics;
  double final_shielding = 0.0;
  double max_mode_norm = 0.0;
};

struct SetupInfo {
  double poles_seconds = 0.0;
  double assembly_seconds = 0.0;
  std::uint64_t pole_checksum_k = 0;
  std::uint64_t pole_checksum_combined = 0;
};

class Simulation {
 public:
  explicit Simulation(const Scenario& scenario);

  // builds pole tables, mesh, per-degree systems and mode states
  void prepare();
  const SetupInfo& setup_info() const { return info_; }
  const Scenario& scenario() const { return scenario_; }

  // advances to t_end, collecting snapshots and diagnostics
  RunResult run();

  // evaluate the total field at one XY-plane point (r <= b) at the current
  // simulation time; exposed for diagnostics and tests
  void field_at(double x, double y, cplx out[3]) const;

 private:
  struct DegreeBlock {
    int l = 0;
    ModeSystem sys;
    // per m in [-l, l]: v-sequence then u-sequence
    std::vector<ModeState> v_states, u_states;
    std::vector<bool> v_active, u_active;
  };

  void step_block(DegreeBlock& blk, const std::vector<IncidentStreams>& chunk,
                  long step0);
  void diagnostics_row(Diagnostics& diag);
  FieldSnapshot take_snapshot() const;

  Scenario scenario_;
  SetupInfo info_;
  bool prepared_ = false;
  double eps_t_ = 1.0;
  Mesh1D mesh_;
  std::unique_ptr<IncidentExpander> expander_;
  std::vector<DegreeBlock> blocks_;
  IncidentStreams streams_now_;  // incident data at the current time
  long step_ = 0;
  double time_ = 0.0;
  double max_norm_ = 0.0;
};

RunResult run(const Scenario& scenario);

}  // namespace tdnrbc
