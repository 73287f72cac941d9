#include "cloaksim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "io.hpp"

namespace tdnrbc {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

void Scenario::validate() const {
  nm.validate();
  if (L < 1) throw std::invalid_argument("Scenario: L must be >= 1");
  if (!(t_end > 0.0)) throw std::invalid_argument("Scenario: t_end must be > 0");
  if (!(incident.k > 0.0) || (incident.type == IncidentWave::Type::Monochromatic &&
                              !(incident.omega > 0.0)))
    throw std::invalid_argument("Scenario: incident frequencies must be positive");
  if (!(R3 > 0.0 && R3 < b)) throw std::invalid_argument("Scenario: need 0 < R3 < b");
  if (cloak) {
    cloak->validate();
    if (!(cloak->R2 < R3))
      throw std::invalid_argument("Scenario: cloak must sit inside R3");
  }
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end)
      throw std::invalid_argument("Scenario: snapshot time outside [0, t_end]");
  if (slice.n < 2 || !(slice.extent > 0.0))
    throw std::invalid_argument("Scenario: bad slice grid");
  if (!(diag_dt > 0.0)) throw std::invalid_argument("Scenario: diag_dt must be > 0");
}

Simulation::Simulation(const Scenario& scenario) : scenario_(scenario) {
  scenario_.validate();
  if (scenario_.threads <= 0) scenario_.threads = default_threads();
}

void Simulation::prepare() {
  if (prepared_) return;
  const Scenario& sc = scenario_;
  eps_t_ = sc.cloak ? sc.cloak->epsilon_t() : 1.0;

  double t0 = now_seconds();
  // pole tables for every degree in use, plus their checksums
  std::uint64_t ck = 1469598103934665603ull, cc = ck;
  for (int l = 1; l <= sc.L; ++l) {
    const PoleSet& kz = k_zeros(l);
    const PoleSet& cz = combined_zeros(l);
    std::ostringstream os;
    for (std::size_t j = 0; j < kz.poles.size(); ++j)
      os << format_g17(kz.poles[j].real()) << ',' << format_g17(kz.poles[j].imag())
         << '\n';
    ck ^= fnv1a(os.str());
    std::ostringstream os2;
    for (std::size_t j = 0; j < cz.poles.size(); ++j)
      os2 << format_g17(cz.poles[j].real()) << ','
          << format_g17(cz.poles[j].imag()) << '\n';
    cc ^= fnv1a(os2.str());
  }
  info_.pole_checksum_k = ck;
  info_.pole_checksum_combined = cc;
  info_.poles_seconds = now_seconds() - t0;

  t0 = now_seconds();
  std::optional<std::pair<double, double>> radii;
  if (sc.cloak) radii = std::make_pair(sc.cloak->R1, sc.cloak->R2);
  mesh_ = make_mesh(sc.E, sc.N, sc.b, sc.R3, radii);
  expander_ = std::make_unique<IncidentExpander>(sc.incident, sc.R3, sc.L);

  blocks_.resize(sc.L);
  parallel_for(sc.L, scenario_.threads, [&](std::size_t bi) {
    int l = static_cast<int>(bi) + 1;
    DegreeBlock& blk = blocks_[bi];
    blk.l = l;
    blk.sys = assemble(l, mesh_, sc.cloak, sc.c, sc.nm);
    int nm_modes = 2 * l + 1;
    blk.v_states.reserve(nm_modes);
    blk.u_states.reserve(nm_modes);
    for (int m = -l; m <= l; ++m) {
      blk.v_states.push_back(make_mode_state(blk.sys, 0));
      blk.u_states.push_back(make_mode_state(blk.sys, 1));
    }
    blk.v_active.assign(nm_modes, false);
    blk.u_active.assign(nm_modes, false);
  });

  // initial data from the lifting at t = 0
  IncidentStreams s0;
  expander_->at(0.0, s0);
  std::vector<cplx> dt_g, dt_h;
  expander_->time_derivative(0.0, dt_g, dt_h);
  for (DegreeBlock& blk : blocks_) {
    int l = blk.l;
    for (int m = -l; m <= l; ++m) {
      std::size_t k = VshCoeffs::idx(l, m);
      int mi = m + l;
      JumpData v0{s0.h[k], s0.dr_h[k], s0.dtt_h[k]};
      initial_conditions(blk.sys, blk.v_states[mi], v0, dt_h[k]);
      JumpData u0{eps_t_ * s0.g[k], eps_t_ * s0.dr_g[k], eps_t_ * s0.dtt_g[k]};
      initial_conditions(blk.sys, blk.u_states[mi], u0, eps_t_ * dt_g[k]);
      if (v0.h != cplx(0.0) || v0.dr_h != cplx(0.0) || v0.ddt_h != cplx(0.0) ||
          dt_h[k] != cplx(0.0))
        blk.v_active[mi] = true;
      if (u0.h != cplx(0.0) || u0.dr_h != cplx(0.0) || u0.ddt_h != cplx(0.0) ||
          dt_g[k] != cplx(0.0))
        blk.u_active[mi] = true;
    }
  }
  info_.assembly_seconds = now_seconds() - t0;
  expander_->at(0.0, streams_now_);
  prepared_ = true;
}

void Simulation::step_block(DegreeBlock& blk,
                            const std::vector<IncidentStreams>& chunk,
                            long step0) {
  const int l = blk.l;
  std::vector<cplx> F(mesh_.n_dof);
  for (std::size_t kstep = 0; kstep < chunk.size(); ++kstep) {
    (void)step0;
    const IncidentStreams& s = chunk[kstep];
    for (int m = -l; m <= l; ++m) {
      std::size_t k = VshCoeffs::idx(l, m);
      int mi = m + l;
      // v sequence: data h, constitutive kernel theta_1
      JumpData dv{s.h[k], s.dr_h[k], s.dtt_h[k]};
      bool data_nonzero = dv.h != cplx(0.0) || dv.dr_h != cplx(0.0) ||
                          dv.ddt_h != cplx(0.0);
      if (blk.v_active[mi] || data_nonzero) {
        blk.v_active[mi] = true;
        lift_and_rhs(blk.sys, dv, F);
        drude_load(blk.sys, blk.v_states[mi], F);
        newmark_step(blk.sys, blk.v_states[mi], F);
        advance_drude(blk.sys, blk.v_states[mi]);
      }
      // u~ sequence: data eps g, constitutive kernel theta_2
      JumpData du{eps_t_ * s.g[k], eps_t_ * s.dr_g[k], eps_t_ * s.dtt_g[k]};
      data_nonzero = du.h != cplx(0.0) || du.dr_h != cplx(0.0) ||
                     du.ddt_h != cplx(0.0);
      if (blk.u_active[mi] || data_nonzero) {
        blk.u_active[mi] = true;
        lift_and_rhs(blk.sys, du, F);
        drude_load(blk.sys, blk.u_states[mi], F);
        newmark_step(blk.sys, blk.u_states[mi], F);
        advance_drude(blk.sys, blk.u_states[mi]);
      }
    }
  }
}

void Simulation::field_at(double x, double y, cplx out[3]) const {
  double r = std::hypot(x, y);
  if (r > scenario_.b)
    throw std::domain_error("field_at: point outside the computational ball");
  // evaluate at the equator; guard the tiny-r singular frame
  r = std::max(r, 1e-9 * scenario_.b);
  double phi = std::atan2(y, x);
  double theta = 0.5 * kPi;

  const int L = scenario_.L;
  RadialModeValues modes;
  modes.L = L;
  modes.u.assign(VshCoeffs::packed_size(L), cplx(0.0));
  modes.v.assign(VshCoeffs::packed_size(L), cplx(0.0));
  modes.dv.assign(VshCoeffs::packed_size(L), cplx(0.0));

  int e = mesh_.element_of(r);
  double a = mesh_.elem_left(e), b2 = mesh_.elem_right(e);
  double xi = 2.0 * (r - a) / (b2 - a) - 1.0;
  std::vector<double> vals, ders;
  lagrange_eval(mesh_.gll, mesh_.bary, xi, vals, ders);
  double dscale = 2.0 / (b2 - a);

  bool in_shell = r > mesh_.R3;
  double psi = in_shell ? (scenario_.b - r) / (scenario_.b - mesh_.R3) : 0.0;
  double dpsi = in_shell ? -1.0 / (scenario_.b - mesh_.R3) : 0.0;
  // region factor undoing the variable substitution u~ = eps u
  double inv_eps = 1.0;
  if (scenario_.cloak) {
    if (r < scenario_.cloak->R1 || r >= scenario_.cloak->R2)
      inv_eps = 1.0 / eps_t_;
  }

  const IncidentStreams& snow = streams_now_;

  for (const DegreeBlock& blk : blocks_) {
    int l = blk.l;
    int g0 = mesh_.global_index(e, 0);
    for (int m = -l; m <= l; ++m) {
      std::size_t k = VshCoeffs::idx(l, m);
      int mi = m + l;
      cplx v = 0.0, dvr = 0.0, ut = 0.0;
      if (blk.v_active[mi]) {
        const cplx* V = blk.v_states[mi].V.data() + g0;
        for (int j = 0; j <= mesh_.N; ++j) {
          v += vals[j] * V[j];
          dvr += ders[j] * V[j];
        }
        dvr *= dscale;
      }
      if (blk.u_active[mi]) {
        const cplx* U = blk.u_states[mi].V.data() + g0;
        for (int j = 0; j <= mesh_.N; ++j) ut += vals[j] * U[j];
      }
      if (in_shell) {
        v -= snow.h[k] * psi;
        dvr -= snow.h[k] * dpsi;
        ut -= eps_t_ * snow.g[k] * psi;
      }
      modes.v[k] = v;
      modes.dv[k] = dvr;
      modes.u[k] = ut * inv_eps;
    }
  }
  reconstruct(modes, r, theta, phi, out);
  if (in_shell) {
    // report the total field: add the incident wave back in the shell
    double f = scenario_.incident.amplitude * scenario_.incident.value(x, time_);
    out[2] += f;
  }
}

void Simulation::diagnostics_row(Diagnostics& diag) {
  const Scenario& sc = scenario_;
  diag.time.push_back(time_);
  // interior probe: polar grid inside r < 0.9 R1 (or 0.5 R3 without cloak)
  double r_in = sc.cloak ? 0.9 * sc.cloak->R1 : 0.5 * sc.R3;
  double smax = 0.0, e_in = 0.0, e_sh = 0.0;
  int n_in = 0, n_sh = 0;
  const int n_r = 6, n_phi = 16;
  for (int i = 1; i <= n_r; ++i)
    for (int j = 0; j < n_phi; ++j) {
      double r = r_in * i / n_r;
      double phi = 2.0 * kPi * j / n_phi;
      cplx d[3];
      field_at(r * std::cos(phi), r * std::sin(phi), d);
      double dz = std::abs(d[2]);
      smax = std::max(smax, dz);
      e_in += std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
      ++n_in;
    }
  for (int i = 1; i <= n_r; ++i)
    for (int j = 0; j < n_phi; ++j) {
      double r = sc.R3 + (sc.b - sc.R3) * (i - 0.5) / n_r;
      double phi = 2.0 * kPi * j / n_phi;
      cplx d[3];
      field_at(r * std::cos(phi), r * std::sin(phi), d);
      e_sh += std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]);
      ++n_sh;
    }
  diag.shielding.push_back(smax / sc.incident.amplitude);
  diag.interior_energy.push_back(e_in / n_in);
  diag.shell_energy.push_back(e_sh / n_sh);
}

FieldSnapshot Simulation::take_snapshot() const {
  const Scenario& sc = scenario_;
  FieldSnapshot snap;
  snap.time = time_;
  snap.n = sc.slice.n;
  snap.extent = sc.slice.extent;
  int n = sc.slice.n;
  // gather included points first (deterministic row-major order)
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double x = -sc.slice.extent + 2.0 * sc.slice.extent * ix / (n - 1);
      double y = -sc.slice.extent + 2.0 * sc.slice.extent * iy / (n - 1);
      if (std::hypot(x, y) <= sc.b) pts.emplace_back(x, y);
    }
  std::size_t total = pts.size();
  snap.x.resize(total);
  snap.y.resize(total);
  snap.region.resize(total);
  snap.Dx.resize(total);
  snap.Dy.resize(total);
  snap.Dz.resize(total);
  parallel_for(total, sc.threads, [&](std::size_t i) {
    double x = pts[i].first, y = pts[i].second;
    double r = std::hypot(x, y);
    cplx d[3];
    field_at(x, y, d);
    snap.x[i] = x;
    snap.y[i] = y;
    int region = 2;
    if (sc.cloak && r < sc.cloak->R1)
      region = 0;
    else if (sc.cloak && r < sc.cloak->R2)
      region = 1;
    else if (r > sc.R3)
      region = 3;
    snap.region[i] = region;
    snap.Dx[i] = d[0];
    snap.Dy[i] = d[1];
    snap.Dz[i] = d[2];
  });
  return snap;
}

RunResult Simulation::run() {
  prepare();
  const Scenario& sc = scenario_;
  const double dt = sc.nm.dt;
  long total_steps = std::lround(sc.t_end / dt);

  // event step indices: snapshots, diagnostics cadence, final time
  std::set<long> events;
  for (double t : sc.snapshot_times) events.insert(std::lround(t / dt));
  for (double t = 0.0; t <= sc.t_end + 1e-12; t += sc.diag_dt)
    events.insert(std::lround(t / dt));
  events.insert(total_steps);
  std::set<long> snapshot_steps;
  for (double t : sc.snapshot_times) snapshot_steps.insert(std::lround(t / dt));

  RunResult result;
  diagnostics_row(result.diagnostics);
  if (snapshot_steps.count(0)) result.snapshots.push_back(take_snapshot());

  const long max_chunk = 64;
  std::vector<IncidentStreams> chunk;
  long prev = 0;
  for (long event : events) {
    if (event <= prev) continue;
    long pos = prev;
    while (pos < event) {
      long k = std::min(max_chunk, event - pos);
      chunk.resize(k);
      for (long j = 0; j < k; ++j) expander_->at((pos + j + 1) * dt, chunk[j]);
      parallel_for(blocks_.size(), sc.threads, [&](std::size_t bi) {
        step_block(blocks_[bi], chunk, pos);
      });
      pos += k;
      step_ = pos;
      time_ = pos * dt;
    }
    expander_->at(time_, streams_now_);
    // instability detector
    double sup = 0.0;
    int bad_l = -1;
    for (const DegreeBlock& blk : blocks_) {
      for (const ModeState& st : blk.v_states)
        for (const cplx& v : st.V) sup = std::max(sup, std::abs(v));
      for (const ModeState& st : blk.u_states)
        for (const cplx& v : st.V) sup = std::max(sup, std::abs(v));
      if (sup > 1e6 * sc.incident.amplitude && bad_l < 0) bad_l = blk.l;
    }
    max_norm_ = std::max(max_norm_, sup);
    if (bad_l >= 0)
      throw std::runtime_error("Simulation: instability detected at degree l = " +
                               std::to_string(bad_l));
    diagnostics_row(result.diagnostics);
    if (snapshot_steps.count(event))
      result.snapshots.push_back(take_snapshot());
    prev = event;
  }
  result.final_shielding = result.diagnostics.shielding.back();
  result.max_mode_norm = max_norm_;
  return result;
}

RunResult run(const Scenario& scenario) {
  Simulation sim(scenario);
  sim.prepare();
  return sim.run();
}

}  // namespace tdnrbc
