#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nrbk.hpp"

namespace tdnrbc {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("atomic_write: short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("atomic_write: rename failed for " + path);
}

std::string zeros_csv(ZeroKind kind, int lmax) {
  std::ostringstream os;
  os << "l,j,re,im,residual\n";
  for (int l = 1; l <= lmax; ++l) {
    const PoleSet& set =
        kind == ZeroKind::KZeros ? k_zeros(l) : combined_zeros(l);
    for (std::size_t j = 0; j < set.poles.size(); ++j)
      os << l << ',' << (j + 1) << ',' << format_g17(set.poles[j].real()) << ','
         << format_g17(set.poles[j].imag()) << ','
         << format_g17(set.residuals[j]) << '\n';
  }
  return os.str();
}

std::string kernel_test_csv(double b, double c, const std::vector<int>& ls,
                            const std::vector<double>& ts) {
  std::ostringstream os;
  os << "l,t,e\n";
  for (int l : ls) {
    std::vector<double> errs = kernel_crosscheck(l, b, c, ts);
    for (std::size_t i = 0; i < ts.size(); ++i)
      os << l << ',' << format_g17(ts[i]) << ',' << format_g17(errs[i]) << '\n';
  }
  return os.str();
}

std::string snapshot_csv(const FieldSnapshot& snap, bool full_vector) {
  std::ostringstream os;
  os << (full_vector ? "x,y,ReDz,ReDx,ReDy,region\n" : "x,y,ReDz\n");
  for (std::size_t i = 0; i < snap.x.size(); ++i) {
    os << format_g17(snap.x[i]) << ',' << format_g17(snap.y[i]) << ','
       << format_g17(snap.Dz[i].real());
    if (full_vector)
      os << ',' << format_g17(snap.Dx[i].real()) << ','
         << format_g17(snap.Dy[i].real()) << ',' << snap.region[i];
    os << '\n';
  }
  return os.str();
}

std::string diagnostics_csv(const Diagnostics& diag) {
  std::ostringstream os;
  os << "t,S,interior_energy,shell_energy\n";
  for (std::size_t i = 0; i < diag.time.size(); ++i)
    os << format_g17(diag.time[i]) << ',' << format_g17(diag.shielding[i]) << ','
       << format_g17(diag.interior_energy[i]) << ','
       << format_g17(diag.shell_energy[i]) << '\n';
  return os.str();
}

std::string snapshot_filename(double time) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "t_%g.csv", time);
  return buf;
}

std::string manifest_text(const Scenario& sc, const SetupInfo& info,
                          const std::string& version) {
  std::ostringstream os;
  os << "version=" << version << '\n';
  os << "incident.type="
     << (sc.incident.type == IncidentWave::Type::Monochromatic ? "monochromatic"
                                                               : "pulse")
     << '\n';
  os << "incident.A=" << format_g17(sc.incident.amplitude) << '\n';
  os << "incident.k=" << format_g17(sc.incident.k) << '\n';
  if (sc.incident.type == IncidentWave::Type::Monochromatic)
    os << "incident.omega=" << format_g17(sc.incident.omega) << '\n';
  else {
    os << "incident.tc=" << format_g17(sc.incident.t_c) << '\n';
    os << "incident.q=" << format_g17(sc.incident.q) << '\n';
  }
  if (sc.cloak) {
    os << "cloak.omega_c=" << format_g17(sc.cloak->omega_c) << '\n';
    os << "cloak.gamma1=" << format_g17(sc.cloak->gamma1) << '\n';
    os << "cloak.gamma2=" << format_g17(sc.cloak->gamma2) << '\n';
    os << "cloak.R1=" << format_g17(sc.cloak->R1) << '\n';
    os << "cloak.R2=" << format_g17(sc.cloak->R2) << '\n';
  } else {
    os << "cloak.R1=0\ncloak.R2=0\n";
  }
  os << "disc.E=" << sc.E << '\n';
  os << "disc.N=" << sc.N << '\n';
  os << "disc.L=" << sc.L << '\n';
  os << "disc.b=" << format_g17(sc.b) << '\n';
  os << "disc.R3=" << format_g17(sc.R3) << '\n';
  os << "disc.dt=" << format_g17(sc.nm.dt) << '\n';
  os << "disc.gamma=" << format_g17(sc.nm.gamma) << '\n';
  os << "disc.beta=" << format_g17(sc.nm.beta) << '\n';
  os << "disc.t_end=" << format_g17(sc.t_end) << '\n';
  os << "diag.dt=" << format_g17(sc.diag_dt) << '\n';
  os << "snapshots=[";
  for (std::size_t i = 0; i < sc.snapshot_times.size(); ++i)
    os << (i ? "," : "") << format_g17(sc.snapshot_times[i]);
  os << "]\n";
  os << "slice.extent=" << format_g17(sc.slice.extent) << '\n';
  os << "slice.n=" << sc.slice.n << '\n';
  os << "slice.full=" << (sc.slice.full_vector ? 1 : 0) << '\n';
  os << "pole_checksum_k=" << info.pole_checksum_k << '\n';
  os << "pole_checksum_combined=" << info.pole_checksum_combined << '\n';
  os << "timing.poles_seconds=" << format_g17(info.poles_seconds) << '\n';
  os << "timing.assembly_seconds=" << format_g17(info.assembly_seconds) << '\n';
  return os.str();
}

}  // namespace tdnrbc
