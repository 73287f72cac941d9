#pragma once

#include <string>
#include <vector>

#include "cloaksim.hpp"

namespace tdnrbc {

// %.17g formatting used by every CSV emitter.
std::string format_g17(double v);

// Write-to-temp-then-rename so readers never observe partial files.
void atomic_write(const std::string& path, const std::string& content);

// CSV "l,j,re,im,residual" over l = 1..lmax for one zero family.
std::string zeros_csv(ZeroKind kind, int lmax);

// CSV "l,t,e" of the kernel cross-check (Table-1 shape).
std::string kernel_test_csv(double b, double c, const std::vector<int>& ls,
                            const std::vector<double>& ts);

// CSV "x,y,ReDz" (optionally with the full vector columns).
std::string snapshot_csv(const FieldSnapshot& snap, bool full_vector);

// CSV "t,S,interior_energy,shell_energy".
std::string diagnostics_csv(const Diagnostics& diag);

// Flat key=value manifest echoing the resolved scenario.
std::string manifest_text(const Scenario& scenario, const SetupInfo& info,
                          const std::string& version);

// snapshot file name "t_<time>.csv" with a stable time format
std::string snapshot_filename(double time);

}  // namespace tdnrbc
