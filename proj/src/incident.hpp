#pragma once

#include <memory>
#include <vector>

#include "sem1d.hpp"
#include "vsh.hpp"

namespace tdnrbc {

// z-polarized incident displacement field D^in = A f(x, t) z-hat with either
// the ramped monochromatic profile f = (1 - e^{-10 t}) cos(k x - w t) or the
// plane pulse f = Re{e^{i k (x - t)}} e^{-(x - t + t_c)^2 / q}.
struct IncidentWave {
  enum class Type { Monochromatic, Pulse } type = Type::Monochromatic;
  double amplitude = 1.0;
  double k = 40.0;
  double omega = 40.0;  // monochromatic only
  double t_c = 4.0;     // pulse only
  double q = 0.5;       // pulse only

  double value(double x, double t) const;    // f(x, t)
  double dx(double x, double t) const;       // df/dx
  double dt(double x, double t) const;       // df/dt
  double dtt(double x, double t) const;      // d2f/dt2
};

// Per-mode incident streams at the matching sphere r = R3: the solenoidal
// coefficients g_lm (Phi part) and h_lm (curl part) of D^in together with
// their radial and second time derivatives.
struct IncidentStreams {
  std::vector<cplx> g, dr_g, dtt_g;
  std::vector<cplx> h, dr_h, dtt_h;
};

class IncidentExpander {
 public:
  IncidentExpander(const IncidentWave& wave, double R3, int L);

  int L() const { return L_; }
  const IncidentWave& wave() const { return wave_; }

  // evaluate all streams at time t (packed over (l, m) as in VshCoeffs)
  void at(double t, IncidentStreams& out) const;

  // d/dt of the h and g streams (used for the lifting initial velocity)
  void time_derivative(double t, std::vector<cplx>& dt_g,
                       std::vector<cplx>& dt_h) const;

 private:
  // scalar Y-projections of {w(theta,phi) * cos(theta), w} for a scalar
  // sample field w, distributed into the h-type and g-type streams
  void project(const std::vector<double>& f_samples, std::vector<cplx>& h_like,
               std::vector<cplx>& g_like) const;

  IncidentWave wave_;
  double R3_;
  int L_;
  SphereGrid grid_;
  std::unique_ptr<VshBasis> basis_;
  std::vector<double> x_;         // x coordinate per grid point
  std::vector<double> cos_theta_;
};

}  // namespace tdnrbc
