// Numeric tolerances used by the audit and the CLI checks. Symbolic checks are
// exact and have no tolerance.
#pragma once

#include <string>

namespace ivcl {

struct Tolerances {
    double constraint = 1e-9;     // (1 - eps d) P = v^2/2, relative sup norm
    double mass = 1e-8;           // relative mass drift
    double nonlocal = 1e-9;       // auxiliary-P rhs against the nonlocal flux rhs
    double cross_scheme = 1e-4;   // spectral against fd4
    double burgers = 1e-6;        // pseudospectral Burgers against Cole-Hopf
    double ode_linear = 1e-6;     // Pearcey linear ODE residual
    double ode_nonlinear = 1e-5;  // nonlinear ODE residual for P_X / P
    double pearcey_origin = 1e-10;
};

// "default" or "strict" (every bound ten times tighter); throws on other names
Tolerances tolerance_profile(const std::string& name);
// the profile named by IVCL_TOLERANCE_PROFILE, default when unset
Tolerances active_tolerances();
std::string active_tolerance_profile();

}  // namespace ivcl
