#include "ivcl/tolerances.hpp"

#include <cstdlib>
#include <stdexcept>

namespace ivcl {

Tolerances tolerance_profile(const std::string& name) {
    Tolerances t;
    if (name == "default") return t;
    if (name != "strict") throw std::invalid_argument("unknown tolerance profile '" + name + "'");
    for (double* x : {&t.constraint, &t.mass, &t.nonlocal, &t.cross_scheme, &t.burgers, &t.ode_linear,
                      &t.ode_nonlinear, &t.pearcey_origin})
        *x /= 10;
    return t;
}

std::string active_tolerance_profile() {
    const char* s = std::getenv("IVCL_TOLERANCE_PROFILE");
    return s && *s ? s : "default";
}

Tolerances active_tolerances() { return tolerance_profile(active_tolerance_profile()); }

}  // namespace ivcl
