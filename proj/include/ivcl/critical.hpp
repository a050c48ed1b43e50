// Local behaviour at a gradient catastrophe: the Pearcey integral, the linear
// and nonlinear ODEs in (X, T), a 0F2 series, catastrophe detection for
// hodograph data x + 2ut - f(u) = 0 and the rescaled critical profile.
#pragma once

#include "ivcl/serialize.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ivcl::crit {

struct PearceyOptions {
    double Z = 4;       // integrate over [-Z, Z]
    int panels = 64;    // composite 20-point Gauss-Legendre
    double box = 3;     // validated |X|, |T|
};

// P(X, T) = int exp(-(4z^4 - 2T z^2 + 2X z)) dz and its X-derivatives
struct PearceyValue {
    double P = 0, PX = 0, PXX = 0, PXXX = 0, PT = 0;
    bool validated = true;    // (X, T) inside the box and the tail bound below 1e-14
    double tail_bound = 0;
};

PearceyValue pearcey(double X, double T, const PearceyOptions& opt = {});
double pearcey_origin();   // 2^{-3/2} Gamma(1/4)

struct Jet3 {
    double w = 0, wX = 0, wXX = 0, wXXX = 0;
};
struct Jet2 {
    double U = 0, UX = 0, UXX = 0;
};

// |w_XXX - T w_X - X w| / max(|w_XXX|, |T w_X|, |X w|, |w|). The |w| floor keeps
// the measure meaningful at X = 0, where the odd terms vanish together.
double linear_ode_residual(const Jet3& w, double X, double T);
// the same for w_XXX = (X + T) w
double combined_ode_residual(const Jet3& w, double X, double T);
// |U_XX + 3 U U_X + U^3 - U T - X| / max(term magnitudes, 1)
double nonlinear_ode_residual(const Jet2& U, double X, double T);

Jet3 pearcey_jet(double X, double T, const PearceyOptions& opt = {});
// U = P_X / P and two X-derivatives
Jet2 pearcey_log_derivative(double X, double T, const PearceyOptions& opt = {});

// sum_n z^n / ((a)_n (b)_n n!) for a, b > 0
double hyper0F2(double a, double b, double z);
double pochhammer(double a, int n);

// the three displayed basis functions in s = X + T:
//   0F2([1/2,3/4], s^4/64), s 0F2([3/4,5/4], s^4/64), s^2 0F2([5/4,3/2], s^4/64)
// with X-derivatives by termwise differentiation
Jet3 general_solution_basis(int i, double X, double T);

struct AuditRow {
    std::string function;
    double linear_residual = 0;     // against w_XXX - T w_X = X w
    double combined_residual = 0;   // against w_XXX = (X + T) w
};
// max residuals over the grid [-box, box]^2 with n points per side
std::vector<AuditRow> audit_general_solution(double box = 3, int n = 13);
json to_json(const std::vector<AuditRow>& rows);

// ---- catastrophe ----

struct Driver {
    std::function<double(double)> f, f1, f2, f3;
};

struct CatastrophePoint {
    double x0 = 0, t0 = 0, u0 = 0, f3 = 0;
};

// f''(u0) = 0 with f'''(u0) > 0; t0 = f'(u0)/2, x0 = f(u0) - 2 u0 t0
CatastrophePoint find_catastrophe(const Driver& f, double lo, double hi);

struct CriticalScales {
    double s1 = 0, s2 = 0, s3 = 0;
    static constexpr int sigma = 3, beta = 2;
    static constexpr double q = 0.25;
};
CriticalScales critical_scales(double a0, double f3);

struct ProfileValue {
    double u = 0, X = 0, T = 0;
    bool in_box = true;
};
ProfileValue critical_profile(const CatastrophePoint& cp, double a0, double eps, double x, double t,
                              const PearceyOptions& opt = {});

// ---- universality ----

struct UniversalityConfig {
    double c = 1;                                  // f(u) = (u - b)^3 + c (u - b)
    double shift = 0;                              // b
    std::vector<double> eps = {0.04, 0.02, 0.01};
    double box = 2;                                // rescaled window [-box, box]^2
    int n = 9;                                     // points per side
};

struct UniversalityRow {
    double eps = 0;
    double deviation = 0;   // max |u_num - u_profile|
    double amplitude = 0;   // max |u_num - u0|
};

struct UniversalityResult {
    CatastrophePoint cp;
    std::vector<UniversalityRow> rows;
    double exponent = 0;   // least-squares slope of log amplitude against log eps
    bool monotone = false;
};

UniversalityResult universality_experiment(const UniversalityConfig& c = {});
json to_json(const UniversalityResult& r);

}  // namespace ivcl::crit
