// Periodic solver for v_t = v v_x + P_x, (1 - eps d_x) P = v^2 / 2, which is the
// evolutionary form of v_t - eps v_xt = d_x(v^2 - eps v v_x), plus Burgers
// u_t = d_x(u^2 + eps u_x) references through Cole-Hopf.
#pragma once

#include "ivcl/serialize.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace ivcl::sim {

using Field = std::vector<double>;

// Real periodic grid x_j = j L / N with FFTW transforms.
class SpectralGrid {
public:
    SpectralGrid(int N, double L);
    ~SpectralGrid();
    SpectralGrid(const SpectralGrid&) = delete;
    SpectralGrid& operator=(const SpectralGrid&) = delete;

    int N() const { return N_; }
    double L() const { return L_; }
    double h() const { return L_ / N_; }
    double x(int j) const { return j * h(); }
    Field xs() const;
    double wavenumber(int k) const;   // physical wavenumber of the k-th r2c mode

    std::vector<std::complex<double>> forward(const Field& f) const;
    Field backward(const std::vector<std::complex<double>>& c) const;

    Field dx(const Field& f) const;
    Field dxx(const Field& f) const;
    // zero every mode with |k| > N/3
    Field dealias(const Field& f) const;
    // multiply each mode by sym(kappa)
    Field apply_symbol(const Field& f, const std::function<std::complex<double>(double)>& sym) const;

private:
    int N_;
    double L_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

enum class Scheme { Spectral, FD4 };
std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& s);

struct FourierMode {
    double kappa = 0;   // physical wavenumber
    double cos = 0, sin = 0;
};

// v = constant + sum (cos, sin) modes. The burgers-* data are given through the
// Cole-Hopf potential w0 > 0 and sample to u0 = eps (log w0)_x:
//   burgers-single    w0 = 1 + delta cos(kappa x), kappa = first mode or 2 pi / L
//   burgers-gaussian  w0 = 1 + delta * periodized exp(-(x - L/2)^2 / (2 sigma^2))
struct Datum {
    std::string name = "v1";   // v1, v2, v3, burgers-single, burgers-gaussian, custom
    double constant = 0;
    std::vector<FourierMode> modes;
    double delta = 0.1;
    double sigma = 0;          // 0 means L / 16
    bool cole_hopf() const { return name.rfind("burgers-", 0) == 0; }
    Field w0(const SpectralGrid& g) const;
    Field sample(const SpectralGrid& g, double eps = 1) const;
};

Datum named_datum(const std::string& name);

struct SimConfig {
    double L = 24;
    int N = 256;
    double eps = 1;
    double t_end = 12;
    double dt = 0.005;
    bool adaptive = false;
    double tol = 1e-9;          // per-step error for the adaptive mode
    double min_dt = 1e-10;
    Scheme scheme = Scheme::Spectral;
    Datum datum;
    double sample_every = 0.1;
    bool keep_snapshots = false;
    double blowup_factor = 50;   // max|v_x| over its initial value
};

void validate(const SimConfig& c);
SimConfig config_from_json(const json& j);
json to_json(const SimConfig& c);

struct SimState {
    double t = 0;
    Field v, P;
    Field m(const SpectralGrid& g, double eps) const;   // v - eps v_x
};

struct Diagnostics {
    double t = 0;
    double mass = 0, m_mass = 0, max_slope = 0, osc_amp = 0, energy = 0;
    double constraint = 0;   // |(1 - eps d) P - v^2/2|_inf / |v^2/2|_inf
};

// Right-hand sides for one configuration.
class PSystem {
public:
    explicit PSystem(const SimConfig& c);
    ~PSystem();
    const SpectralGrid& grid() const { return grid_; }
    const SimConfig& config() const { return cfg_; }
    Field solve_P(const Field& v) const;
    Field rhs(const Field& v) const;
    Field nonlocal_flux_rhs(const Field& v) const;
    Field derivative(const Field& f) const;   // with the scheme's derivative
    Diagnostics diagnose(double t, const Field& v) const;

private:
    SimConfig cfg_;
    SpectralGrid grid_;
    struct FD;
    std::unique_ptr<FD> fd_;
    Field square_half(const Field& v) const;
};

struct SimResult {
    std::vector<Diagnostics> diagnostics;
    std::vector<SimState> snapshots;
    SimState final_state;
    bool blowup = false;
    double last_valid_t = 0;
    std::string reason;
    int steps = 0;
};

SimResult integrate(const SimConfig& c);

void write_csv(const SimResult& r, const SpectralGrid& g, const std::string& fields_path,
               const std::string& diag_path);

// ---- Burgers u_t = 2 u u_x + eps u_xx ----

// periodic Cole-Hopf: u = eps d_x log w with w_t = eps w_xx solved exactly in Fourier space
Field burgers_reference(const Field& w0, const SpectralGrid& g, double eps, double t);
// closed form for w = 1 + delta exp(-eps kappa^2 t) cos(kappa x)
double burgers_single_mode(double x, double t, double eps, double kappa, double delta);

struct BurgersConfig {
    double L = 2 * 3.14159265358979323846;
    int N = 256;
    double eps = 0.1;
    double t_end = 1;
    double dt = 1e-3;
};
// pseudospectral, diffusion by integrating factor, RK4 for the flux
Field burgers_spectral(const Field& u0, const BurgersConfig& c);

// Cole-Hopf on the real line for data with potential F (F' = u0):
// u(x, t) = <(y - x) / (2t)> under the weight exp((F(y) - (x - y)^2 / (4t)) / eps)
struct LineDatum {
    std::function<double(double)> u0;
    std::function<double(double)> F;
};
double burgers_line(const LineDatum& d, double eps, double x, double t);

}  // namespace ivcl::sim
