#include "ivcl/pdesim.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace ivcl::sim {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

double max_abs(const Field& f) {
    double m = 0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

bool finite(const Field& f) {
    return std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); });
}

Field axpy(const Field& a, double s, const Field& b) {
    Field r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

}  // namespace

// ---- grid ----

struct SpectralGrid::Plans {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
};

SpectralGrid::SpectralGrid(int N, double L) : N_(N), L_(L), plans_(std::make_unique<Plans>()) {
    if (N < 16) throw std::invalid_argument("grid size must be at least 16");
    if (!(L > 0)) throw std::invalid_argument("period must be positive");
    plans_->real = fftw_alloc_real(std::size_t(N));
    plans_->spec = fftw_alloc_complex(std::size_t(N / 2 + 1));
    plans_->fwd = fftw_plan_dft_r2c_1d(N, plans_->real, plans_->spec, FFTW_ESTIMATE);
    plans_->bwd = fftw_plan_dft_c2r_1d(N, plans_->spec, plans_->real, FFTW_ESTIMATE);
}

SpectralGrid::~SpectralGrid() {
    fftw_destroy_plan(plans_->fwd);
    fftw_destroy_plan(plans_->bwd);
    fftw_free(plans_->real);
    fftw_free(plans_->spec);
}

Field SpectralGrid::xs() const {
    Field x(static_cast<std::size_t>(N_));
    for (int j = 0; j < N_; ++j) x[std::size_t(j)] = this->x(j);
    return x;
}

double SpectralGrid::wavenumber(int k) const { return 2 * kPi * k / L_; }

std::vector<cplx> SpectralGrid::forward(const Field& f) const {
    if (int(f.size()) != N_) throw std::invalid_argument("field size does not match the grid");
    std::copy(f.begin(), f.end(), plans_->real);
    fftw_execute(plans_->fwd);
    std::vector<cplx> c(std::size_t(N_ / 2 + 1));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = cplx(plans_->spec[k][0], plans_->spec[k][1]) / double(N_);
    return c;
}

Field SpectralGrid::backward(const std::vector<cplx>& c) const {
    for (std::size_t k = 0; k < c.size(); ++k) {
        plans_->spec[k][0] = c[k].real();
        plans_->spec[k][1] = c[k].imag();
    }
    fftw_execute(plans_->bwd);
    return Field(plans_->real, plans_->real + N_);
}

Field SpectralGrid::apply_symbol(const Field& f, const std::function<cplx(double)>& sym) const {
    auto c = forward(f);
    for (int k = 0; k <= N_ / 2; ++k) c[std::size_t(k)] *= sym(wavenumber(k));
    return backward(c);
}

Field SpectralGrid::dx(const Field& f) const {
    auto c = forward(f);
    for (int k = 0; k <= N_ / 2; ++k) c[std::size_t(k)] *= cplx(0, wavenumber(k));
    c[std::size_t(N_ / 2)] = 0;   // the Nyquist mode has no real derivative
    return backward(c);
}

Field SpectralGrid::dxx(const Field& f) const {
    return apply_symbol(f, [](double k) { return cplx(-k * k, 0); });
}

Field SpectralGrid::dealias(const Field& f) const {
    auto c = forward(f);
    for (int k = N_ / 3 + 1; k <= N_ / 2; ++k) c[std::size_t(k)] = 0;
    return backward(c);
}

std::string scheme_name(Scheme s) { return s == Scheme::Spectral ? "spectral" : "fd4"; }

Scheme parse_scheme(const std::string& s) {
    if (s == "spectral") return Scheme::Spectral;
    if (s == "fd4") return Scheme::FD4;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

// ---- data ----

Datum named_datum(const std::string& name) {
    Datum d;
    d.name = name;
    if (name == "v1") {
        d.constant = 2;
        d.modes = {{kPi / 12, 0, 1}};
    } else if (name == "v2") {
        d.constant = 2;
        d.modes = {{kPi / 6, 0, 1}};
    } else if (name == "v3") {
        d.modes = {{kPi / 12, 0, 1}};
    } else if (name == "burgers-single" || name == "burgers-gaussian" || name == "custom") {
    } else {
        throw std::invalid_argument("unknown datum '" + name + "'");
    }
    return d;
}

Field Datum::w0(const SpectralGrid& g) const {
    if (!cole_hopf()) throw std::invalid_argument("datum '" + name + "' has no Cole-Hopf potential");
    Field w(std::size_t(g.N()));
    const double L = g.L();
    if (name == "burgers-single") {
        double kappa = modes.empty() ? 2 * kPi / L : modes.front().kappa;
        for (int j = 0; j < g.N(); ++j) w[std::size_t(j)] = 1 + delta * std::cos(kappa * g.x(j));
    } else {
        double s = sigma > 0 ? sigma : L / 16;
        for (int j = 0; j < g.N(); ++j) {
            double acc = 0;
            for (int n = -3; n <= 3; ++n) {
                double y = g.x(j) - L / 2 + n * L;
                acc += std::exp(-y * y / (2 * s * s));
            }
            w[std::size_t(j)] = 1 + delta * acc;
        }
    }
    return w;
}

Field Datum::sample(const SpectralGrid& g, double eps) const {
    if (cole_hopf()) {
        Field w = w0(g), wx = g.dx(w);
        Field u(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) u[j] = eps * wx[j] / w[j];
        return u;
    }
    Field v(std::size_t(g.N()), constant);
    for (const auto& m : modes)
        for (int j = 0; j < g.N(); ++j)
            v[std::size_t(j)] += m.cos * std::cos(m.kappa * g.x(j)) + m.sin * std::sin(m.kappa * g.x(j));
    return v;
}

// ---- config ----

void validate(const SimConfig& c) {
    if (c.N < 16) throw std::invalid_argument("N must be at least 16");
    if (c.scheme == Scheme::Spectral && (c.N & (c.N - 1)) != 0)
        throw std::invalid_argument("spectral scheme needs N a power of two");
    if (!(c.eps > 0)) throw std::invalid_argument("eps must be positive");
    if (!(c.L > 0)) throw std::invalid_argument("L must be positive");
    if (!(c.t_end >= 0)) throw std::invalid_argument("t_end must be non-negative");
    if (!(c.dt > 0)) throw std::invalid_argument("dt must be positive");
    if (!(c.sample_every > 0)) throw std::invalid_argument("sample_every must be positive");
    if (c.datum.cole_hopf() && c.datum.name == "burgers-single" && c.datum.modes.empty()) return;
    for (const auto& m : c.datum.modes) {
        double n = m.kappa * c.L / (2 * kPi);
        if (std::abs(n - std::round(n)) > 1e-9)
            throw std::invalid_argument("datum is not periodic with period L");
    }
}

SimConfig config_from_json(const json& j) {
    static const std::set<std::string> keys = {"schema", "version", "L", "N", "eps", "t_end", "dt", "adaptive", "tol",
                                               "min_dt", "scheme", "sample_every", "keep_snapshots", "blowup_factor",
                                               "datum"};
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
    if (j.contains("schema") && j["schema"] != "ivcl.sim-config/1")
        throw std::invalid_argument("unknown schema version " + j["schema"].dump());
    SimConfig c;
    c.L = j.value("L", c.L);
    c.N = j.value("N", c.N);
    c.eps = j.value("eps", c.eps);
    c.t_end = j.value("t_end", c.t_end);
    c.dt = j.value("dt", c.dt);
    c.adaptive = j.value("adaptive", c.adaptive);
    c.tol = j.value("tol", c.tol);
    c.min_dt = j.value("min_dt", c.min_dt);
    c.scheme = parse_scheme(j.value("scheme", std::string("spectral")));
    c.sample_every = j.value("sample_every", c.sample_every);
    c.keep_snapshots = j.value("keep_snapshots", c.keep_snapshots);
    c.blowup_factor = j.value("blowup_factor", c.blowup_factor);
    if (j.contains("datum")) {
        const json& d = j["datum"];
        if (d.is_string()) {
            c.datum = named_datum(d.get<std::string>());
        } else {
            c.datum = named_datum(d.value("name", std::string("custom")));
            c.datum.constant = d.value("constant", c.datum.constant);
            c.datum.delta = d.value("delta", c.datum.delta);
            c.datum.sigma = d.value("sigma", c.datum.sigma);
            if (d.contains("modes")) {
                c.datum.modes.clear();
                for (const auto& m : d["modes"])
                    c.datum.modes.push_back({m.at("kappa").get<double>(), m.value("cos", 0.0), m.value("sin", 0.0)});
            }
        }
    }
    validate(c);
    return c;
}

json to_json(const SimConfig& c) {
    json d;
    d["name"] = c.datum.name;
    d["constant"] = c.datum.constant;
    json modes = json::array();
    for (const auto& m : c.datum.modes) modes.push_back({{"kappa", m.kappa}, {"cos", m.cos}, {"sin", m.sin}});
    d["modes"] = modes;
    if (c.datum.cole_hopf()) {
        d["delta"] = c.datum.delta;
        d["sigma"] = c.datum.sigma;
    }
    json j;
    j["schema"] = "ivcl.sim-config/1";
    j["version"] = kVersion;
    j["L"] = c.L;
    j["N"] = c.N;
    j["eps"] = c.eps;
    j["t_end"] = c.t_end;
    j["dt"] = c.dt;
    j["adaptive"] = c.adaptive;
    j["tol"] = c.tol;
    j["min_dt"] = c.min_dt;
    j["scheme"] = scheme_name(c.scheme);
    j["sample_every"] = c.sample_every;
    j["keep_snapshots"] = c.keep_snapshots;
    j["blowup_factor"] = c.blowup_factor;
    j["datum"] = d;
    return j;
}

Field SimState::m(const SpectralGrid& g, double eps) const {
    return axpy(v, -eps, g.dx(v));
}

// ---- the P system ----

struct PSystem::FD {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

PSystem::PSystem(const SimConfig& c) : cfg_(c), grid_(c.N, c.L) {
    validate(c);
    if (c.scheme == Scheme::FD4) {
        const int N = c.N;
        const double a = c.eps / (12 * grid_.h());
        std::vector<Eigen::Triplet<double>> t;
        for (int j = 0; j < N; ++j) {
            auto at = [&](int o, double w) { t.emplace_back(j, ((j + o) % N + N) % N, w); };
            at(0, 1.0);
            at(-2, -a);
            at(-1, 8 * a);
            at(1, -8 * a);
            at(2, a);
        }
        Eigen::SparseMatrix<double> A(N, N);
        A.setFromTriplets(t.begin(), t.end());
        A.makeCompressed();
        fd_ = std::make_unique<FD>();
        fd_->lu.analyzePattern(A);
        fd_->lu.factorize(A);
        if (fd_->lu.info() != Eigen::Success) throw std::runtime_error("fd4 factorization failed");
    }
}

PSystem::~PSystem() = default;

Field PSystem::derivative(const Field& f) const {
    if (cfg_.scheme == Scheme::Spectral) return grid_.dx(f);
    const int N = cfg_.N;
    const double s = 1 / (12 * grid_.h());
    Field d(f.size());
    for (int j = 0; j < N; ++j) {
        auto F = [&](int o) { return f[std::size_t(((j + o) % N + N) % N)]; };
        d[std::size_t(j)] = s * (F(-2) - 8 * F(-1) + 8 * F(1) - F(2));
    }
    return d;
}

Field PSystem::square_half(const Field& v) const {
    Field q(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) q[j] = 0.5 * v[j] * v[j];
    return cfg_.scheme == Scheme::Spectral ? grid_.dealias(q) : q;
}

Field PSystem::solve_P(const Field& v) const {
    Field q = square_half(v);
    if (cfg_.scheme == Scheme::Spectral) {
        const double eps = cfg_.eps;
        return grid_.apply_symbol(q, [eps](double k) { return 1.0 / cplx(1, -eps * k); });
    }
    Eigen::Map<const Eigen::VectorXd> b(q.data(), Eigen::Index(q.size()));
    Eigen::VectorXd x = fd_->lu.solve(b);
    return Field(x.data(), x.data() + x.size());
}

Field PSystem::rhs(const Field& v) const {
    Field P = solve_P(v), vx = derivative(v), Px = derivative(P);
    Field prod(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) prod[j] = v[j] * vx[j];
    if (cfg_.scheme == Scheme::Spectral) prod = grid_.dealias(prod);
    for (std::size_t j = 0; j < v.size(); ++j) prod[j] += Px[j];
    return prod;
}

// d_x (q + G * q) with G the periodic Green function of 1 - eps d_x; in Fourier
// space G * q has symbol 1 / (1 - i eps k), so q + G * q has 1 + 1 / (1 - i eps k)
Field PSystem::nonlocal_flux_rhs(const Field& v) const {
    if (cfg_.scheme != Scheme::Spectral) throw std::logic_error("nonlocal flux form is spectral only");
    Field q = square_half(v);
    const double eps = cfg_.eps;
    return grid_.apply_symbol(q, [eps](double k) { return cplx(0, k) * (1.0 + 1.0 / cplx(1, -eps * k)); });
}

Diagnostics PSystem::diagnose(double t, const Field& v) const {
    Diagnostics d;
    d.t = t;
    const double h = grid_.h();
    Field vx = derivative(v);
    double lo = v.front(), hi = v.front();
    for (std::size_t j = 0; j < v.size(); ++j) {
        d.mass += h * v[j];
        d.m_mass += h * (v[j] - cfg_.eps * vx[j]);
        d.energy += h * v[j] * v[j];
        d.max_slope = std::max(d.max_slope, std::abs(vx[j]));
        lo = std::min(lo, v[j]);
        hi = std::max(hi, v[j]);
    }
    d.osc_amp = hi - lo;
    Field q = square_half(v), P = solve_P(v), Px = derivative(P);
    double res = 0;
    for (std::size_t j = 0; j < v.size(); ++j) res = std::max(res, std::abs(P[j] - cfg_.eps * Px[j] - q[j]));
    double qn = max_abs(q);
    d.constraint = qn > 0 ? res / qn : res;
    return d;
}

// ---- time stepping ----

namespace {

Field rk4_step(const PSystem& s, const Field& v, double dt) {
    Field k1 = s.rhs(v);
    Field k2 = s.rhs(axpy(v, dt / 2, k1));
    Field k3 = s.rhs(axpy(v, dt / 2, k2));
    Field k4 = s.rhs(axpy(v, dt, k3));
    Field r(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) r[j] = v[j] + dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    return r;
}

}  // namespace

SimResult integrate(const SimConfig& c) {
    PSystem sys(c);
    const auto& g = sys.grid();
    SimResult out;
    Field v = c.datum.sample(g, c.eps);
    double t = 0;
    const double slope0 = sys.diagnose(0, v).max_slope;

    auto record = [&](double time) {
        out.diagnostics.push_back(sys.diagnose(time, v));
        if (c.keep_snapshots) out.snapshots.push_back({time, v, sys.solve_P(v)});
    };
    record(0);

    // the blow-up test and the step update share this
    auto accept = [&](Field next, double tn) -> bool {
        if (!finite(next)) {
            out.blowup = true;
            out.reason = "non-finite state";
            return false;
        }
        v = std::move(next);
        t = tn;
        out.last_valid_t = t;
        ++out.steps;
        if (slope0 > 0) {
            double s = max_abs(sys.derivative(v));
            if (s > c.blowup_factor * slope0) {
                out.blowup = true;
                out.reason = "max slope exceeded threshold";
                return false;
            }
        }
        return true;
    };

    const long nsamples = std::lround(std::floor(c.t_end / c.sample_every + 1e-9));
    double dt = c.dt;
    bool alive = true;
    for (long s = 1; s <= nsamples + 1 && alive; ++s) {
        double target = std::min(c.t_end, s * c.sample_every);
        if (s == nsamples + 1 && target - t <= 1e-12) break;
        while (alive && target - t > 1e-12) {
            if (!c.adaptive) {
                long n = std::max(1L, std::lround(std::ceil((target - t) / c.dt - 1e-9)));
                double h = (target - t) / double(n);
                for (long i = 0; i < n && alive; ++i) alive = accept(rk4_step(sys, v, h), i + 1 == n ? target : t + h);
                continue;
            }
            double h = std::min(dt, target - t);
            Field full = rk4_step(sys, v, h);
            Field half = rk4_step(sys, rk4_step(sys, v, h / 2), h / 2);
            double err = 0;
            for (std::size_t j = 0; j < v.size(); ++j) err = std::max(err, std::abs(full[j] - half[j]));
            if (!std::isfinite(err) || err > c.tol) {
                dt = h / 2;
                if (dt < c.min_dt) {
                    out.blowup = true;
                    out.reason = "step underflow";
                    alive = false;
                }
                continue;
            }
            alive = accept(std::move(half), h == target - t ? target : t + h);
            if (err < c.tol / 32) dt = std::min(2 * h, c.dt);
        }
        if (alive) record(t);
    }
    if (!alive && out.diagnostics.back().t < t && finite(v)) record(t);
    out.final_state = {t, v, sys.solve_P(v)};
    return out;
}

void write_csv(const SimResult& r, const SpectralGrid& g, const std::string& fields_path,
               const std::string& diag_path) {
    std::ofstream f(fields_path);
    if (!f) throw std::runtime_error("cannot write " + fields_path);
    f.precision(17);
    f << "t,x,v,P\n";
    std::vector<SimState> states = r.snapshots;
    if (states.empty()) states.push_back(r.final_state);
    for (const auto& s : states)
        for (int j = 0; j < g.N(); ++j) f << s.t << ',' << g.x(j) << ',' << s.v[std::size_t(j)] << ',' << s.P[std::size_t(j)] << '\n';
    std::ofstream d(diag_path);
    if (!d) throw std::runtime_error("cannot write " + diag_path);
    d.precision(17);
    d << "t,mass,m_mass,max_slope,osc_amp,energy,constraint\n";
    for (const auto& x : r.diagnostics)
        d << x.t << ',' << x.mass << ',' << x.m_mass << ',' << x.max_slope << ',' << x.osc_amp << ',' << x.energy << ','
          << x.constraint << '\n';
}

// ---- Burgers ----

Field burgers_reference(const Field& w0, const SpectralGrid& g, double eps, double t) {
    for (double w : w0)
        if (!(w > 0)) throw std::invalid_argument("Cole-Hopf potential must be positive");
    Field w = g.apply_symbol(w0, [&](double k) { return cplx(std::exp(-eps * k * k * t), 0); });
    Field wx = g.dx(w);
    Field u(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j] > 0)) throw std::runtime_error("heat flow lost positivity");
        u[j] = eps * wx[j] / w[j];
    }
    return u;
}

double burgers_single_mode(double x, double t, double eps, double kappa, double delta) {
    double a = delta * std::exp(-eps * kappa * kappa * t);
    return -eps * kappa * a * std::sin(kappa * x) / (1 + a * std::cos(kappa * x));
}

Field burgers_spectral(const Field& u0, const BurgersConfig& c) {
    SpectralGrid g(c.N, c.L);
    const int M = c.N / 2 + 1;
    std::vector<double> k(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) k[std::size_t(i)] = g.wavenumber(i);

    // N(u) = d_x(u^2), dealiased
    auto flux = [&](const std::vector<cplx>& uh) {
        Field u = g.backward(uh);
        for (double& x : u) x = x * x;
        auto q = g.forward(u);
        for (int i = 0; i < M; ++i) {
            q[std::size_t(i)] *= (i > c.N / 3 || i == c.N / 2) ? cplx(0) : cplx(0, k[std::size_t(i)]);
        }
        return q;
    };

    auto uh = g.forward(u0);
    const long n = std::max(1L, std::lround(std::ceil(c.t_end / c.dt - 1e-9)));
    const double h = c.t_end / double(n);
    std::vector<cplx> E(static_cast<std::size_t>(M)), E2(E);
    for (int i = 0; i < M; ++i) {
        E[std::size_t(i)] = std::exp(-c.eps * k[std::size_t(i)] * k[std::size_t(i)] * h);
        E2[std::size_t(i)] = std::exp(-c.eps * k[std::size_t(i)] * k[std::size_t(i)] * h / 2);
    }
    // integrating-factor RK4
    std::vector<cplx> tmp(E);
    for (long s = 0; s < n; ++s) {
        auto k1 = flux(uh);
        for (int i = 0; i < M; ++i) tmp[std::size_t(i)] = E2[std::size_t(i)] * (uh[std::size_t(i)] + h / 2 * k1[std::size_t(i)]);
        auto k2 = flux(tmp);
        for (int i = 0; i < M; ++i) tmp[std::size_t(i)] = E2[std::size_t(i)] * uh[std::size_t(i)] + h / 2 * k2[std::size_t(i)];
        auto k3 = flux(tmp);
        for (int i = 0; i < M; ++i) tmp[std::size_t(i)] = E[std::size_t(i)] * uh[std::size_t(i)] + h * E2[std::size_t(i)] * k3[std::size_t(i)];
        auto k4 = flux(tmp);
        for (int i = 0; i < M; ++i) {
            std::size_t j = std::size_t(i);
            uh[j] = E[j] * uh[j] + h / 6 * (E[j] * k1[j] + 2.0 * E2[j] * (k2[j] + k3[j]) + k4[j]);
        }
    }
    return g.backward(uh);
}

double burgers_line(const LineDatum& d, double eps, double x, double t) {
    if (!(t > 0)) return d.u0(x);
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    // stationary points of Phi solve u0(y) + (x - y) / (2t) = 0; Phi' -> -inf as y -> +inf
    // whenever u0 grows slower than y / (2t), which holds for the data used here
    auto dphi = [&](double y) { return d.u0(y) + (x - y) / (2 * t); };
    auto phi = [&](double y) { return d.F(y) - (x - y) * (x - y) / (4 * t); };
    double R = 1;
    while (!(dphi(x - R) > 0 && dphi(x + R) < 0)) {
        R *= 2;
        if (R > 1e8) throw std::runtime_error("no stationary point for the Cole-Hopf weight");
    }
    // locate every local max on a fine scan of [x - R, x + R]
    const int M = 4000;
    double best = -std::numeric_limits<double>::infinity(), lo = x + R, hi = x - R;
    for (int i = 0; i <= M; ++i) {
        double y = x - R + 2 * R * i / M;
        best = std::max(best, phi(y));
    }
    const double cut = 46 * eps;   // exp(-46) ~ 1e-20
    for (int i = 0; i <= M; ++i) {
        double y = x - R + 2 * R * i / M;
        if (phi(y) - best > -cut) {
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
    }
    double step = 2 * R / M;
    lo -= step;
    hi += step;
    while (phi(lo) - best > -cut) lo -= step;
    while (phi(hi) - best > -cut) hi += step;

    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    auto w = [&](double y) { return std::exp((phi(y) - best) / eps); };
    double den = GK::integrate(w, lo, hi, 15, 1e-13);
    double num = GK::integrate([&](double y) { return (y - x) / (2 * t) * w(y); }, lo, hi, 15, 1e-13);
    return num / den;
}

}  // namespace ivcl::sim
