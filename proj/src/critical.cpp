#include "ivcl/critical.hpp"

#include "ivcl/pdesim.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ivcl::crit {

PearceyValue pearcey(double X, double T, const PearceyOptions& opt) {
    using G = boost::math::quadrature::gauss<double, 20>;
    PearceyValue r;
    const double Z = opt.Z;
    r.tail_bound = 2 * Z * std::exp(-4 * Z * Z * Z * Z + 2 * std::abs(T) * Z * Z + 2 * std::abs(X) * Z);
    r.validated = std::abs(X) <= opt.box && std::abs(T) <= opt.box && r.tail_bound < 1e-14;
    const double h = 2 * Z / opt.panels;
    for (int p = 0; p < opt.panels; ++p) {
        double a = -Z + p * h, b = a + h;
        // accumulate all moments on one set of nodes
        double m[5] = {0, 0, 0, 0, 0};
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        auto add = [&](double z, double wt) {
            double e = wt * std::exp(-(4 * z * z * z * z - 2 * T * z * z + 2 * X * z));
            double y = -2 * z;
            m[0] += e;
            m[1] += e * y;
            m[2] += e * y * y;
            m[3] += e * y * y * y;
            m[4] += e * z * z;
        };
        double mid = (a + b) / 2, half = (b - a) / 2;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) {
                add(mid, w[i]);
            } else {
                add(mid + half * x[i], w[i]);
                add(mid - half * x[i], w[i]);
            }
        }
        r.P += half * m[0];
        r.PX += half * m[1];
        r.PXX += half * m[2];
        r.PXXX += half * m[3];
        r.PT += 2 * half * m[4];
    }
    return r;
}

// int exp(-4 z^4) dz = 2 * Gamma(5/4) / 4^{1/4} = 2^{-3/2} Gamma(1/4)
double pearcey_origin() { return std::tgamma(0.25) / std::pow(2.0, 1.5); }

namespace {

double rel(double res, std::initializer_list<double> terms) {
    double s = 0;
    for (double t : terms) s = std::max(s, std::abs(t));
    if (s == 0) return std::abs(res) == 0 ? 0 : std::numeric_limits<double>::infinity();
    return std::abs(res) / s;
}

}  // namespace

double linear_ode_residual(const Jet3& w, double X, double T) {
    return rel(w.wXXX - T * w.wX - X * w.w, {w.wXXX, T * w.wX, X * w.w, w.w});
}

double combined_ode_residual(const Jet3& w, double X, double T) {
    return rel(w.wXXX - (X + T) * w.w, {w.wXXX, (X + T) * w.w, w.w});
}

double nonlinear_ode_residual(const Jet2& u, double X, double T) {
    double a = u.UXX, b = 3 * u.U * u.UX, c = u.U * u.U * u.U, d = u.U * T;
    return rel(a + b + c - d - X, {a, b, c, d, X, 1.0});
}

Jet3 pearcey_jet(double X, double T, const PearceyOptions& opt) {
    auto p = pearcey(X, T, opt);
    return {p.P, p.PX, p.PXX, p.PXXX};
}

Jet2 pearcey_log_derivative(double X, double T, const PearceyOptions& opt) {
    auto p = pearcey(X, T, opt);
    double U = p.PX / p.P, a = p.PXX / p.P, b = p.PXXX / p.P;
    return {U, a - U * U, b - 3 * U * a + 2 * U * U * U};
}

double pochhammer(double a, int n) {
    double r = 1;
    for (int k = 0; k < n; ++k) r *= a + k;
    return r;
}

double hyper0F2(double a, double b, double z) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("0F2 needs positive parameters");
    double term = 1, sum = 1;
    for (int n = 0; n < 100000; ++n) {
        term *= z / ((a + n) * (b + n) * (n + 1));
        sum += term;
        // once the ratio is below 1/2 the tail is bounded by the next term
        double ratio = std::abs(z) / ((a + n + 1) * (b + n + 1) * (n + 2));
        if (ratio < 0.5 && std::abs(term) * ratio <= 1e-16 * std::abs(sum)) break;
    }
    return sum;
}

Jet3 general_solution_basis(int i, double X, double T) {
    static const double ab[3][2] = {{0.5, 0.75}, {0.75, 1.25}, {1.25, 1.5}};
    if (i < 0 || i > 2) throw std::invalid_argument("basis index must be 0, 1 or 2");
    const double a = ab[i][0], b = ab[i][1], s = X + T;
    Jet3 r;
    double coef = 1;   // 1 / (64^n (a)_n (b)_n n!)
    for (int n = 0; n < 400; ++n) {
        if (n > 0) coef /= 64 * (a + n - 1) * (b + n - 1) * n;
        const int m = 4 * n + i;
        double d[4];
        for (int k = 0; k < 4; ++k) {
            if (m < k) {
                d[k] = 0;
                continue;
            }
            double f = 1;
            for (int j = 0; j < k; ++j) f *= m - j;
            d[k] = coef * f * std::pow(s, m - k);
        }
        r.w += d[0];
        r.wX += d[1];
        r.wXX += d[2];
        r.wXXX += d[3];
        if (n > 2 && std::abs(d[0]) + std::abs(d[3]) <= 1e-18 * (std::abs(r.w) + std::abs(r.wXXX))) break;
    }
    return r;
}

std::vector<AuditRow> audit_general_solution(double box, int n) {
    std::vector<AuditRow> rows;
    static const char* names[3] = {"0F2([1/2,3/4], s^4/64)", "s 0F2([3/4,5/4], s^4/64)", "s^2 0F2([5/4,3/2], s^4/64)"};
    auto scan = [&](const std::string& name, const std::function<Jet3(double, double)>& w) {
        AuditRow r{name, 0, 0};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double X = -box + 2 * box * a / (n - 1), T = -box + 2 * box * b / (n - 1);
                Jet3 j = w(X, T);
                r.linear_residual = std::max(r.linear_residual, linear_ode_residual(j, X, T));
                r.combined_residual = std::max(r.combined_residual, combined_ode_residual(j, X, T));
            }
        rows.push_back(r);
    };
    for (int i = 0; i < 3; ++i) scan(names[i], [i](double X, double T) { return general_solution_basis(i, X, T); });
    scan("zero", [](double, double) { return Jet3{}; });
    scan("pearcey", [](double X, double T) { return pearcey_jet(X, T); });
    return rows;
}

json to_json(const std::vector<AuditRow>& rows) {
    json a = json::array();
    for (const auto& r : rows)
        a.push_back({{"function", r.function}, {"linear_residual", r.linear_residual}, {"combined_residual", r.combined_residual}});
    return a;
}

CatastrophePoint find_catastrophe(const Driver& f, double lo, double hi) {
    double a = f.f2(lo), b = f.f2(hi);
    if (a == 0 || b == 0) {
        double u = a == 0 ? lo : hi;
        lo = hi = u;
    } else if ((a < 0) == (b < 0)) {
        throw std::invalid_argument("f'' has no sign change on the search interval");
    }
    double u0 = lo;
    if (lo != hi) {
        std::uintmax_t it = 200;
        auto r = boost::math::tools::toms748_solve(f.f2, lo, hi, a, b, boost::math::tools::eps_tolerance<double>(52), it);
        u0 = (r.first + r.second) / 2;
    }
    CatastrophePoint cp;
    cp.u0 = u0;
    cp.f3 = f.f3(u0);
    if (!(cp.f3 > 0)) throw std::invalid_argument("f''' <= 0 at the catastrophe: not generic");
    cp.t0 = f.f1(u0) / 2;
    cp.x0 = f.f(u0) - 2 * u0 * cp.t0;
    return cp;
}

CriticalScales critical_scales(double a0, double f3) {
    if (!(a0 > 0) || !(f3 > 0)) throw std::invalid_argument("scales need a0 > 0 and f''' > 0");
    CriticalScales s;
    s.s1 = std::pow(a0 * a0 * a0 * f3 / 6, 0.25);
    s.s2 = std::sqrt(a0 * f3 / 24);
    s.s3 = std::pow(6 * a0 / f3, 0.25);
    return s;
}

ProfileValue critical_profile(const CatastrophePoint& cp, double a0, double eps, double x, double t,
                              const PearceyOptions& opt) {
    ProfileValue r;
    r.X = std::pow(6 / (a0 * a0 * a0 * cp.f3), 0.25) * (x - cp.x0 + 2 * cp.u0 * (t - cp.t0)) / std::pow(eps, 0.75);
    r.T = std::sqrt(24 / (a0 * cp.f3)) * (t - cp.t0) / std::sqrt(eps);
    r.in_box = std::abs(r.X) <= opt.box && std::abs(r.T) <= opt.box;
    auto p = pearcey(r.X, r.T, opt);
    r.u = cp.u0 + std::pow(6 * a0 / cp.f3, 0.25) * std::pow(eps, 0.25) * p.PX / p.P;
    return r;
}

UniversalityResult universality_experiment(const UniversalityConfig& c) {
    if (!(c.c > 0)) throw std::invalid_argument("f = (u-b)^3 + c (u-b) needs c > 0 for monotone data");
    const double cc = c.c, b = c.shift;
    Driver f{[cc, b](double u) { return (u - b) * (u - b) * (u - b) + cc * (u - b); },
             [cc, b](double u) { return 3 * (u - b) * (u - b) + cc; }, [b](double u) { return 6 * (u - b); },
             [](double) { return 6.0; }};
    UniversalityResult out;
    out.cp = find_catastrophe(f, b - 1, b + 1);

    // t = 0 hodograph x - f(u) = 0: u0 = b + g(y) with g the inverse of u^3 + c u, and
    // F(y) = int_0^y u0 = b y + g y - g^4/4 - c g^2/2
    auto g = [cc](double y) {
        double d = std::sqrt(y * y / 4 + cc * cc * cc / 27);
        double u = std::cbrt(y / 2 + d) + std::cbrt(y / 2 - d);
        for (int i = 0; i < 3; ++i) u -= (u * u * u + cc * u - y) / (3 * u * u + cc);
        return u;
    };
    sim::LineDatum d{[g, b](double y) { return b + g(y); }, [g, cc, b](double y) {
                         double u = g(y);
                         return b * y + u * y - u * u * u * u / 4 - cc * u * u / 2;
                     }};

    const double a0 = 1;
    const CriticalScales s = critical_scales(a0, out.cp.f3);
    for (double eps : c.eps) {
        UniversalityRow row{eps, 0, 0};
        for (int i = 0; i < c.n; ++i)
            for (int j = 0; j < c.n; ++j) {
                double X = -c.box + 2 * c.box * i / (c.n - 1), T = -c.box + 2 * c.box * j / (c.n - 1);
                double t = out.cp.t0 + s.s2 * std::sqrt(eps) * T;
                double x = out.cp.x0 - 2 * out.cp.u0 * (t - out.cp.t0) + s.s1 * std::pow(eps, 0.75) * X;
                if (!(t > 0)) throw std::invalid_argument("rescaled window reaches t <= 0; shrink the box");
                double u = sim::burgers_line(d, a0 * eps, x, t);
                double p = critical_profile(out.cp, a0, eps, x, t).u;
                row.deviation = std::max(row.deviation, std::abs(u - p));
                row.amplitude = std::max(row.amplitude, std::abs(u - out.cp.u0));
            }
        out.rows.push_back(row);
    }
    // least squares on (log eps, log amplitude)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(out.rows.size());
    for (const auto& r : out.rows) {
        double lx = std::log(r.eps), ly = std::log(r.amplitude);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.monotone = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        bool smaller_eps = out.rows[i].eps < out.rows[i - 1].eps;
        bool smaller_dev = out.rows[i].deviation < out.rows[i - 1].deviation;
        if (smaller_eps != smaller_dev) out.monotone = false;
    }
    return out;
}

json to_json(const UniversalityResult& r) {
    json rows = json::array();
    for (const auto& x : r.rows) rows.push_back({{"eps", x.eps}, {"deviation", x.deviation}, {"amplitude", x.amplitude}});
    return {{"schema", "ivcl.universality/1"},
            {"catastrophe", {{"x0", r.cp.x0}, {"t0", r.cp.t0}, {"u0", r.cp.u0}, {"f3", r.cp.f3}}},
            {"rows", rows},
            {"exponent", r.exponent},
            {"monotone", r.monotone}};
}

}  // namespace ivcl::crit
