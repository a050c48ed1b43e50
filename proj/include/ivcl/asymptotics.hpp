// Formal solutions of v_t = d_x omega(v) around a hodograph solution of the
// Hopf equation: transport equations, the quasi-Miura series, elimination of
// the driving function, deformed hodograph residuals and a numeric root solve.
//
// On the solution x + 2ut + f(u) = 0 every jet is a function of u and
// phi = u_x (u_xx = f'' phi^3, ...), so corrections live in the ring of sums
// c(u) phi^m L^l with L = ln u_x and c a coefficient expression in u, f, f', ...
#pragma once

#include "ivcl/algebra.hpp"
#include "ivcl/serialize.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ivcl {

class HodoExpr {
public:
    using Key = std::pair<int, int>;   // (power of phi, power of L)

    HodoExpr() = default;
    HodoExpr(const CoeffExpr& c, int m = 0, int l = 0);
    static HodoExpr u();
    static HodoExpr phi(int m = 1);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, CoeffExpr>& terms() const { return terms_; }
    void add_term(int m, int l, const CoeffExpr& c);
    CoeffExpr coeff(int m, int l = 0) const;
    bool has_log() const;

    HodoExpr& operator+=(const HodoExpr& o);
    HodoExpr& operator-=(const HodoExpr& o);
    friend HodoExpr operator+(HodoExpr a, const HodoExpr& b) { return a += b; }
    friend HodoExpr operator-(HodoExpr a, const HodoExpr& b) { return a -= b; }
    friend HodoExpr operator*(const HodoExpr& a, const HodoExpr& b);
    friend HodoExpr operator*(const CoeffExpr& c, const HodoExpr& a);
    HodoExpr operator-() const;
    bool operator==(const HodoExpr& o) const { return terms_ == o.terms_; }

    HodoExpr shift_phi(int m) const;   // multiply by phi^m
    HodoExpr dx(const std::string& f = "f") const;
    HodoExpr dt(const std::string& f = "f") const;
    HodoExpr dphi() const;             // partial in phi at fixed u
    HodoExpr substitute(const Substitution& s) const;

    std::string str() const;

private:
    std::map<Key, CoeffExpr> terms_;
};

using HodoSeries = std::vector<HodoExpr>;   // index = power of eps

// Rational functions of the jets: sum c(u) u_x^e1 u_xx^e2 ... L^l, only e1 may
// be negative.
class JetRational {
public:
    struct Key {
        std::vector<int> e;   // e[0] is the power of u_x
        int l = 0;
        auto operator<=>(const Key&) const = default;
        bool operator==(const Key&) const = default;
    };

    JetRational() = default;
    JetRational(const CoeffExpr& c);
    static JetRational term(const CoeffExpr& c, std::vector<int> e, int l = 0);
    static JetRational from(const DiffPoly& p);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Key, CoeffExpr>& terms() const { return terms_; }
    void add_term(std::vector<int> e, int l, const CoeffExpr& c);
    bool has_log() const;
    // no explicit u and no function symbols in any coefficient
    bool u_free() const;

    JetRational& operator+=(const JetRational& o);
    JetRational& operator-=(const JetRational& o);
    friend JetRational operator+(JetRational a, const JetRational& b) { return a += b; }
    friend JetRational operator-(JetRational a, const JetRational& b) { return a -= b; }
    friend JetRational operator*(const JetRational& a, const JetRational& b);
    JetRational operator-() const;
    bool operator==(const JetRational& o) const { return terms_ == o.terms_; }

    JetRational dx() const;
    std::string str(const std::string& var = "u") const;

private:
    std::map<Key, CoeffExpr> terms_;
};

// Evaluate a jet expression at V = u + eps v^1 + ..., keeping orders <= K.
HodoSeries evaluate_at(const JetRational& e, const HodoSeries& V, int K, const std::string& f = "f");
HodoSeries evaluate_at(const EpsCurrent& w, const HodoSeries& V, int K, const std::string& f = "f");

// u_xx -> f'' u_x^3 etc. and the reverse, f'' -> u_xx / u_x^3 etc.
HodoExpr eliminate_forward(const JetRational& e, const std::string& f = "f");
JetRational eliminate_reverse(const HodoExpr& h, const std::string& f = "f");
// the triangular relations themselves
HodoExpr hodograph_jet(int k, const std::string& f = "f");
JetRational hodograph_fderiv(int k, const std::string& f = "f");

// n-th transport right-hand side F_n = [eps^n] d_x omega(u + sum_{i<n} eps^i v^i)
HodoExpr transport_rhs(int n, const EpsCurrent& omega, const HodoSeries& prior, const std::string& f = "f");
// v^n = phi int^phi F_n / (2 s^3) ds + g phi, quadrature constant zero
HodoExpr transport_solve(const HodoExpr& F, const CoeffExpr& g = CoeffExpr());
// p_n with v^n = p_n phi + g phi
HodoExpr transport_p(const HodoExpr& F);
// L* h = h_t - d_x(2 u h)
HodoExpr adjoint_hopf(const HodoExpr& h, const std::string& f = "f");

struct QuasiMiuraTerm {
    int n = 0;
    HodoExpr hodo;      // in (u, u_x) with f-derivatives
    JetRational jets;   // after eliminating f
};

struct QuasiMiura {
    EpsCurrent omega;
    std::vector<QuasiMiuraTerm> terms;   // terms[0] is u itself
    HodoSeries series() const;
};

// g_n = 0 unless given
QuasiMiura quasi_miura(const EpsCurrent& omega, int K, const std::vector<CoeffExpr>& g = {});
QuasiMiura quasi_miura_burgers(int K);
QuasiMiura quasi_miura_linear(int K);   // central invariant a(u) = u

// alpha[n][j] = alpha_{n,n+j}, j = 1..2n-1. as_displayed keeps the printed
// factor 3n in the last row instead of (3n-4)(3n-2).
using AlphaTable = std::vector<std::vector<CoeffExpr>>;
AlphaTable burgers_alpha(int nmax, bool as_displayed = false);
HodoExpr alpha_term(const AlphaTable& a, int n);

// g_n(u) = -p_n(u, -1/f'(u)); throws on logarithmic p_n
CoeffExpr initial_datum_fix(const HodoExpr& p, const std::string& f = "f");

// x + 2vt + omega_f(v) + F(v) on the hodograph solution; every order <= K must vanish
enum class AMode { Constant, Linear };
std::string amode_name(AMode m);
struct HodographResidual {
    AMode mode = AMode::Constant;
    int K = 0;
    HodoSeries residual;      // undifferentiated
    HodoSeries residual_dx;   // 1 + 2 v_x t + d_x(omega_f + F)
    int vanishes_through = -1;
    bool pass() const { return vanishes_through >= K; }
};
using JetSeries = std::vector<JetRational>;   // index = power of eps
HodoSeries evaluate_at(const JetSeries& e, const HodoSeries& V, int K, const std::string& f = "f");
// the correction F for the linear central invariant through eps^2
JetSeries linear_hodograph_correction();
HodographResidual deformed_hodograph_residual(int K, AMode mode);

// formal-solution check: v_t - d_x omega(v) vanishes through eps^K
HodoSeries formal_solution_residual(const QuasiMiura& q, int K);

// Numeric evaluation. Symbols other than u are looked up through a callback,
// e.g. f^(k)(u) for a concrete driving function.
using SymbolEval = std::function<double(const FuncSymbol&, double)>;
SymbolEval driver_values(const CoeffExpr& f_of_u, const std::string& f = "f");
double eval_coeff(const CoeffExpr& c, double u, const SymbolEval& ev = {});
double eval_hodo(const HodoExpr& h, double u, double phi, const SymbolEval& ev = {});

enum class HodoSign { Plus, Minus };   // x + 2ut + f(u) = 0 or x + 2ut - f(u) = 0

class MultivaluedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HodographSolveOptions {
    double lo = -10, hi = 10;
    int scan = 2000;
    double tol = 1e-12;
};

double hodograph_solve(const std::function<double(double)>& f, double x, double t, HodoSign sign,
                       const HodographSolveOptions& opt = {});

json to_json(const QuasiMiura& q);

}  // namespace ivcl
