#include "ivcl/asymptotics.hpp"

#include "ivcl/classify.hpp"
#include "ivcl/hierarchy.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <memory>

namespace ivcl {

// ---- HodoExpr ----

HodoExpr::HodoExpr(const CoeffExpr& c, int m, int l) { add_term(m, l, c); }

HodoExpr HodoExpr::u() { return HodoExpr(CoeffExpr::u()); }
HodoExpr HodoExpr::phi(int m) { return HodoExpr(CoeffExpr(1), m); }

void HodoExpr::add_term(int m, int l, const CoeffExpr& c) {
    if (c.is_zero()) return;
    if (l < 0) throw AlgebraError("negative power of ln u_x");
    auto it = terms_.find({m, l});
    if (it == terms_.end()) {
        terms_.emplace(Key{m, l}, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

CoeffExpr HodoExpr::coeff(int m, int l) const {
    auto it = terms_.find({m, l});
    return it == terms_.end() ? CoeffExpr() : it->second;
}

bool HodoExpr::has_log() const {
    for (const auto& [k, c] : terms_)
        if (k.second > 0) return true;
    return false;
}

HodoExpr& HodoExpr::operator+=(const HodoExpr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
}

HodoExpr& HodoExpr::operator-=(const HodoExpr& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
}

HodoExpr operator*(const HodoExpr& a, const HodoExpr& b) {
    HodoExpr r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
}

HodoExpr operator*(const CoeffExpr& c, const HodoExpr& a) {
    HodoExpr r;
    for (const auto& [k, x] : a.terms_) r.add_term(k.first, k.second, c * x);
    return r;
}

HodoExpr HodoExpr::operator-() const { return CoeffExpr(-1) * *this; }

HodoExpr HodoExpr::shift_phi(int m) const {
    HodoExpr r;
    for (const auto& [k, c] : terms_) r.add_term(k.first + m, k.second, c);
    return r;
}

HodoExpr HodoExpr::dphi() const {
    HodoExpr r;
    for (const auto& [k, c] : terms_) {
        auto [m, l] = k;
        if (m != 0) r.add_term(m - 1, l, c * Rational(m));
        if (l != 0) r.add_term(m - 1, l - 1, c * Rational(l));
    }
    return r;
}

HodoExpr HodoExpr::dx(const std::string& f) const {
    // d_x u = phi, d_x phi = f'' phi^3
    HodoExpr r;
    for (const auto& [k, c] : terms_) r.add_term(k.first + 1, k.second, c.du());
    CoeffExpr f2 = CoeffExpr::free(f, 2);
    return r + (f2 * dphi()).shift_phi(3);
}

HodoExpr HodoExpr::dt(const std::string& f) const {
    // u_t = 2 u phi, so d_t = 2u d_x + 2 phi^2 d_phi
    return (CoeffExpr::u() * Rational(2)) * dx(f) + CoeffExpr(2) * dphi().shift_phi(2);
}

HodoExpr HodoExpr::substitute(const Substitution& s) const {
    HodoExpr r;
    for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, s.apply(c));
    return r;
}

namespace {

HodoExpr operator*(const HodoExpr& a, const Rational& q) { return CoeffExpr(q) * a; }

std::string pow_str(const std::string& base, int p) {
    if (p == 1) return base;
    return base + "^" + std::to_string(p);
}

std::string coeff_paren(const CoeffExpr& c) {
    std::string s = c.str();
    if (c.size() > 1) return "(" + s + ")";
    return s;
}

std::string join_terms(const std::vector<std::string>& parts) {
    if (parts.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (i == 0)
            out = p;
        else if (!p.empty() && p[0] == '-')
            out += " - " + p.substr(1);
        else
            out += " + " + p;
    }
    return out;
}

std::string with_factors(const CoeffExpr& c, const std::vector<std::string>& factors) {
    if (factors.empty()) return coeff_paren(c);
    std::string f;
    for (const auto& x : factors) f += (f.empty() ? "" : " ") + x;
    if (c == CoeffExpr(1)) return f;
    if (c == CoeffExpr(-1)) return "-" + f;
    return coeff_paren(c) + " " + f;
}

}  // namespace

std::string HodoExpr::str() const {
    std::vector<std::string> parts;
    for (const auto& [k, c] : terms_) {
        std::vector<std::string> fs;
        if (k.first != 0) fs.push_back(pow_str("phi", k.first));
        if (k.second != 0) fs.push_back(pow_str("ln(phi)", k.second));
        parts.push_back(with_factors(c, fs));
    }
    return join_terms(parts);
}

// ---- JetRational ----

namespace {

void trim(std::vector<int>& e) {
    while (!e.empty() && e.back() == 0) e.pop_back();
}

}  // namespace

JetRational::JetRational(const CoeffExpr& c) { add_term({}, 0, c); }

JetRational JetRational::term(const CoeffExpr& c, std::vector<int> e, int l) {
    JetRational r;
    r.add_term(std::move(e), l, c);
    return r;
}

JetRational JetRational::from(const DiffPoly& p) {
    JetRational r;
    for (const auto& [m, c] : p.terms()) r.add_term(m.exps(), 0, c);
    return r;
}

void JetRational::add_term(std::vector<int> e, int l, const CoeffExpr& c) {
    if (c.is_zero()) return;
    for (std::size_t i = 1; i < e.size(); ++i)
        if (e[i] < 0) throw AlgebraError("only u_x may carry a negative power");
    if (l < 0) throw AlgebraError("negative power of ln u_x");
    trim(e);
    Key k{std::move(e), l};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

bool JetRational::has_log() const {
    for (const auto& [k, c] : terms_)
        if (k.l > 0) return true;
    return false;
}

bool JetRational::u_free() const {
    for (const auto& [k, c] : terms_)
        if (!c.is_constant()) return false;
    return true;
}

JetRational& JetRational::operator+=(const JetRational& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.e, k.l, c);
    return *this;
}

JetRational& JetRational::operator-=(const JetRational& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.e, k.l, -c);
    return *this;
}

JetRational operator*(const JetRational& a, const JetRational& b) {
    JetRational r;
    for (const auto& [ka, ca] : a.terms_)
        for (const auto& [kb, cb] : b.terms_) {
            std::vector<int> e(std::max(ka.e.size(), kb.e.size()), 0);
            for (std::size_t i = 0; i < ka.e.size(); ++i) e[i] += ka.e[i];
            for (std::size_t i = 0; i < kb.e.size(); ++i) e[i] += kb.e[i];
            r.add_term(std::move(e), ka.l + kb.l, ca * cb);
        }
    return r;
}

JetRational JetRational::operator-() const {
    JetRational r;
    for (const auto& [k, c] : terms_) r.add_term(k.e, k.l, -c);
    return r;
}

JetRational JetRational::dx() const {
    JetRational r;
    for (const auto& [k, c] : terms_) {
        std::vector<int> e = k.e;
        if (e.empty()) e.resize(1, 0);
        // coefficient: c' u_x
        {
            std::vector<int> x = e;
            x[0] += 1;
            r.add_term(x, k.l, c.du());
        }
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            std::vector<int> x = e;
            x[j] -= 1;
            if (x.size() < j + 2) x.resize(j + 2, 0);
            x[j + 1] += 1;
            r.add_term(x, k.l, c * Rational(e[j]));
        }
        if (k.l > 0) {
            std::vector<int> x = e;
            if (x.size() < 2) x.resize(2, 0);
            x[0] -= 1;
            x[1] += 1;
            r.add_term(x, k.l - 1, c * Rational(k.l));
        }
    }
    return r;
}

std::string JetRational::str(const std::string& var) const {
    std::vector<std::string> parts;
    for (const auto& [k, c] : terms_) {
        std::vector<std::string> fs;
        for (std::size_t j = 0; j < k.e.size(); ++j) {
            if (k.e[j] == 0) continue;
            std::string v = jet_var_str(int(j) + 1);
            if (var != "u") v = var + v.substr(1);
            fs.push_back(pow_str(v, k.e[j]));
        }
        if (k.l != 0) fs.push_back(pow_str("ln(" + var + "_x)", k.l));
        parts.push_back(with_factors(c, fs));
    }
    return join_terms(parts);
}

// ---- series evaluation ----

namespace {

HodoSeries ser_mul(const HodoSeries& a, const HodoSeries& b, int K) {
    HodoSeries r(std::size_t(K + 1));
    for (int i = 0; i < int(a.size()) && i <= K; ++i) {
        if (a[std::size_t(i)].is_zero()) continue;
        for (int j = 0; j < int(b.size()) && i + j <= K; ++j)
            if (!b[std::size_t(j)].is_zero()) r[std::size_t(i + j)] += a[std::size_t(i)] * b[std::size_t(j)];
    }
    return r;
}

HodoSeries ser_one(int K) {
    HodoSeries r(std::size_t(K + 1));
    r[0] = HodoExpr(CoeffExpr(1));
    return r;
}

HodoSeries ser_pow(const HodoSeries& a, int p, int K) {
    HodoSeries r = ser_one(K);
    for (int i = 0; i < p; ++i) r = ser_mul(r, a, K);
    return r;
}

HodoSeries ser_dx(const HodoSeries& a, const std::string& f) {
    HodoSeries r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k].dx(f);
    return r;
}

void ser_add(HodoSeries& a, const HodoSeries& b, const CoeffExpr& c = CoeffExpr(1)) {
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) a[k] += c * b[k];
}

Rational gen_binomial(int e, int r) {
    Rational q = 1;
    for (int i = 0; i < r; ++i) q *= Rational(e - i, i + 1);
    q.canonicalize();
    return q;
}

// Shared per-evaluation data: powers of delta, jets of V, expansions of u_x^e and L^l.
struct EvalCtx {
    const HodoSeries& V;
    int K;
    std::string f;
    HodoSeries delta;                     // V - u
    std::vector<HodoSeries> delta_pow;    // delta^r / r!
    std::map<int, HodoSeries> jets;       // d^j V
    HodoSeries rho;                       // (V_x - phi) / phi
    std::map<int, HodoSeries> ux_pow;     // V_x^e
    std::map<int, HodoSeries> log_pow;    // (ln V_x)^l

    EvalCtx(const HodoSeries& v, int k, std::string fn) : V(v), K(k), f(std::move(fn)) {
        if (V.empty() || !(V[0] == HodoExpr::u())) throw AlgebraError("evaluation point must start with u");
        delta.assign(std::size_t(K + 1), HodoExpr());
        for (int i = 1; i <= K && i < int(V.size()); ++i) delta[std::size_t(i)] = V[std::size_t(i)];
        delta_pow.push_back(ser_one(K));
        HodoSeries d1 = ser_dx(padded(), f);
        rho.assign(std::size_t(K + 1), HodoExpr());
        for (int i = 1; i <= K; ++i) rho[std::size_t(i)] = d1[std::size_t(i)].shift_phi(-1);
        jets[1] = d1;
    }

    HodoSeries padded() const {
        HodoSeries r(std::size_t(K + 1));
        for (int i = 0; i <= K && i < int(V.size()); ++i) r[std::size_t(i)] = V[std::size_t(i)];
        return r;
    }

    const HodoSeries& jet(int j) {
        auto it = jets.find(j);
        if (it != jets.end()) return it->second;
        HodoSeries d = ser_dx(jet(j - 1), f);
        return jets[j] = d;
    }

    const HodoSeries& dpow(int r) {
        while (int(delta_pow.size()) <= r) {
            int n = int(delta_pow.size());
            HodoSeries x = ser_mul(delta_pow.back(), delta, K);
            for (auto& h : x) h = CoeffExpr(Rational(1, n)) * h;
            delta_pow.push_back(x);
        }
        return delta_pow[std::size_t(r)];
    }

    const HodoSeries& uxp(int e) {
        auto it = ux_pow.find(e);
        if (it != ux_pow.end()) return it->second;
        // phi^e (1 + rho)^e
        HodoSeries r(std::size_t(K + 1)), rp = ser_one(K);
        for (int k = 0; k <= K; ++k) {
            ser_add(r, rp, CoeffExpr(gen_binomial(e, k)));
            rp = ser_mul(rp, rho, K);
        }
        for (auto& h : r) h = h.shift_phi(e);
        return ux_pow[e] = r;
    }

    const HodoSeries& logp(int l) {
        auto it = log_pow.find(l);
        if (it != log_pow.end()) return it->second;
        if (l == 0) return log_pow[0] = ser_one(K);
        // ln V_x = L + sum_r (-1)^(r+1) rho^r / r
        HodoSeries L(std::size_t(K + 1)), rp = rho;
        L[0] = HodoExpr(CoeffExpr(1), 0, 1);
        for (int r = 1; r <= K; ++r) {
            ser_add(L, rp, CoeffExpr(Rational(r % 2 ? 1 : -1, r)));
            rp = ser_mul(rp, rho, K);
        }
        HodoSeries out = ser_pow(L, l, K);
        return log_pow[l] = out;
    }

    // c(V) = sum_r c^(r)(u) delta^r / r!
    HodoSeries coeff_at(const CoeffExpr& c) {
        HodoSeries r(std::size_t(K + 1));
        CoeffExpr d = c;
        for (int n = 0; n <= K && !d.is_zero(); ++n) {
            ser_add(r, dpow(n), d);
            if (n < K) d = d.du();
        }
        return r;
    }

    HodoSeries eval(const JetRational& e) {
        HodoSeries out(std::size_t(K + 1));
        for (const auto& [k, c] : e.terms()) {
            HodoSeries t = coeff_at(c);
            for (std::size_t j = 0; j < k.e.size(); ++j) {
                int p = k.e[j];
                if (p == 0) continue;
                if (j == 0)
                    t = ser_mul(t, uxp(p), K);
                else
                    t = ser_mul(t, ser_pow(jet(int(j) + 1), p, K), K);
            }
            if (k.l > 0) t = ser_mul(t, logp(k.l), K);
            ser_add(out, t);
        }
        return out;
    }
};

}  // namespace

HodoSeries evaluate_at(const JetRational& e, const HodoSeries& V, int K, const std::string& f) {
    EvalCtx ctx(V, K, f);
    return ctx.eval(e);
}

HodoSeries evaluate_at(const JetSeries& e, const HodoSeries& V, int K, const std::string& f) {
    EvalCtx ctx(V, K, f);
    HodoSeries out(std::size_t(K + 1));
    for (int k = 0; k < int(e.size()) && k <= K; ++k) {
        HodoSeries t = ctx.eval(e[std::size_t(k)]);
        for (int i = 0; i + k <= K; ++i) out[std::size_t(i + k)] += t[std::size_t(i)];
    }
    return out;
}

HodoSeries evaluate_at(const EpsCurrent& w, const HodoSeries& V, int K, const std::string& f) {
    if (K > w.reliable()) throw AlgebraError("current known only through eps^" + std::to_string(w.K()));
    JetSeries e;
    for (int k = 0; k <= K && k <= w.K(); ++k) e.push_back(JetRational::from(w[k]));
    return evaluate_at(e, V, K, f);
}

// ---- elimination ----

HodoExpr eliminate_forward(const JetRational& e, const std::string& f) {
    return evaluate_at(e, HodoSeries{HodoExpr::u()}, 0, f)[0];
}

HodoExpr hodograph_jet(int k, const std::string& f) {
    if (k < 0) throw std::invalid_argument("negative jet order");
    HodoExpr h = HodoExpr::u();
    for (int i = 0; i < k; ++i) h = h.dx(f);
    return h;
}

JetRational hodograph_fderiv(int k, const std::string& f) {
    if (k < 2) throw AlgebraError("only f'', f''', ... can be eliminated");
    HodoExpr E = hodograph_jet(k, f);
    FuncSymbol top = free_symbol(f, k);
    CoeffExpr lead = E.coeff(k + 1).coefficient_of(top, 1);
    if (lead != CoeffExpr(1)) throw AlgebraError("unexpected triangular structure at order " + std::to_string(k));
    HodoExpr rest = E - HodoExpr(CoeffExpr::symbol(top), k + 1);
    std::vector<int> uk(std::size_t(k), 0);
    uk[std::size_t(k - 1)] = 1;
    JetRational num = JetRational::term(CoeffExpr(1), uk) - eliminate_reverse(rest, f);
    std::vector<int> inv{-(k + 1)};
    return num * JetRational::term(CoeffExpr(1), inv);
}

JetRational eliminate_reverse(const HodoExpr& h, const std::string& f) {
    std::map<int, JetRational> cache;
    auto fd = [&](int k) -> const JetRational& {
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        return cache[k] = hodograph_fderiv(k, f);
    };
    JetRational out;
    for (const auto& [key, c] : h.terms()) {
        for (const auto& [mono, q] : c.terms()) {
            CoeffMonomial keep;
            JetRational prod = JetRational::term(CoeffExpr(1), {key.first}, key.second);
            for (const auto& [sym, p] : mono) {
                if (sym.kind == SymbolKind::Free && sym.base == f) {
                    if (sym.deriv < 2) throw AlgebraError(symbol_str(sym) + " cannot be eliminated");
                    if (p < 0) throw AlgebraError("negative power of " + symbol_str(sym));
                    for (int i = 0; i < p; ++i) prod = prod * fd(sym.deriv);
                } else {
                    keep.emplace_back(sym, p);
                }
            }
            out += JetRational(monomial_expr(keep, q)) * prod;
        }
    }
    return out;
}

// ---- transport ----

HodoExpr transport_rhs(int n, const EpsCurrent& omega, const HodoSeries& prior, const std::string& f) {
    if (n < 1) throw std::invalid_argument("transport order starts at 1");
    if (omega[0] != DiffPoly(CoeffExpr::u(2))) throw AlgebraError("transport equations assume omega_0 = u^2");
    HodoSeries V{HodoExpr::u()};
    for (int i = 1; i < n; ++i) {
        if (i >= int(prior.size())) throw AlgebraError("missing correction v^" + std::to_string(i));
        V.push_back(prior[std::size_t(i)]);
    }
    return evaluate_at(omega, V, n, f)[std::size_t(n)].dx(f);
}

namespace {

// int s^p L^l ds, constant zero
HodoExpr integrate_phi_power(int p, int l) {
    if (p == -1) return HodoExpr(CoeffExpr(Rational(1, l + 1)), 0, l + 1);
    HodoExpr r(CoeffExpr(Rational(1, p + 1)), p + 1, l);
    if (l > 0) r -= integrate_phi_power(p, l - 1) * Rational(l, p + 1);
    return r;
}

}  // namespace

HodoExpr transport_p(const HodoExpr& F) {
    HodoExpr r;
    for (const auto& [k, c] : F.terms()) r += (c * Rational(1, 2)) * integrate_phi_power(k.first - 3, k.second);
    return r;
}

HodoExpr transport_solve(const HodoExpr& F, const CoeffExpr& g) {
    return transport_p(F).shift_phi(1) + HodoExpr(g, 1);
}

HodoExpr adjoint_hopf(const HodoExpr& h, const std::string& f) {
    return h.dt(f) - (CoeffExpr::u() * Rational(2) * h).dx(f);
}

HodoSeries QuasiMiura::series() const {
    HodoSeries s;
    for (const auto& t : terms) s.push_back(t.hodo);
    return s;
}

QuasiMiura quasi_miura(const EpsCurrent& omega, int K, const std::vector<CoeffExpr>& g) {
    QuasiMiura q;
    q.omega = omega;
    q.terms.push_back({0, HodoExpr::u(), JetRational(CoeffExpr::u())});
    HodoSeries prior{HodoExpr::u()};
    for (int n = 1; n <= K; ++n) {
        HodoExpr F = transport_rhs(n, omega, prior);
        CoeffExpr gn = n - 1 < int(g.size()) ? g[std::size_t(n - 1)] : CoeffExpr();
        HodoExpr v = transport_solve(F, gn);
        prior.push_back(v);
        QuasiMiuraTerm t;
        t.n = n;
        t.hodo = v;
        t.jets = eliminate_reverse(v);
        q.terms.push_back(t);
    }
    return q;
}

QuasiMiura quasi_miura_burgers(int K) { return quasi_miura(burgers_current(1).truncated(std::max(K, 1)), K); }

QuasiMiura quasi_miura_linear(int K) { return quasi_miura(viscous_ch_current(K), K); }

// ---- Burgers alpha recursion ----

AlphaTable burgers_alpha(int nmax, bool as_displayed) {
    if (nmax < 1) throw std::invalid_argument("burgers_alpha: nmax >= 1");
    AlphaTable a(std::size_t(nmax + 1));
    const CoeffExpr f2 = CoeffExpr::free("f", 2), f3 = CoeffExpr::free("f", 3);
    a[1] = {CoeffExpr(), f2 * Rational(1, 2)};
    // alpha_{n, idx}, zero out of range
    auto al = [&](int n, int idx) -> CoeffExpr {
        if (n < 1 || n > nmax) return {};
        int j = idx - n;
        if (j < 1 || j > 2 * n - 1 || std::size_t(j) >= a[std::size_t(n)].size()) return {};
        return a[std::size_t(n)][std::size_t(j)];
    };
    for (int n = 2; n <= nmax; ++n) {
        auto Lambda = [&](int k) {
            CoeffExpr s;
            for (int i = 1; i <= n - 1; ++i)
                for (int j = 1; j <= 2 * i - 1; ++j) s += al(i, i + j) * al(n - i, n + k - i - j);
            return s;
        };
        auto Omega = [&](int j) {
            return f2 * al(n - 1, n + j - 1).du() * Rational(2 * n + 2 * j - 1) +
                   f3 * al(n - 1, n + j - 1) * Rational(n + j - 1);
        };
        a[std::size_t(n)].assign(std::size_t(2 * n), CoeffExpr());
        for (int j = 1; j <= 2 * n - 1; ++j) {
            int m = n + j - 1;
            Rational last = Rational((n + j - 3) * (n + j - 1));
            if (as_displayed && j == 2 * n - 1) last = Rational(3 * n);
            CoeffExpr s = al(n - 1, n + j - 1).du(2) + Lambda(j).du() + f2 * Lambda(j - 1) * Rational(m) +
                          Omega(j - 1) + f2 * f2 * al(n - 1, n + j - 3) * last;
            a[std::size_t(n)][std::size_t(j)] = s * Rational(1, 2 * m);
        }
    }
    return a;
}

HodoExpr alpha_term(const AlphaTable& a, int n) {
    HodoExpr r;
    for (int j = 1; j <= 2 * n - 1; ++j) r.add_term(n + j, 0, a.at(std::size_t(n)).at(std::size_t(j)));
    return r;
}

CoeffExpr initial_datum_fix(const HodoExpr& p, const std::string& f) {
    if (p.has_log()) throw AlgebraError("initial_datum_fix: logarithmic p_n has no polynomial datum fix");
    CoeffExpr g;
    for (const auto& [k, c] : p.terms()) {
        // phi = -1/f'
        CoeffExpr v = c * CoeffExpr::free(f, 1, -k.first);
        if (k.first % 2) v = -v;
        g -= v;
    }
    return g;
}

// ---- deformed hodograph ----

std::string amode_name(AMode m) { return m == AMode::Constant ? "constant" : "linear"; }

JetSeries linear_hodograph_correction() {
    JetSeries F(3);
    F[1] = JetRational::term(CoeffExpr(Rational(1, 2)), {}, 1);
    F[2] = JetRational::term(CoeffExpr::u() * Rational(-1, 12), {-3, 2});
    return F;
}

namespace {

int vanishing_order(const HodoSeries& s) {
    int k = -1;
    while (k + 1 < int(s.size()) && s[std::size_t(k + 1)].is_zero()) ++k;
    return k;
}

EpsCurrent symmetry_current(const CoeffExpr& a, int K) {
    ClassificationResult r = classify(ClassifyOptions{K + 1, a, false, {}});
    return r.sym_current().truncated(K);
}

}  // namespace

HodographResidual deformed_hodograph_residual(int K, AMode mode) {
    if (K < 0) throw std::invalid_argument("K must be nonnegative");
    if (mode == AMode::Linear && K > 2) throw std::invalid_argument("the linear correction is known through eps^2");
    HodographResidual res;
    res.mode = mode;
    res.K = K;
    QuasiMiura q = mode == AMode::Constant ? quasi_miura_burgers(K) : quasi_miura_linear(K);
    EpsCurrent wf = symmetry_current(mode == AMode::Constant ? CoeffExpr(1) : CoeffExpr::u(), K);
    HodoSeries V = q.series();

    // x + 2ut = -f(u) and 2t = -1/phi - f'(u)
    HodoSeries R = evaluate_at(wf, V, K);
    R[0] -= HodoExpr(CoeffExpr::free("f"));
    HodoExpr two_t = HodoExpr(CoeffExpr(-1), -1) - HodoExpr(CoeffExpr::free("f", 1));
    for (int k = 1; k <= K; ++k) R[std::size_t(k)] += V[std::size_t(k)] * two_t;
    if (mode == AMode::Linear) {
        HodoSeries F = evaluate_at(linear_hodograph_correction(), V, K);
        ser_add(R, F);
    }
    res.residual = R;
    res.residual_dx = ser_dx(R, "f");
    res.vanishes_through = vanishing_order(R);
    return res;
}

HodoSeries formal_solution_residual(const QuasiMiura& q, int K) {
    if (K >= int(q.terms.size())) throw std::invalid_argument("series known only through eps^" +
                                                               std::to_string(q.terms.size() - 1));
    HodoSeries V = q.series();
    HodoSeries W = evaluate_at(q.omega, V, K);
    HodoSeries r(std::size_t(K + 1));
    for (int k = 0; k <= K; ++k) r[std::size_t(k)] = V[std::size_t(k)].dt() - W[std::size_t(k)].dx();
    return r;
}

// ---- numerics ----

SymbolEval driver_values(const CoeffExpr& f_of_u, const std::string& f) {
    auto derivs = std::make_shared<std::vector<CoeffExpr>>(1, f_of_u);
    return [derivs, f](const FuncSymbol& s, double u) -> double {
        if (s.kind != SymbolKind::Free || s.base != f) throw AlgebraError("unbound symbol " + symbol_str(s));
        while (int(derivs->size()) <= s.deriv) derivs->push_back(derivs->back().du());
        return eval_coeff((*derivs)[std::size_t(s.deriv)], u);
    };
}

double eval_coeff(const CoeffExpr& c, double u, const SymbolEval& ev) {
    double total = 0;
    for (const auto& [mono, q] : c.terms()) {
        double t = q.get_d();
        for (const auto& [sym, p] : mono) {
            double x;
            if (sym.kind == SymbolKind::Defined)
                x = u;
            else if (ev)
                x = ev(sym, u);
            else
                throw AlgebraError("eval_coeff: unbound symbol " + symbol_str(sym));
            t *= std::pow(x, p);
        }
        total += t;
    }
    return total;
}

double eval_hodo(const HodoExpr& h, double u, double phi, const SymbolEval& ev) {
    double total = 0;
    for (const auto& [k, c] : h.terms()) {
        double t = eval_coeff(c, u, ev) * std::pow(phi, k.first);
        if (k.second > 0) {
            if (phi <= 0) throw std::domain_error("ln u_x needs u_x > 0");
            t *= std::pow(std::log(phi), k.second);
        }
        total += t;
    }
    return total;
}

double hodograph_solve(const std::function<double(double)>& f, double x, double t, HodoSign sign,
                       const HodographSolveOptions& opt) {
    const double sg = sign == HodoSign::Plus ? 1.0 : -1.0;
    auto G = [&](double u) { return x + 2 * u * t + sg * f(u); };
    if (!(opt.hi > opt.lo) || opt.scan < 1) throw std::invalid_argument("hodograph_solve: bad scan interval");
    std::vector<std::pair<double, double>> brackets;
    double h = (opt.hi - opt.lo) / opt.scan;
    double a = opt.lo, ga = G(a);
    for (int i = 1; i <= opt.scan; ++i) {
        double b = opt.lo + i * h, gb = G(b);
        if (ga == 0) brackets.push_back({a, a});
        else if ((ga < 0) != (gb < 0) && gb != 0) brackets.push_back({a, b});
        a = b;
        ga = gb;
    }
    if (ga == 0) brackets.push_back({a, a});
    if (brackets.empty()) throw std::runtime_error("hodograph_solve: no root bracketed in the scan interval");
    if (brackets.size() > 1)
        throw MultivaluedError("hodograph_solve: " + std::to_string(brackets.size()) +
                               " roots, solution is multivalued (past the catastrophe)");
    auto [lo, hi] = brackets[0];
    if (lo == hi) return lo;
    boost::uintmax_t iters = 200;
    auto tol = [](double l, double r) { return std::abs(r - l) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(l)); };
    auto [r0, r1] = boost::math::tools::toms748_solve(G, lo, hi, tol, iters);
    double r = std::abs(G(r0)) <= std::abs(G(r1)) ? r0 : r1;
    // a secant polish in case the bracket ended on a flat stretch
    for (int i = 0; i < 3 && std::abs(G(r)) > opt.tol; ++i) {
        double d = 1e-7 * std::max(1.0, std::abs(r));
        double s = (G(r + d) - G(r - d)) / (2 * d);
        if (s == 0) break;
        r -= G(r) / s;
    }
    if (std::abs(G(r)) > opt.tol) throw std::runtime_error("hodograph_solve: residual above tolerance");
    return r;
}

json to_json(const QuasiMiura& q) {
    json j;
    j["schema"] = "ivcl.quasi-miura/1";
    j["version"] = kVersion;
    j["omega"] = to_json(q.omega);
    json terms = json::array();
    for (const auto& t : q.terms) {
        if (t.n == 0) continue;
        terms.push_back({{"order", t.n}, {"hodograph", t.hodo.str()}, {"jets", t.jets.str()}});
    }
    j["terms"] = terms;
    return j;
}

}  // namespace ivcl
