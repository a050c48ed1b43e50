#include "ivcl/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace ivcl {

std::string rational_str(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw AlgebraError("bad rational: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw AlgebraError("zero denominator: " + s);
    return q;
}

FuncSymbol free_symbol(const std::string& base, int deriv) {
    return {base, deriv, SymbolKind::Free};
}
FuncSymbol id_symbol() { return {"u", 0, SymbolKind::Defined}; }
FuncSymbol const_symbol(const std::string& base) { return {base, 0, SymbolKind::Const}; }

std::string symbol_str(const FuncSymbol& s) {
    if (s.deriv == 0) return s.base;
    if (s.deriv <= 3) return s.base + std::string(s.deriv, '\'');
    return s.base + "^(" + std::to_string(s.deriv) + ")";
}

// ---------------------------------------------------------------- CoeffExpr

CoeffMonomial mono_mul(const CoeffMonomial& a, const CoeffMonomial& b) {
    CoeffMonomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back(b[j++]);
        } else {
            int p = a[i].second + b[j].second;
            if (p != 0) r.emplace_back(a[i].first, p);
            ++i;
            ++j;
        }
    }
    return r;
}

CoeffExpr monomial_expr(const CoeffMonomial& m, const Rational& q) {
    CoeffExpr e;
    e.add_term(m, q);
    return e;
}

CoeffExpr::CoeffExpr(long v) {
    if (v != 0) terms_[{}] = Rational(v);
}

CoeffExpr::CoeffExpr(const Rational& q) {
    if (q != 0) terms_[{}] = q;
}

CoeffExpr CoeffExpr::symbol(const FuncSymbol& s, int power) {
    CoeffExpr e;
    if (power == 0) return CoeffExpr(1);
    e.terms_[{{s, power}}] = 1;
    return e;
}

CoeffExpr CoeffExpr::free(const std::string& base, int deriv, int power) {
    return symbol(free_symbol(base, deriv), power);
}

CoeffExpr CoeffExpr::u(int power) { return symbol(id_symbol(), power); }

void CoeffExpr::add_term(const CoeffMonomial& m, const Rational& q) {
    if (q == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, q);
    } else {
        it->second += q;
        if (it->second == 0) terms_.erase(it);
    }
}

bool CoeffExpr::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational CoeffExpr::constant_value() const {
    auto it = terms_.find({});
    return it == terms_.end() ? Rational(0) : it->second;
}

CoeffExpr& CoeffExpr::operator+=(const CoeffExpr& o) {
    for (const auto& [m, q] : o.terms_) add_term(m, q);
    return *this;
}

CoeffExpr& CoeffExpr::operator-=(const CoeffExpr& o) {
    for (const auto& [m, q] : o.terms_) add_term(m, -q);
    return *this;
}

CoeffExpr& CoeffExpr::operator*=(const Rational& q) {
    if (q == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= q;
    return *this;
}

CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b) {
    CoeffExpr r;
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [ma, qa] : a.terms_)
        for (const auto& [mb, qb] : b.terms_) r.add_term(mono_mul(ma, mb), qa * qb);
    return r;
}

CoeffExpr CoeffExpr::operator-() const {
    CoeffExpr r = *this;
    r *= Rational(-1);
    return r;
}

CoeffExpr CoeffExpr::inverse() const {
    if (terms_.size() != 1) throw AlgebraError("inverse of a non-monomial coefficient: " + str());
    const auto& [m, q] = *terms_.begin();
    CoeffMonomial inv;
    for (const auto& [s, p] : m) inv.emplace_back(s, -p);
    return monomial_expr(inv, 1 / q);
}

CoeffExpr CoeffExpr::pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    CoeffExpr r(1), b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

static CoeffExpr symbol_du(const FuncSymbol& s) {
    switch (s.kind) {
    case SymbolKind::Defined: return CoeffExpr(1);
    case SymbolKind::Const: return CoeffExpr();
    case SymbolKind::Free: break;
    }
    return CoeffExpr::symbol(free_symbol(s.base, s.deriv + 1));
}

CoeffExpr CoeffExpr::du() const {
    CoeffExpr r;
    for (const auto& [m, q] : terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto& [s, p] = m[i];
            CoeffExpr ds = symbol_du(s);
            if (ds.is_zero()) continue;
            CoeffMonomial rest = m;
            if (p == 1)
                rest.erase(rest.begin() + long(i));
            else
                rest[i].second = p - 1;
            for (const auto& [dm, dq] : ds.terms_) r.add_term(mono_mul(rest, dm), q * p * dq);
        }
    }
    return r;
}

CoeffExpr CoeffExpr::du(int n) const {
    CoeffExpr r = *this;
    for (int i = 0; i < n && !r.is_zero(); ++i) r = r.du();
    return r;
}

int CoeffExpr::power_of(const FuncSymbol& s) const {
    int best = 0;
    for (const auto& [m, q] : terms_)
        for (const auto& [t, p] : m)
            if (t == s) best = std::max(best, p);
    return best;
}

bool CoeffExpr::contains_base(const std::string& base) const {
    for (const auto& [m, q] : terms_)
        for (const auto& [t, p] : m)
            if (t.base == base) return true;
    return false;
}

bool CoeffExpr::depends_on_u() const {
    for (const auto& [m, q] : terms_)
        for (const auto& [t, p] : m)
            if (t.kind != SymbolKind::Const) return true;
    return false;
}

std::vector<FuncSymbol> CoeffExpr::symbols() const {
    std::vector<FuncSymbol> out;
    for (const auto& [m, q] : terms_)
        for (const auto& [t, p] : m) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CoeffExpr CoeffExpr::coefficient_of(const FuncSymbol& s, int p) const {
    CoeffExpr r;
    for (const auto& [m, q] : terms_) {
        int have = 0;
        CoeffMonomial rest;
        for (const auto& [t, e] : m) {
            if (t == s)
                have = e;
            else
                rest.emplace_back(t, e);
        }
        if (have == p) r.add_term(rest, q);
    }
    return r;
}

static std::string mono_str(const CoeffMonomial& m) {
    std::string s;
    for (const auto& [t, p] : m) {
        if (!s.empty()) s += ' ';
        s += symbol_str(t);
        if (p != 1) s += "^" + std::to_string(p);
    }
    return s;
}

std::string CoeffExpr::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, q] : terms_) {
        Rational a = abs(q);
        std::string body = mono_str(m);
        std::string num;
        if (body.empty())
            num = rational_str(a);
        else if (a != 1)
            num = rational_str(a) + " " + body;
        else
            num = body;
        if (first)
            out += (q < 0 ? "-" : "") + num;
        else
            out += (q < 0 ? " - " : " + ") + num;
        first = false;
    }
    return out;
}

// ---------------------------------------------------------------- Substitution

void Substitution::set(const std::string& base, const CoeffExpr& value) {
    values_[base] = value;
    for (auto it = cache_.begin(); it != cache_.end();) {
        if (it->first.first == base)
            it = cache_.erase(it);
        else
            ++it;
    }
}

std::vector<std::string> Substitution::bases() const {
    std::vector<std::string> out;
    for (const auto& [b, v] : values_) out.push_back(b);
    return out;
}

const CoeffExpr& Substitution::value(const std::string& base, int deriv) const {
    auto key = std::make_pair(base, deriv);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    CoeffExpr v = deriv == 0 ? values_.at(base) : value(base, deriv - 1).du();
    return cache_.emplace(key, std::move(v)).first->second;
}

CoeffExpr Substitution::apply(const CoeffExpr& e) const {
    if (values_.empty()) return e;
    CoeffExpr r;
    for (const auto& [m, q] : e.terms()) {
        CoeffMonomial kept;
        CoeffExpr factor(q);
        for (const auto& [s, p] : m) {
            if (s.kind == SymbolKind::Free && values_.count(s.base)) {
                const CoeffExpr& v = value(s.base, s.deriv);
                if (p < 0 && v.is_zero())
                    throw AlgebraError("substitution divides by zero through " + symbol_str(s));
                factor = factor * v.pow(p);
                if (factor.is_zero()) break;
            } else {
                kept.emplace_back(s, p);
            }
        }
        if (factor.is_zero()) continue;
        r += factor * monomial_expr(kept);
    }
    return r;
}

// ---------------------------------------------------------------- JetMonomial

JetMonomial::JetMonomial(std::vector<int> e) : e_(std::move(e)) {
    for (int v : e_)
        if (v < 0) throw AlgebraError("negative jet exponent");
    while (!e_.empty() && e_.back() == 0) e_.pop_back();
}

JetMonomial JetMonomial::var(int k, int power) {
    if (k < 1) throw AlgebraError("jet index must be positive");
    std::vector<int> e(std::size_t(k), 0);
    e[std::size_t(k - 1)] = power;
    return JetMonomial(std::move(e));
}

int JetMonomial::degree() const {
    int d = 0;
    for (std::size_t i = 0; i < e_.size(); ++i) d += int(i + 1) * e_[i];
    return d;
}

int JetMonomial::length() const {
    int n = 0;
    for (int v : e_) n += v;
    return n;
}

JetMonomial JetMonomial::operator*(const JetMonomial& o) const {
    std::vector<int> e(std::max(e_.size(), o.e_.size()), 0);
    for (std::size_t i = 0; i < e_.size(); ++i) e[i] += e_[i];
    for (std::size_t i = 0; i < o.e_.size(); ++i) e[i] += o.e_[i];
    return JetMonomial(std::move(e));
}

JetMonomial JetMonomial::with_exp(int k, int v) const {
    std::vector<int> e = e_;
    if (int(e.size()) < k) e.resize(std::size_t(k), 0);
    e[std::size_t(k - 1)] = v;
    return JetMonomial(std::move(e));
}

std::string jet_var_str(int k) {
    if (k == 0) return "u";
    if (k <= 3) return "u_" + std::string(std::size_t(k), 'x');
    return "u_" + std::to_string(k) + "x";
}

std::string JetMonomial::str() const {
    std::string s;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] == 0) continue;
        if (!s.empty()) s += ' ';
        s += jet_var_str(int(i + 1));
        if (e_[i] != 1) s += "^" + std::to_string(e_[i]);
    }
    return s.empty() ? "1" : s;
}

std::strong_ordering rank_compare(const JetMonomial& a, const JetMonomial& b) {
    if (auto c = a.degree() <=> b.degree(); c != 0) return c;
    int n = std::max(a.order(), b.order());
    for (int k = n; k >= 1; --k)
        if (auto c = a.exp(k) <=> b.exp(k); c != 0) return c;
    return std::strong_ordering::equal;
}

static void partitions(int rest, int maxpart, std::vector<int>& cur, std::vector<JetMonomial>& out) {
    if (rest == 0) {
        std::vector<int> e;
        for (int p : cur) {
            if (int(e.size()) < p) e.resize(std::size_t(p), 0);
            e[std::size_t(p - 1)]++;
        }
        out.emplace_back(std::move(e));
        return;
    }
    for (int p = std::min(rest, maxpart); p >= 1; --p) {
        cur.push_back(p);
        partitions(rest - p, p, cur, out);
        cur.pop_back();
    }
}

std::vector<JetMonomial> monomials_of_degree(int d) {
    std::vector<JetMonomial> out;
    if (d == 0) return {JetMonomial()};
    std::vector<int> cur;
    partitions(d, d, cur, out);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return rank_compare(a, b) > 0; });
    return out;
}

// ---------------------------------------------------------------- DiffPoly

DiffPoly::DiffPoly(const CoeffExpr& c) {
    if (!c.is_zero()) terms_.emplace(JetMonomial(), c);
}

DiffPoly::DiffPoly(const JetMonomial& m, const CoeffExpr& c) {
    if (!c.is_zero()) terms_.emplace(m, c);
}

DiffPoly DiffPoly::jet(int k, int power) { return DiffPoly(JetMonomial::var(k, power)); }

CoeffExpr DiffPoly::coeff(const JetMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? CoeffExpr() : it->second;
}

void DiffPoly::add_term(const JetMonomial& m, const CoeffExpr& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

DiffPoly operator*(const CoeffExpr& c, const DiffPoly& p) {
    DiffPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, pc] : p.terms_) r.add_term(m, c * pc);
    return r;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

std::optional<int> DiffPoly::homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
        if (m.degree() != d) return std::nullopt;
    return d;
}

bool DiffPoly::is_homogeneous(int d) const {
    for (const auto& [m, c] : terms_)
        if (m.degree() != d) return false;
    return true;
}

int DiffPoly::order() const {
    int n = 0;
    for (const auto& [m, c] : terms_) n = std::max(n, m.order());
    return n;
}

DiffPoly DiffPoly::dx() const {
    DiffPoly r;
    for (const auto& [m, c] : terms_) {
        CoeffExpr dc = c.du();
        if (!dc.is_zero()) r.add_term(m * JetMonomial::var(1), dc);
        const auto& e = m.exps();
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            int k = int(i + 1);
            JetMonomial nm = m.with_exp(k, e[i] - 1) * JetMonomial::var(k + 1);
            r.add_term(nm, c * Rational(e[i]));
        }
    }
    return r;
}

DiffPoly DiffPoly::dx(int n) const {
    DiffPoly r = *this;
    for (int i = 0; i < n && !r.is_zero(); ++i) r = r.dx();
    return r;
}

DiffPoly DiffPoly::partial(int j) const {
    DiffPoly r;
    if (j < 0) throw AlgebraError("negative partial index");
    for (const auto& [m, c] : terms_) {
        if (j == 0) {
            r.add_term(m, c.du());
            continue;
        }
        int e = m.exp(j);
        if (e == 0) continue;
        r.add_term(m.with_exp(j, e - 1), c * Rational(e));
    }
    return r;
}

DiffPoly DiffPoly::substitute(const Substitution& s) const {
    DiffPoly r;
    for (const auto& [m, c] : terms_) r.add_term(m, s.apply(c));
    return r;
}

DiffPoly DiffPoly::map_coeffs(const std::function<CoeffExpr(const CoeffExpr&)>& fn) const {
    DiffPoly r;
    for (const auto& [m, c] : terms_) r.add_term(m, fn(c));
    return r;
}

std::string DiffPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    // highest rank first reads naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string cs = c.str();
        std::string ms = m.is_one() ? "" : m.str();
        bool neg = false;
        std::string body;
        if (c.size() == 1) {
            neg = cs[0] == '-';
            if (neg) cs = cs.substr(1);
            if (ms.empty())
                body = cs;
            else if (cs == "1")
                body = ms;
            else
                body = cs + " " + ms;
        } else {
            body = "(" + cs + ")" + (ms.empty() ? "" : " " + ms);
        }
        if (first)
            out += (neg ? "-" : "") + body;
        else
            out += (neg ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

DiffPoly arith(const DiffPoly& p, const DiffPoly& q, char op) {
    switch (op) {
    case '+': return p + q;
    case '-': return p - q;
    case '*': return p * q;
    default: throw AlgebraError(std::string("unknown arith op ") + op);
    }
}

DiffPoly scale(const DiffPoly& p, const CoeffExpr& c) { return c * p; }

// ---------------------------------------------------------------- EpsCurrent

static const DiffPoly& zero_poly() {
    static const DiffPoly z;
    return z;
}

EpsCurrent::EpsCurrent(int K, bool exact) : K_(K), exact_(exact), c_(std::size_t(K + 1)) {
    if (K < 0) throw AlgebraError("negative truncation order");
}

EpsCurrent::EpsCurrent(std::vector<DiffPoly> comps, int K, bool exact)
    : K_(K), exact_(exact), c_(std::move(comps)) {
    if (K < 0) throw AlgebraError("negative truncation order");
    if (int(c_.size()) > K + 1) {
        for (std::size_t k = std::size_t(K + 1); k < c_.size(); ++k)
            if (!c_[k].is_zero()) exact_ = false;
    }
    c_.resize(std::size_t(K + 1));
}

const DiffPoly& EpsCurrent::operator[](int k) const {
    if (k < 0 || k > K_) {
        if (k > K_ && !exact_) throw AlgebraError("component beyond truncation order requested");
        return zero_poly();
    }
    return c_[std::size_t(k)];
}

DiffPoly& EpsCurrent::at(int k) {
    if (k < 0 || k > K_) throw AlgebraError("component index out of range");
    return c_[std::size_t(k)];
}

EpsCurrent EpsCurrent::truncated(int K) const {
    if (K > reliable()) throw AlgebraError("truncation beyond reliable order");
    EpsCurrent r(K, exact_);
    bool dropped = false;
    for (int k = 0; k <= K_; ++k) {
        if (k <= K)
            r.c_[std::size_t(k)] = c_[std::size_t(k)];
        else if (!c_[std::size_t(k)].is_zero())
            dropped = true;
    }
    if (dropped) r.exact_ = false;
    return r;
}

static std::pair<int, bool> combined_order(const EpsCurrent& a, const EpsCurrent& b, bool additive) {
    if (a.exact() && b.exact()) return {additive ? std::max(a.K(), b.K()) : a.K() + b.K(), true};
    return {std::min(a.reliable(), b.reliable()), false};
}

EpsCurrent& EpsCurrent::operator+=(const EpsCurrent& o) {
    auto [K, ex] = combined_order(*this, o, true);
    EpsCurrent r(K, ex);
    for (int k = 0; k <= K; ++k) r.c_[std::size_t(k)] = (*this)[k] + o[k];
    return *this = std::move(r);
}

EpsCurrent& EpsCurrent::operator-=(const EpsCurrent& o) {
    auto [K, ex] = combined_order(*this, o, true);
    EpsCurrent r(K, ex);
    for (int k = 0; k <= K; ++k) r.c_[std::size_t(k)] = (*this)[k] - o[k];
    return *this = std::move(r);
}

EpsCurrent operator*(const EpsCurrent& a, const EpsCurrent& b) {
    auto [K, ex] = combined_order(a, b, false);
    EpsCurrent r(K, ex);
    for (int i = 0; i <= std::min(K, a.K()); ++i) {
        if (a[i].is_zero()) continue;
        for (int j = 0; i + j <= K && j <= b.K(); ++j) {
            if (b[j].is_zero()) continue;
            r.c_[std::size_t(i + j)] += a[i] * b[j];
        }
    }
    return r;
}

EpsCurrent EpsCurrent::scaled(const CoeffExpr& c) const {
    EpsCurrent r = *this;
    for (auto& p : r.c_) p = c * p;
    return r;
}

EpsCurrent EpsCurrent::dx() const {
    EpsCurrent r = *this;
    for (auto& p : r.c_) p = p.dx();
    return r;
}

EpsCurrent EpsCurrent::partial(int j) const {
    EpsCurrent r = *this;
    for (auto& p : r.c_) p = p.partial(j);
    return r;
}

EpsCurrent EpsCurrent::substitute(const Substitution& s) const {
    EpsCurrent r = *this;
    for (auto& p : r.c_) p = p.substitute(s);
    return r;
}

EpsCurrent EpsCurrent::shifted(int n) const {
    EpsCurrent r(K_ + n, exact_);
    for (int k = 0; k <= K_; ++k) r.c_[std::size_t(k + n)] = c_[std::size_t(k)];
    return r;
}

bool EpsCurrent::operator==(const EpsCurrent& o) const {
    int K = std::max(K_, o.K_);
    for (int k = 0; k <= K; ++k) {
        const DiffPoly& a = k <= K_ ? c_[std::size_t(k)] : zero_poly();
        const DiffPoly& b = k <= o.K_ ? o.c_[std::size_t(k)] : zero_poly();
        if (a != b) return false;
    }
    return K_ == o.K_ && exact_ == o.exact_;
}

bool EpsCurrent::is_zero() const {
    for (const auto& p : c_)
        if (!p.is_zero()) return false;
    return true;
}

bool EpsCurrent::graded(int shift) const {
    for (int k = 0; k <= K_; ++k)
        if (!c_[std::size_t(k)].is_homogeneous(k + shift)) return false;
    return true;
}

int EpsCurrent::max_jet_order() const {
    int n = 0;
    for (const auto& p : c_) n = std::max(n, p.order());
    return n;
}

std::string EpsCurrent::str() const {
    std::string out;
    for (int k = 0; k <= K_; ++k) {
        if (c_[std::size_t(k)].is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string e = k == 0 ? "" : (k == 1 ? "eps " : "eps^" + std::to_string(k) + " ");
        out += e + "[" + c_[std::size_t(k)].str() + "]";
    }
    if (out.empty()) out = "0";
    if (!exact_) out += " + O(eps^" + std::to_string(K_ + 1) + ")";
    return out;
}

// ---------------------------------------------------------------- bracket

DiffPoly bracket_pair(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    int na = a.order(), nb = b.order();
    DiffPoly db = b;
    for (int j = 0; j <= na; ++j) {
        db = db.dx();
        DiffPoly pa = a.partial(j);
        if (!pa.is_zero()) r += db * pa;
    }
    DiffPoly da = a;
    for (int j = 0; j <= nb; ++j) {
        da = da.dx();
        DiffPoly pb = b.partial(j);
        if (!pb.is_zero()) r -= da * pb;
    }
    return r;
}

EpsCurrent poisson_bracket(const EpsCurrent& alpha, const EpsCurrent& beta, int K) {
    if (K < 0) throw AlgebraError("negative bracket order");
    if (K > alpha.reliable() || K > beta.reliable())
        throw AlgebraError("requested order " + std::to_string(K) +
                           " exceeds the reliable truncation of the inputs");
    EpsCurrent r(K, false);
    for (int k = 0; k <= K; ++k) {
        DiffPoly s;
        for (int m = 0; m <= k; ++m) s += bracket_pair(alpha[m], beta[k - m]);
        r.at(k) = std::move(s);
    }
    return r;
}

InvolutionResult involution_check(const EpsCurrent& alpha, const EpsCurrent& beta, int K) {
    EpsCurrent br = poisson_bracket(alpha, beta, K);
    InvolutionResult res;
    for (int k = 0; k <= K; ++k) {
        if (!br[k].is_zero()) {
            res.pass = false;
            res.failing_order = k;
            res.residual = br[k];
            break;
        }
    }
    return res;
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), unsigned(n), unsigned(k));
    return Rational(r);
}

static DiffPoly quadratic_sum(int s, int lmin, int lmax) {
    DiffPoly q;
    for (int l = lmin; l <= lmax; ++l)
        q.add_term(JetMonomial::var(l) * JetMonomial::var(s + 1 - l), CoeffExpr(binomial(s + 1, l)));
    return q;
}

DiffPoly phi_operator(const DiffPoly& beta) {
    DiffPoly r;
    for (int s = 1; s <= beta.order(); ++s) {
        DiffPoly p = beta.partial(s);
        if (!p.is_zero()) r += p * quadratic_sum(s, 1, s);
    }
    return r;
}

DiffPoly delta_operator(const DiffPoly& beta) {
    DiffPoly r;
    for (int s = 3; s <= beta.order(); ++s) {
        DiffPoly p = beta.partial(s);
        if (!p.is_zero()) r += p * quadratic_sum(s, 2, s - 1);
    }
    return r;
}

// ---------------------------------------------------------------- integration

std::optional<CoeffExpr> integrate_u(const CoeffExpr& c) {
    CoeffExpr work = c, result;
    for (int iter = 0; iter < 400 && !work.is_zero(); ++iter) {
        // term carrying the highest derivative of a free symbol
        const CoeffMonomial* best = nullptr;
        Rational bq;
        int bi = -1, bd = -1;
        for (const auto& [m, q] : work.terms()) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                const auto& s = m[i].first;
                if (s.kind == SymbolKind::Free && s.deriv > bd) {
                    bd = s.deriv;
                    bi = int(i);
                    best = &m;
                    bq = q;
                }
            }
        }
        CoeffExpr cand;
        if (best == nullptr || bd == 0) {
            // pick any term; only pure u^e (times constants) is integrable here
            const auto& [m, q] = *work.terms().begin();
            CoeffMonomial rest;
            int e = 0;
            for (const auto& [s, p] : m) {
                if (s.kind == SymbolKind::Defined)
                    e = p;
                else if (s.kind == SymbolKind::Const)
                    rest.emplace_back(s, p);
                else
                    return std::nullopt;
            }
            if (e == -1) return std::nullopt;
            cand = monomial_expr(mono_mul(rest, {{id_symbol(), e + 1}}), q / (e + 1));
        } else {
            const auto& m = *best;
            const auto& [s, p] = m[std::size_t(bi)];
            if (p != 1) return std::nullopt;
            FuncSymbol lower = free_symbol(s.base, s.deriv - 1);
            int r = 0;
            CoeffMonomial rest;
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (int(i) == bi) continue;
                if (m[i].first == lower)
                    r = m[i].second;
                else
                    rest.push_back(m[i]);
            }
            if (r == -1) return std::nullopt;
            cand = monomial_expr(mono_mul(rest, {{lower, r + 1}}), bq / (r + 1));
        }
        result += cand;
        work -= cand.du();
    }
    if (!work.is_zero()) return std::nullopt;
    if (result.du() != c) return std::nullopt;
    return result;
}

DiffPoly integrate_x(const DiffPoly& p) {
    DiffPoly work = p, result;
    for (int iter = 0; iter < 64 && !work.is_zero(); ++iter) {
        int n = work.order();
        if (n == 0) throw AlgebraError("not a total derivative: " + p.str());
        DiffPoly q1;
        for (const auto& [m, c] : work.terms()) {
            int e = m.exp(n);
            if (e == 0) continue;
            if (e > 1) throw AlgebraError("not a total derivative: " + p.str());
            JetMonomial a = m.with_exp(n, 0);
            if (n >= 2) {
                int f = a.exp(n - 1);
                q1.add_term(a.with_exp(n - 1, f + 1), c * Rational(1, f + 1));
            } else {
                if (!a.is_one()) throw AlgebraError("not a total derivative: " + p.str());
                auto ic = integrate_u(c);
                if (!ic) throw AlgebraError("not a total derivative: " + p.str());
                q1.add_term(JetMonomial(), *ic);
            }
        }
        if (q1.is_zero()) throw AlgebraError("not a total derivative: " + p.str());
        result += q1;
        work -= q1.dx();
    }
    if (!work.is_zero()) throw AlgebraError("not a total derivative: " + p.str());
    return result;
}

}  // namespace ivcl
