// Exact differential-polynomial arithmetic on the jet space of one scalar field u.
//
// Coefficients are Laurent polynomials over Q in function symbols of u: free
// functions (a, f, b1, ...) with their u-derivatives, the identity u itself and
// constants. Jet variables u_(1), u_(2), ... carry the grading deg u_(k) = k.
#pragma once

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ivcl {

using Rational = mpq_class;

std::string rational_str(const Rational& q);
Rational parse_rational(const std::string& s);

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Free symbols differentiate into new symbols (f -> f'), the identity symbol u
// has u' = 1 and constants have zero derivative. 1/u is u with power -1.
enum class SymbolKind { Free, Defined, Const };

struct FuncSymbol {
    std::string base;
    int deriv = 0;
    SymbolKind kind = SymbolKind::Free;

    auto operator<=>(const FuncSymbol&) const = default;
    bool operator==(const FuncSymbol&) const = default;
};

FuncSymbol free_symbol(const std::string& base, int deriv = 0);
FuncSymbol id_symbol();
FuncSymbol const_symbol(const std::string& base);
std::string symbol_str(const FuncSymbol& s);

// sorted by symbol, powers nonzero (negative allowed)
using CoeffMonomial = std::vector<std::pair<FuncSymbol, int>>;

class CoeffExpr {
public:
    CoeffExpr() = default;
    CoeffExpr(long v);
    CoeffExpr(const Rational& q);
    static CoeffExpr symbol(const FuncSymbol& s, int power = 1);
    static CoeffExpr free(const std::string& base, int deriv = 0, int power = 1);
    static CoeffExpr u(int power = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;   // coefficient of the empty monomial
    bool is_monomial() const { return terms_.size() == 1; }
    std::size_t size() const { return terms_.size(); }
    const std::map<CoeffMonomial, Rational>& terms() const { return terms_; }

    CoeffExpr& operator+=(const CoeffExpr& o);
    CoeffExpr& operator-=(const CoeffExpr& o);
    CoeffExpr& operator*=(const Rational& q);
    friend CoeffExpr operator+(CoeffExpr a, const CoeffExpr& b) { return a += b; }
    friend CoeffExpr operator-(CoeffExpr a, const CoeffExpr& b) { return a -= b; }
    friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator*(CoeffExpr a, const Rational& q) { return a *= q; }
    friend CoeffExpr operator*(const Rational& q, CoeffExpr a) { return a *= q; }
    CoeffExpr operator-() const;
    bool operator==(const CoeffExpr& o) const { return terms_ == o.terms_; }
    bool operator!=(const CoeffExpr& o) const { return !(*this == o); }
    bool operator<(const CoeffExpr& o) const { return terms_ < o.terms_; }

    CoeffExpr pow(int n) const;          // negative n only for monomials
    CoeffExpr inverse() const;           // monomials only
    CoeffExpr du() const;                // total derivative in u
    CoeffExpr du(int n) const;

    // degree in one symbol (max power of that exact symbol), 0 if absent
    int power_of(const FuncSymbol& s) const;
    bool contains_base(const std::string& base) const;
    bool depends_on_u() const;  // through the identity symbol
    std::vector<FuncSymbol> symbols() const;

    // coefficient of s^p, with s^p removed from each monomial
    CoeffExpr coefficient_of(const FuncSymbol& s, int p) const;

    std::string str() const;

    void add_term(const CoeffMonomial& m, const Rational& q);

private:
    std::map<CoeffMonomial, Rational> terms_;
};

CoeffExpr monomial_expr(const CoeffMonomial& m, const Rational& q = 1);
CoeffMonomial mono_mul(const CoeffMonomial& a, const CoeffMonomial& b);

// Replace every occurrence of base symbols by given functions of u. Derivatives
// f^(k) map to the k-th u-derivative of the replacement.
class Substitution {
public:
    Substitution() = default;
    void set(const std::string& base, const CoeffExpr& value);
    bool has(const std::string& base) const { return values_.count(base) > 0; }
    bool empty() const { return values_.empty(); }
    const CoeffExpr& value(const std::string& base, int deriv) const;
    CoeffExpr apply(const CoeffExpr& e) const;
    std::vector<std::string> bases() const;

private:
    std::map<std::string, CoeffExpr> values_;
    mutable std::map<std::pair<std::string, int>, CoeffExpr> cache_;
};

// Jet monomial u_(1)^{i1} ... u_(m)^{im}, trailing zeros trimmed.
class JetMonomial {
public:
    JetMonomial() = default;
    explicit JetMonomial(std::vector<int> e);
    static JetMonomial var(int k, int power = 1);   // u_(k)^power, k >= 1

    const std::vector<int>& exps() const { return e_; }
    int exp(int k) const { return k >= 1 && k <= int(e_.size()) ? e_[k - 1] : 0; }
    int order() const { return int(e_.size()); }   // highest jet index present
    int degree() const;
    int length() const;                           // number of factors
    bool is_one() const { return e_.empty(); }
    JetMonomial operator*(const JetMonomial& o) const;
    JetMonomial with_exp(int k, int v) const;
    bool divisible_by(int k) const { return exp(k) > 0; }
    bool operator==(const JetMonomial& o) const { return e_ == o.e_; }
    std::string str() const;

private:
    std::vector<int> e_;
};

// total degree first, then the reverse-lexicographic rule: m1 > m2 iff at the
// highest index where they differ m1 has the larger exponent
std::strong_ordering rank_compare(const JetMonomial& a, const JetMonomial& b);

struct RankLess {
    bool operator()(const JetMonomial& a, const JetMonomial& b) const {
        return rank_compare(a, b) < 0;
    }
};

std::vector<JetMonomial> monomials_of_degree(int d);   // highest rank first
std::string jet_var_str(int k);

class DiffPoly {
public:
    using Map = std::map<JetMonomial, CoeffExpr, RankLess>;

    DiffPoly() = default;
    DiffPoly(const CoeffExpr& c);                         // degree-0 polynomial
    DiffPoly(const JetMonomial& m, const CoeffExpr& c = CoeffExpr(1));
    static DiffPoly jet(int k, int power = 1);            // u_(k)^power

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    CoeffExpr coeff(const JetMonomial& m) const;
    void add_term(const JetMonomial& m, const CoeffExpr& c);

    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
    friend DiffPoly operator*(const CoeffExpr& c, const DiffPoly& p);
    friend DiffPoly operator*(const DiffPoly& p, const CoeffExpr& c) { return c * p; }
    DiffPoly operator-() const;
    bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const DiffPoly& o) const { return !(*this == o); }

    std::optional<int> homogeneous_degree() const;   // nullopt if mixed; 0 poly -> nullopt
    bool is_homogeneous(int d) const;
    int order() const;                               // highest jet index, 0 if none

    DiffPoly dx() const;
    DiffPoly dx(int n) const;
    // j >= 1: formal partial in u_(j); j = 0: partial in u acting on coefficients
    DiffPoly partial(int j) const;
    DiffPoly substitute(const Substitution& s) const;
    DiffPoly map_coeffs(const std::function<CoeffExpr(const CoeffExpr&)>& fn) const;

    std::string str() const;

private:
    Map terms_;
};

DiffPoly arith(const DiffPoly& p, const DiffPoly& q, char op);   // '+', '-', '*'
DiffPoly scale(const DiffPoly& p, const CoeffExpr& c);

// epsilon series sum_k eps^k comps[k], known through eps^K. When exact, all
// components beyond K vanish identically.
class EpsCurrent {
public:
    EpsCurrent() = default;
    explicit EpsCurrent(int K, bool exact = false);
    EpsCurrent(std::vector<DiffPoly> comps, int K, bool exact);

    int K() const { return K_; }
    bool exact() const { return exact_; }
    // order through which the series is reliable
    int reliable() const { return exact_ ? 1 << 20 : K_; }
    const DiffPoly& operator[](int k) const;
    DiffPoly& at(int k);
    const std::vector<DiffPoly>& comps() const { return c_; }

    EpsCurrent truncated(int K) const;   // drop orders > K, mark inexact if something was dropped
    EpsCurrent& operator+=(const EpsCurrent& o);
    EpsCurrent& operator-=(const EpsCurrent& o);
    friend EpsCurrent operator+(EpsCurrent a, const EpsCurrent& b) { return a += b; }
    friend EpsCurrent operator-(EpsCurrent a, const EpsCurrent& b) { return a -= b; }
    friend EpsCurrent operator*(const EpsCurrent& a, const EpsCurrent& b);
    EpsCurrent scaled(const CoeffExpr& c) const;
    EpsCurrent dx() const;
    EpsCurrent partial(int j) const;
    EpsCurrent substitute(const Substitution& s) const;
    EpsCurrent shifted(int n) const;   // multiply by eps^n, order becomes K + n
    bool operator==(const EpsCurrent& o) const;
    bool is_zero() const;
    // every component k is homogeneous of degree k + shift (or zero)
    bool graded(int shift = 0) const;
    int max_jet_order() const;

    std::string str() const;

private:
    int K_ = 0;
    bool exact_ = false;
    std::vector<DiffPoly> c_;
};

EpsCurrent bracket_component_sum(const EpsCurrent& alpha, const EpsCurrent& beta, int k);
EpsCurrent poisson_bracket(const EpsCurrent& alpha, const EpsCurrent& beta, int K);

// bracket of two homogeneous pieces, no truncation
DiffPoly bracket_pair(const DiffPoly& a, const DiffPoly& b);

struct InvolutionResult {
    bool pass = true;
    int failing_order = -1;
    DiffPoly residual;
};

InvolutionResult involution_check(const EpsCurrent& alpha, const EpsCurrent& beta, int K);

// The operator Phi(beta) = sum_s d beta/d u_(s) sum_{l=1}^{s} C(s+1,l) u_(l) u_(s+1-l)
// produced by a Miura step against the leading term u^2 (also the linear part of
// the bracket against u^2 in the classification).
DiffPoly phi_operator(const DiffPoly& beta);
// Its part with l in [2, s-1], i.e. everything not carrying an extra u_x factor.
DiffPoly delta_operator(const DiffPoly& beta);

Rational binomial(int n, int k);

// Formal antiderivative in x. Throws AlgebraError("not a total derivative").
DiffPoly integrate_x(const DiffPoly& p);
// Antiderivative in u of a coefficient; heuristic, always verified.
std::optional<CoeffExpr> integrate_u(const CoeffExpr& c);

}  // namespace ivcl
