#include "ivcl/parse.hpp"

#include <cctype>

namespace ivcl {
namespace {

EpsPoly mul(const EpsPoly& a, const EpsPoly& b) {
    EpsPoly r;
    for (const auto& [i, p] : a)
        for (const auto& [j, q] : b) {
            DiffPoly pq = p * q;
            if (!pq.is_zero()) r[i + j] += pq;
        }
    for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
    return r;
}

void add_into(EpsPoly& a, const EpsPoly& b, bool negate) {
    for (const auto& [i, p] : b) {
        if (negate)
            a[i] -= p;
        else
            a[i] += p;
    }
    for (auto it = a.begin(); it != a.end();) it = it->second.is_zero() ? a.erase(it) : std::next(it);
}

EpsPoly constant(const CoeffExpr& c) {
    EpsPoly r;
    if (!c.is_zero()) r[0] = DiffPoly(c);
    return r;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    EpsPoly parse_all() {
        EpsPoly r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return r;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw AlgebraError("parse error at " + std::to_string(i_) + " (" + what + "): " + s_);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++i_;
            return true;
        }
        return false;
    }

    long integer() {
        skip();
        std::size_t start = i_;
        if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_ || (i_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
            fail("integer expected");
        return std::stol(s_.substr(start, i_ - start));
    }

    int power() {
        if (!accept('^')) return 1;
        if (accept('(')) {
            long p = integer();
            if (!accept(')')) fail("')' expected");
            return int(p);
        }
        return int(integer());
    }

    EpsPoly expr() {
        EpsPoly r;
        bool neg = false;
        if (accept('-'))
            neg = true;
        else
            accept('+');
        add_into(r, term(), neg);
        while (true) {
            if (accept('+'))
                add_into(r, term(), false);
            else if (accept('-'))
                add_into(r, term(), true);
            else
                break;
        }
        return r;
    }

    bool factor_start() {
        skip();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '$' || c == '*';
    }

    EpsPoly term() {
        EpsPoly r = factor();
        while (factor_start()) {
            accept('*');
            r = mul(r, factor());
        }
        return r;
    }

    EpsPoly factor() {
        skip();
        if (i_ >= s_.size()) fail("factor expected");
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string num = s_.substr(start, i_ - start);
            if (i_ < s_.size() && s_[i_] == '/') {
                ++i_;
                std::size_t st2 = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                if (st2 == i_) fail("denominator expected");
                num += "/" + s_.substr(st2, i_ - st2);
            }
            return constant(CoeffExpr(parse_rational(num)));
        }
        if (c == '(') {
            ++i_;
            EpsPoly inner = expr();
            if (!accept(')')) fail("')' expected");
            int p = power();
            if (p < 0) fail("negative power of a group");
            EpsPoly r = constant(CoeffExpr(1));
            for (int k = 0; k < p; ++k) r = mul(r, inner);
            return r;
        }
        bool is_const = false;
        if (c == '$') {
            is_const = true;
            ++i_;
        }
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])))) ++i_;
        std::string id = s_.substr(start, i_ - start);
        if (id.empty()) fail("identifier expected");
        if (is_const) return constant(CoeffExpr::symbol(const_symbol(id), power()));
        if (id == "eps") {
            int p = power();
            if (p < 0) fail("negative eps power");
            EpsPoly r;
            r[p] = DiffPoly(CoeffExpr(1));
            return r;
        }
        if (id == "u" && i_ < s_.size() && s_[i_] == '_') {
            ++i_;
            int k = 0;
            if (i_ < s_.size() && s_[i_] == '(') {
                ++i_;
                k = int(integer());
                if (!accept(')')) fail("')' expected");
            } else if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                std::size_t st = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                k = std::stoi(s_.substr(st, i_ - st));
                if (i_ >= s_.size() || s_[i_] != 'x') fail("'x' expected");
                ++i_;
            } else {
                while (i_ < s_.size() && s_[i_] == 'x') {
                    ++k;
                    ++i_;
                }
            }
            if (k < 1) fail("jet index");
            int p = power();
            if (p < 0) fail("negative jet power");
            EpsPoly r;
            r[0] = DiffPoly(JetMonomial::var(k, p));
            return r;
        }
        if (id == "u") return constant(CoeffExpr::u(power()));
        int d = 0;
        while (i_ < s_.size() && s_[i_] == '\'') {
            ++d;
            ++i_;
        }
        if (d == 0 && i_ + 1 < s_.size() && s_[i_] == '^' && s_[i_ + 1] == '(') {
            i_ += 2;
            d = int(integer());
            if (!accept(')')) fail("')' expected");
        }
        return constant(CoeffExpr::free(id, d, power()));
    }
};

}  // namespace

EpsPoly parse_eps_poly(const std::string& text) { return Parser(text).parse_all(); }

CoeffExpr parse_coeff(const std::string& text) {
    EpsPoly p = parse_eps_poly(text);
    if (p.empty()) return CoeffExpr();
    if (p.size() != 1 || p.begin()->first != 0) throw AlgebraError("coefficient expected: " + text);
    const DiffPoly& d = p.begin()->second;
    if (d.size() != 1 || !d.terms().begin()->first.is_one())
        throw AlgebraError("coefficient expected: " + text);
    return d.terms().begin()->second;
}

DiffPoly parse_diffpoly(const std::string& text) {
    EpsPoly p = parse_eps_poly(text);
    if (p.empty()) return DiffPoly();
    if (p.size() != 1 || p.begin()->first != 0) throw AlgebraError("eps-free polynomial expected: " + text);
    return p.begin()->second;
}

EpsCurrent parse_current(const std::string& text, int K, bool exact) {
    EpsPoly p = parse_eps_poly(text);
    std::vector<DiffPoly> comps(std::size_t(K + 1));
    bool dropped = false;
    for (const auto& [k, d] : p) {
        if (k <= K)
            comps[std::size_t(k)] = d;
        else
            dropped = true;
    }
    return EpsCurrent(std::move(comps), K, exact && !dropped);
}

}  // namespace ivcl
