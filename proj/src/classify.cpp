#include "ivcl/classify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ivcl {

namespace {

std::string letter_name(int k, int i, int count) {
    static const char* base[] = {"", "", "b", "c", "d", "e"};
    if (k <= 5) return std::string(base[k]) + std::to_string(i + 1);
    (void)count;
    return "m" + std::to_string(k) + "n" + std::to_string(i + 1);
}

std::string capital_name(int k, int i, int count) {
    if (k == 1 && count == 1) return "A";
    static const char* base[] = {"", "A", "B", "C", "D", "E"};
    if (k <= 5) return std::string(base[k]) + std::to_string(i + 1);
    return "M" + std::to_string(k) + "n" + std::to_string(i + 1);
}

int letter_order(const Ansatz& an, const std::string& name) {
    for (const auto& t : an.letters)
        if (t.name == name) return t.order;
    return -1;
}

// split an expression by its product of f-derivatives
std::vector<CoeffExpr> split_by_f(const CoeffExpr& e) {
    std::map<CoeffMonomial, CoeffExpr> parts;
    for (const auto& [m, q] : e.terms()) {
        CoeffMonomial fpart, rest;
        for (const auto& sp : m) (sp.first.base == "f" ? fpart : rest).push_back(sp);
        parts[fpart].add_term(rest, q);
    }
    std::vector<CoeffExpr> out;
    for (auto& [k, v] : parts)
        if (!v.is_zero()) out.push_back(std::move(v));
    return out;
}

bool invertible_monomial(const CoeffExpr& c) {
    if (!c.is_monomial()) return false;
    for (const auto& [s, p] : c.terms().begin()->first) {
        (void)p;
        if (s.kind == SymbolKind::Const || s.kind == SymbolKind::Defined) continue;
        if (s.base == "a" && s.deriv == 0) continue;
        return false;
    }
    return true;
}

// letter L appears in eq only underived and linearly with invertible coefficient
std::optional<CoeffExpr> solve_for(const CoeffExpr& eq, const std::string& L) {
    bool present = false;
    for (const auto& [m, q] : eq.terms()) {
        (void)q;
        for (const auto& [s, p] : m) {
            if (s.base != L) continue;
            if (s.deriv != 0 || p != 1) return std::nullopt;
            present = true;
        }
    }
    if (!present) return std::nullopt;
    FuncSymbol sym = free_symbol(L);
    CoeffExpr coef = eq.coefficient_of(sym, 1);
    if (!invertible_monomial(coef)) return std::nullopt;
    CoeffExpr rest = eq.coefficient_of(sym, 0);
    return -(rest * coef.inverse());
}

struct Solver {
    const Ansatz& an;
    std::map<std::string, CoeffExpr> values;
    std::optional<CoeffExpr> a_value;

    Substitution subst() const {
        Substitution s;
        if (a_value) s.set("a", *a_value);
        for (const auto& [k, v] : values) s.set(k, v);
        return s;
    }
};

}  // namespace

LetterOverrides reference_basis() {
    return {{"d2", JetMonomial::var(1) * JetMonomial::var(3)}};
}

Ansatz build_ansatz(int K, const LetterOverrides& overrides) {
    if (K < 0) throw AlgebraError("negative classification order");
    Ansatz an;
    an.K = K;
    an.main = EpsCurrent(K, true);
    an.sym = EpsCurrent(K, true);
    an.main.at(0) = DiffPoly(CoeffExpr::u(2));
    an.sym.at(0) = DiffPoly(CoeffExpr::free("f"));
    if (K >= 1) an.main.at(1) = DiffPoly(JetMonomial::var(1), CoeffExpr::free("a"));
    for (int k = 1; k <= K; ++k) {
        auto mons = monomials_of_degree(k);
        for (std::size_t i = 0; i < mons.size(); ++i) {
            AnsatzTerm t{capital_name(k, int(i), int(mons.size())), k, mons[i]};
            an.sym.at(k).add_term(t.monomial, CoeffExpr::free(t.name));
            an.capitals.push_back(std::move(t));
        }
        if (k < 2) continue;
        std::vector<JetMonomial> normal;
        for (const auto& m : mons)
            if (m.exp(1) == 0) normal.push_back(m);
        for (std::size_t i = 0; i < normal.size(); ++i) {
            AnsatzTerm t{letter_name(k, int(i), int(normal.size())), k, normal[i]};
            if (auto it = overrides.find(t.name); it != overrides.end()) {
                if (it->second.degree() != k) throw AlgebraError("override for " + t.name + " has the wrong degree");
                t.monomial = it->second;
            }
            an.main.at(k).add_term(t.monomial, CoeffExpr::free(t.name));
            an.letters.push_back(std::move(t));
        }
    }
    return an;
}

Substitution ClassificationResult::letter_substitution() const {
    Substitution s;
    if (a_value) s.set("a", *a_value);
    for (const auto& c : constraints) s.set(c.letter, c.value);
    return s;
}

EpsCurrent ClassificationResult::main_current() const {
    int K = std::min(ansatz.K, std::max(this->K, 0));
    return ansatz.main.truncated(K).substitute(letter_substitution());
}

EpsCurrent ClassificationResult::sym_current() const {
    int K = std::max(this->K, 0);
    Substitution s = letter_substitution();
    EpsCurrent w(K, true);
    w.at(0) = ansatz.sym[0];
    for (const auto& c : capitals)
        if (c.order <= K) w.at(c.order).add_term(c.monomial, s.apply(c.value));
    return w;
}

const SolvedCapital* ClassificationResult::capital(const std::string& name) const {
    for (const auto& c : capitals)
        if (c.name == name) return &c;
    return nullptr;
}

const LetterConstraint* ClassificationResult::constraint(const std::string& letter) const {
    for (const auto& c : constraints)
        if (c.letter == letter) return &c;
    return nullptr;
}

ClassificationResult solve_order(const Ansatz& an, int k, const ClassificationResult& prior) {
    if (k != prior.K + 1) throw AlgebraError("orders must be solved in sequence");
    if (k > an.K) throw AlgebraError("order beyond the ansatz");
    ClassificationResult res = prior;
    res.K = k;
    res.ansatz = an;
    if (k == 0) {
        // {u^2, f} vanishes identically
        return res;
    }
    Solver sv{an, {}, prior.a_value};
    for (const auto& c : prior.constraints) sv.values[c.letter] = c.value;
    Substitution s = sv.subst();

    EpsCurrent main = an.main.truncated(k).substitute(s);
    EpsCurrent sym = prior.sym_current();

    DiffPoly R;
    for (int i = 1; i <= k; ++i) R += bracket_pair(main[i], sym[k - i]);

    // linear map X -> {u^2, X} on degree-k monomials, rational entries
    auto cols = monomials_of_degree(k);
    auto rows = monomials_of_degree(k + 1);
    std::size_t nr = rows.size(), nc = cols.size();
    std::vector<std::vector<Rational>> M(nr, std::vector<Rational>(nc));
    for (std::size_t c = 0; c < nc; ++c) {
        DiffPoly img = bracket_pair(main[0], DiffPoly(cols[c]));
        for (std::size_t r = 0; r < nr; ++r) {
            CoeffExpr e = img.coeff(rows[r]);
            if (!e.is_zero() && !e.is_constant()) throw AlgebraError("internal: non-rational bracket matrix");
            M[r][c] = e.is_zero() ? Rational(0) : e.constant_value();
        }
    }
    std::vector<CoeffExpr> rhs(nr);
    for (std::size_t r = 0; r < nr; ++r) rhs[r] = -R.coeff(rows[r]);

    std::vector<int> pivot_of(nc, -1);
    std::vector<bool> used(nr, false);
    for (std::size_t c = 0; c < nc; ++c) {
        int p = -1;
        for (std::size_t r = 0; r < nr; ++r)
            if (!used[r] && M[r][c] != 0) {
                p = int(r);
                break;
            }
        if (p < 0) throw AlgebraError("non-triangular system at order " + std::to_string(k));
        used[std::size_t(p)] = true;
        pivot_of[c] = p;
        Rational inv = Rational(1) / M[std::size_t(p)][c];
        for (auto& x : M[std::size_t(p)]) x *= inv;
        rhs[std::size_t(p)] *= inv;
        for (std::size_t r = 0; r < nr; ++r) {
            if (int(r) == p || M[r][c] == 0) continue;
            Rational fct = M[r][c];
            for (std::size_t cc = 0; cc < nc; ++cc) M[r][cc] -= fct * M[std::size_t(p)][cc];
            rhs[r] -= rhs[std::size_t(p)] * fct;
        }
    }

    std::vector<CoeffExpr> equations;
    for (std::size_t r = 0; r < nr; ++r)
        if (!used[r])
            for (auto& e : split_by_f(rhs[r])) equations.push_back(std::move(e));

    // solve for small letters, lowest order first
    std::vector<std::pair<std::string, CoeffExpr>> fresh;
    for (;;) {
        std::vector<CoeffExpr> live;
        for (auto& e : equations)
            if (!e.is_zero()) live.push_back(e);
        equations = std::move(live);
        if (equations.empty()) break;
        bool progressed = false;
        for (const auto& t : an.letters) {
            if (t.order > k || sv.values.count(t.name)) continue;
            for (const auto& e : equations) {
                auto v = solve_for(e, t.name);
                if (!v) continue;
                Substitution one;
                one.set(t.name, *v);
                for (auto& [name, val] : sv.values) val = one.apply(val);
                for (auto& [name, val] : fresh) val = one.apply(val);
                sv.values[t.name] = *v;
                fresh.emplace_back(t.name, *v);
                for (auto& eq : equations) eq = one.apply(eq);
                progressed = true;
                break;
            }
            if (progressed) break;
        }
        if (!progressed) break;
    }
    for (const auto& e : equations) res.unresolved.push_back({k, e});

    Substitution all = sv.subst();
    // earlier constraints may have absorbed letters solved just now
    for (auto& c : res.constraints) {
        c.value = sv.values[c.letter];
        c.display = antiderivative_display(c.value);
    }
    for (const auto& [name, val] : fresh) {
        (void)val;
        CoeffExpr v = sv.values[name];
        res.constraints.push_back({name, k, v, antiderivative_display(v)});
    }
    std::size_t first = 0;
    for (const auto& t : an.capitals)
        if (t.order < k) ++first;
    for (std::size_t c = 0; c < nc; ++c) {
        const AnsatzTerm& t = an.capitals[first + c];
        res.capitals.push_back({t.name, k, t.monomial, all.apply(rhs[std::size_t(pivot_of[c])])});
    }
    std::sort(res.constraints.begin(), res.constraints.end(), [&](const auto& x, const auto& y) {
        int ox = letter_order(an, x.letter), oy = letter_order(an, y.letter);
        return ox != oy ? ox < oy : x.letter < y.letter;
    });
    return res;
}

ClassificationResult classify(const ClassifyOptions& opt) {
    if (opt.a_value && opt.a_value->is_zero())
        throw AlgebraError("a = 0 is the dispersive branch; the classification needs a nonzero a");
    Ansatz an = build_ansatz(opt.K, opt.overrides);
    if (opt.a_value) {
        Substitution s;
        s.set("a", *opt.a_value);
        an.main = an.main.substitute(s);
    }
    ClassificationResult res;
    res.a_value = opt.a_value;
    res.ansatz = an;
    for (int k = 0; k <= opt.K; ++k) res = solve_order(an, k, res);
    if (opt.verify) {
        EpsCurrent br = poisson_bracket(res.main_current(), res.sym_current(), opt.K);
        res.verified = br.is_zero();
        if (!res.verified) throw AlgebraError("verification failed: bracket residual " + br.str());
    }
    return res;
}

EpsCurrent specialize(const ClassificationResult& result, const CoeffExpr& a_value) {
    if (a_value.is_zero()) throw AlgebraError("a = 0 is not a viscous deformation");
    EpsCurrent w = result.main_current();
    Substitution sa;
    sa.set("a", a_value);
    return w.substitute(sa);
}

EpsCurrent specialize(const CoeffExpr& a_value, int K) {
    ClassificationResult r = classify(ClassifyOptions{K + 1, a_value, false, {}});
    EpsCurrent w = r.main_current().truncated(K);
    for (int k = 2; k <= K; ++k)
        for (const auto& t : r.ansatz.letters)
            if (t.order == k && !r.constraint(t.name))
                throw AlgebraError("letter " + t.name + " left undetermined by the classification");
    return w;
}

static std::string primes(int m) {
    if (m <= 3) return std::string(std::size_t(m), '\'');
    return "^(" + std::to_string(m) + ")";
}

std::string antiderivative_display(const CoeffExpr& value) {
    if (value.is_zero()) return "0";
    CoeffExpr cur = value, best;
    int best_m = 0;
    for (int m = 1; m <= 8; ++m) {
        auto up = integrate_u(cur);
        if (!up) break;
        cur = *up;
        if (cur.is_monomial()) {
            best = cur;
            best_m = m;
        }
    }
    if (best_m == 0) return value.str();
    const auto& [mono, q] = *best.terms().begin();
    std::string body = monomial_expr(mono).str();
    std::string inner;
    if (q == 1)
        inner = body;
    else if (q.get_num() == 1)
        inner = body + "/" + q.get_den().get_str();
    else
        inner = rational_str(q) + " " + body;
    return "(" + inner + ")" + primes(best_m);
}

bool linear_in_higher_f(const CoeffExpr& c) {
    for (const auto& [m, q] : c.terms()) {
        (void)q;
        int count = 0;
        for (const auto& [s, p] : m) {
            if (s.base != "f") continue;
            if (s.deriv < 2 || p != 1) return false;
            ++count;
        }
        if (count != 1) return false;
    }
    return true;
}

json to_json(const ClassificationResult& r) {
    json j;
    j["schema"] = kClassifySchema;
    j["version"] = kVersion;
    j["order"] = r.K;
    j["a"] = r.a_value ? json(r.a_value->str()) : json("free");
    j["verified"] = r.verified;
    json caps = json::array();
    for (const auto& c : r.capitals) {
        json e;
        e["name"] = c.name;
        e["order"] = c.order;
        e["monomial"] = c.monomial.exps();
        e["value"] = c.value.str();
        e["expr"] = to_json(c.value);
        e["reference_available"] = c.order <= 4;
        caps.push_back(std::move(e));
    }
    j["capitals"] = std::move(caps);
    json cons = json::array();
    for (const auto& c : r.constraints) {
        json e;
        e["letter"] = c.letter;
        e["found_at"] = c.found_at;
        e["value"] = c.value.str();
        e["display"] = c.display;
        e["expr"] = to_json(c.value);
        cons.push_back(std::move(e));
    }
    j["constraints"] = std::move(cons);
    json un = json::array();
    for (const auto& u : r.unresolved) un.push_back({{"order", u.order}, {"equation", u.equation.str()}});
    j["unresolved"] = std::move(un);
    j["main"] = to_json(r.main_current());
    return j;
}

std::string constraint_table(const ClassificationResult& r) {
    std::ostringstream os;
    os << "order  letter  constraint\n";
    for (const auto& c : r.constraints)
        os << "  " << c.found_at << "    " << c.letter << "      " << c.letter << " = " << c.display << "\n";
    for (const auto& u : r.unresolved) os << "  " << u.order << "    ?       0 = " << u.equation.str() << "\n";
    for (const auto& c : r.capitals)
        os << "  " << c.order << "    " << c.name << (c.name.size() < 2 ? "      " : "     ") << c.name << " = "
           << c.value.str() << (c.order > 4 ? "   [no reference]" : "") << "\n";
    return os.str();
}

}  // namespace ivcl
