#include "ivcl/hierarchy.hpp"

namespace ivcl {

std::string family_name(Family f) {
    switch (f) {
        case Family::Burgers: return "burgers";
        case Family::Negative: return "negative";
        case Family::ViscousCH: return "viscousCH";
        case Family::Positive: return "positive";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    if (s == "burgers") return Family::Burgers;
    if (s == "negative") return Family::Negative;
    if (s == "viscousCH" || s == "viscous-ch" || s == "viscousch") return Family::ViscousCH;
    if (s == "positive") return Family::Positive;
    throw std::invalid_argument("unknown family: " + s);
}

namespace {

// the series as a plain vector, components past the current length are zero
std::vector<DiffPoly> comps_of(const EpsCurrent& w, int len) {
    std::vector<DiffPoly> v(static_cast<std::size_t>(len));
    for (int k = 0; k < len && k <= w.K(); ++k) v[std::size_t(k)] = w[k];
    return v;
}

int eps_degree(const std::vector<DiffPoly>& v) {
    int d = 0;
    for (int k = 0; k < int(v.size()); ++k)
        if (!v[std::size_t(k)].is_zero()) d = k;
    return d;
}

}  // namespace

EpsCurrent burgers_current(int n) {
    if (n < 0) throw std::invalid_argument("burgers_current: n must be nonnegative");
    // g -> u g + eps d g
    DiffPoly u{CoeffExpr::u()};
    std::vector<DiffPoly> g{u};
    for (int i = 0; i < n; ++i) {
        std::vector<DiffPoly> next(g.size() + 1);
        for (std::size_t k = 0; k < g.size(); ++k) {
            next[k] += u * g[k];
            next[k + 1] += g[k].dx();
        }
        g = std::move(next);
    }
    return EpsCurrent(g, n, true);
}

EpsCurrent negative_current(int n, int eps_sign) {
    if (n < 0) throw std::invalid_argument("negative_current: n must be nonnegative");
    if (eps_sign != 1 && eps_sign != -1) throw std::invalid_argument("negative_current: sign must be +1 or -1");
    // g -> g/u + sign eps d(g/u)
    std::vector<DiffPoly> g{DiffPoly(CoeffExpr(1))};
    CoeffExpr inv = CoeffExpr::u(-1);
    for (int i = 0; i < n; ++i) {
        std::vector<DiffPoly> next(g.size() + 1);
        for (std::size_t k = 0; k < g.size(); ++k) {
            DiffPoly h = inv * g[k];
            next[k + 1] += eps_sign > 0 ? h.dx() : -h.dx();
            next[k] += h;
        }
        g = std::move(next);
    }
    return EpsCurrent(g, n, true);
}

EpsCurrent viscous_ch_current(int K) {
    if (K < 0) throw std::invalid_argument("viscous_ch_current: K must be nonnegative");
    EpsCurrent w(K, false);
    w.at(0) = DiffPoly(CoeffExpr::u(2));
    for (int k = 1; k <= K; ++k) w.at(k) = DiffPoly(JetMonomial::var(k), CoeffExpr::u());
    return w;
}

EpsCurrent positive_current(int n, int K) {
    if (n < 0) throw std::invalid_argument("positive_current: n must be nonnegative");
    if (n == 0) return EpsCurrent(std::vector<DiffPoly>{DiffPoly(CoeffExpr::u())}, 0, true);
    EpsCurrent flow(std::vector<DiffPoly>{DiffPoly::jet(1)}, 0, true);
    PseudoOp R = recursion_operator();
    for (int i = 0; i < n; ++i) flow = apply_pseudo(R, flow, K);
    EpsCurrent out(K, false);
    for (int k = 0; k <= K; ++k) out.at(k) = integrate_x(flow[k]);
    return out;
}

HierarchyFlow make_flow(Family f, int n, int K, int eps_sign) {
    HierarchyFlow h;
    h.family = f;
    h.n = n;
    switch (f) {
        case Family::Burgers: h.current = burgers_current(n); break;
        case Family::Negative: h.current = negative_current(n, eps_sign); break;
        case Family::ViscousCH: h.current = viscous_ch_current(K); break;
        case Family::Positive: h.current = positive_current(n, K); break;
    }
    return h;
}

PseudoOp recursion_operator(const CoeffExpr& constant) {
    PseudoOp op;
    op.name = "R";
    op.factors = {{PseudoFactor::Dx, {}},
                  {PseudoFactor::Mul, CoeffExpr::u()},
                  {PseudoFactor::OneMinusEpsDInv, {}},
                  {PseudoFactor::DxInv, constant}};
    return op;
}

PseudoOp inverse_recursion_operator(const CoeffExpr& constant) {
    PseudoOp op;
    op.name = "R^-1";
    op.factors = {{PseudoFactor::Dx, {}},
                  {PseudoFactor::OneMinusEpsD, {}},
                  {PseudoFactor::Mul, CoeffExpr::u(-1)},
                  {PseudoFactor::DxInv, constant}};
    return op;
}

PseudoOp compose(const PseudoOp& outer, const PseudoOp& inner) {
    PseudoOp op;
    op.name = outer.name + " " + inner.name;
    op.factors = outer.factors;
    op.factors.insert(op.factors.end(), inner.factors.begin(), inner.factors.end());
    return op;
}

EpsCurrent apply_pseudo(const PseudoOp& op, const EpsCurrent& flow, int K) {
    if (K < 0) throw std::invalid_argument("apply_pseudo: K must be nonnegative");
    if (!flow.exact() && flow.K() < K) throw AlgebraError("apply_pseudo: input known only through eps^" +
                                                          std::to_string(flow.K()));
    // work with headroom so an exact input stays exact when no inverse appears
    int len = K + 1;
    if (flow.exact()) len = std::max(len, eps_degree(flow.comps()) + 1);
    bool exact = flow.exact();
    for (const auto& f : op.factors)
        if (f.kind == PseudoFactor::OneMinusEpsD) ++len;
    std::vector<DiffPoly> w = comps_of(flow, len);

    for (auto it = op.factors.rbegin(); it != op.factors.rend(); ++it) {
        const PseudoFactor& f = *it;
        switch (f.kind) {
            case PseudoFactor::Dx:
                for (auto& p : w) p = p.dx();
                break;
            case PseudoFactor::DxInv:
                for (auto& p : w) p = integrate_x(p);
                w[0] += DiffPoly(f.value);
                break;
            case PseudoFactor::Mul:
                for (auto& p : w) p = f.value * p;
                break;
            case PseudoFactor::OneMinusEpsD:
                for (int k = int(w.size()) - 1; k >= 1; --k) w[std::size_t(k)] -= w[std::size_t(k - 1)].dx();
                break;
            case PseudoFactor::OneMinusEpsDInv: {
                // sum_j eps^j d^j, cut at the working length
                std::vector<DiffPoly> out(w.size());
                for (std::size_t k = 0; k < w.size(); ++k) {
                    DiffPoly d = w[k];
                    for (std::size_t j = k; j < w.size(); ++j) {
                        out[j] += d;
                        if (j + 1 < w.size()) d = d.dx();
                    }
                }
                w = std::move(out);
                exact = false;
                break;
            }
        }
    }
    EpsCurrent r(w, int(w.size()) - 1, exact);
    return r.truncated(exact ? std::max(K, eps_degree(w)) : K);
}

EpsCurrent apply_pseudo(const PseudoOp& op, const DiffPoly& flow, int K) {
    return apply_pseudo(op, EpsCurrent(std::vector<DiffPoly>{flow}, 0, true), K);
}

namespace {

PairCheck run_pair(const std::string& label, int n, int m, const EpsCurrent& a, const EpsCurrent& b, int through) {
    PairCheck c;
    c.label = label;
    c.n = n;
    c.m = m;
    c.through = through;
    InvolutionResult r = involution_check(a, b, through);
    c.pass = r.pass;
    c.failing_order = r.failing_order;
    if (!r.pass) c.residual = r.residual.str();
    return c;
}

}  // namespace

std::vector<PairCheck> burgers_involution_suite(int nmax) {
    std::vector<PairCheck> out;
    for (int n = 0; n <= nmax; ++n)
        for (int m = n + 1; m <= nmax; ++m)
            out.push_back(run_pair("burgers", n, m, burgers_current(n), burgers_current(m), n + m));
    return out;
}

std::vector<PairCheck> negative_involution_suite(int nmax, int eps_sign) {
    std::vector<PairCheck> out;
    for (int n = 1; n <= nmax; ++n)
        for (int m = n + 1; m <= nmax; ++m)
            out.push_back(run_pair("negative", n, m, negative_current(n, eps_sign), negative_current(m, eps_sign),
                                   n + m));
    return out;
}

std::vector<PairCheck> mixed_involution_suite(int K, int nmax) {
    std::vector<PairCheck> out;
    EpsCurrent w = viscous_ch_current(K);
    for (int n = 1; n <= nmax; ++n) out.push_back(run_pair("viscousCH/negative", K, n, w, negative_current(n), K));
    return out;
}

std::vector<RecursionCheck> recursion_consistency(int nmax, int K) {
    std::vector<RecursionCheck> out;
    CoeffExpr c = CoeffExpr::symbol(const_symbol("c"));
    PseudoOp R = recursion_operator(c);
    for (int n = 2; n <= nmax; ++n) {
        RecursionCheck rc;
        rc.n = n;
        EpsCurrent got = apply_pseudo(R, negative_current(n).dx(), K);
        EpsCurrent want = negative_current(n - 1).dx().truncated(K);
        // the kernel of d_x^{-1} contributes c R(0 + 1) = c u_x
        want = EpsCurrent(comps_of(want, K + 1), K, false);
        want.at(0) += DiffPoly(JetMonomial::var(1), c);
        rc.pass = true;
        for (int k = 0; k <= K; ++k)
            if (got[k] != want[k]) {
                rc.pass = false;
                rc.detail = "order " + std::to_string(k) + ": " + (got[k] - want[k]).str();
                break;
            }
        if (rc.pass) rc.detail = "R u_{t_-" + std::to_string(n) + "} = u_{t_-" + std::to_string(n - 1) + "} + c u_x";
        out.push_back(rc);
    }
    return out;
}

json to_json(const HierarchyFlow& f) {
    json j;
    j["schema"] = "ivcl.hierarchy-flow/1";
    j["version"] = kVersion;
    j["family"] = family_name(f.family);
    j["n"] = f.n;
    j["exact"] = f.exact();
    j["current"] = to_json(f.current);
    return j;
}

}  // namespace ivcl
