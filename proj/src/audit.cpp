#include "ivcl/audit.hpp"

#include "ivcl/asymptotics.hpp"
#include "ivcl/classify.hpp"
#include "ivcl/critical.hpp"
#include "ivcl/hierarchy.hpp"
#include "ivcl/miura.hpp"
#include "ivcl/parse.hpp"
#include "ivcl/pdesim.hpp"
#include "ivcl/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

namespace ivcl {

namespace {

using Group = std::vector<AuditEntry>;

AuditEntry entry(std::string id, std::string anchor, std::string method, bool ok, std::string summary,
                 json data = json::object(), const char* fail_status = "refuted") {
    return {std::move(id), std::move(anchor), std::move(method), ok ? "verified" : fail_status, std::move(summary),
            std::move(data)};
}

json pair_checks(const std::vector<PairCheck>& v, bool& all) {
    json a = json::array();
    all = !v.empty();
    for (const auto& p : v) {
        all = all && p.pass;
        json j = {{"label", p.label}, {"n", p.n}, {"m", p.m}, {"through", p.through}, {"pass", p.pass}};
        if (!p.pass) j["failing_order"] = p.failing_order, j["residual"] = p.residual;
        a.push_back(j);
    }
    return a;
}

double linf(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---- core algebra ----

Group algebra_group(const AuditOptions&) {
    bool all = false;
    json d = pair_checks(burgers_involution_suite(4), all);
    return {entry("bracket.burgers-involution", "algebra.bracket", "symbolic", all,
                  "Burgers currents (u + eps d)^n u pairwise in involution, 0 <= n <= m <= 4, exact",
                  {{"pairs", d}})};
}

// ---- miura ----

// u^2 + eps a u_x + random graded tail with small rational coefficients and u-powers
EpsCurrent random_head_current(std::mt19937& rng, int K) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 4), coin(0, 2), up(0, 2);
    EpsCurrent w(K, false);
    w.at(0) = DiffPoly(CoeffExpr::u(2));
    w.at(1) = DiffPoly(JetMonomial::var(1), CoeffExpr::symbol(free_symbol("a")));
    for (int k = 2; k <= K; ++k) {
        DiffPoly p;
        for (const auto& m : monomials_of_degree(k)) {
            if (coin(rng) == 0) continue;
            Rational q(num(rng), den(rng));
            q.canonicalize();
            p.add_term(m, CoeffExpr(q) * CoeffExpr::u(up(rng)));
        }
        w.at(k) = p;
    }
    return w;
}

Group miura_group(const AuditOptions& opt) {
    Group g;
    std::mt19937 rng(opt.seed);
    const int K = 5;
    int ok = 0, no_ux = 0, replay = 0, steps = 0;
    for (int t = 0; t < opt.random_samples; ++t) {
        EpsCurrent w = random_head_current(rng, K);
        auto nf = normal_form(w, K);
        bool free_of_ux = true;
        for (int k = 2; k <= K; ++k) free_of_ux = free_of_ux && nf.omega[k].partial(1).is_zero();
        bool rep = apply_miura(w, nf.seq, K) == nf.omega;
        no_ux += free_of_ux;
        replay += rep;
        steps += int(nf.seq.steps.size());
        ok += free_of_ux && rep && is_normal_form(nf.omega, K);
    }
    g.push_back(entry("miura.normal-form-suite", "miura.normal-form", "symbolic", ok == opt.random_samples,
                      "random currents through eps^5 reduce to normal form (no u_x dependence at orders 2..5) "
                      "and replaying the Miura sequence reproduces it",
                      {{"samples", opt.random_samples},
                       {"seed", opt.seed},
                       {"ux_free", no_ux},
                       {"replay_exact", replay},
                       {"miura_steps", steps}}));

    // delta lowers the ranking: every term of delta(g) ranks below g u_x
    std::vector<JetMonomial> pool;
    for (int d = 1; d <= 7; ++d)
        for (const auto& m : monomials_of_degree(d)) pool.push_back(m);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    int good = 0;
    for (int t = 0; t < opt.random_samples; ++t) {
        const JetMonomial& m = pool[pick(rng)];
        bool lower = true;
        const DiffPoly dl = delta_operator(DiffPoly(m));
        for (const auto& [r, c] : dl.terms()) {
            (void)c;
            lower = lower && rank_compare(r, m * JetMonomial::var(1)) < 0;
        }
        good += lower;
    }
    g.push_back(entry("miura.delta-ranking", "miura.normal-form", "symbolic", good == opt.random_samples,
                      "delta(g) ranks strictly below g u_x for random generator monomials of degree <= 7",
                      {{"samples", opt.random_samples}, {"holds", good}, {"pool", pool.size()}}));
    return g;
}

// ---- classification ----

Group classify_group(const AuditOptions&) {
    Group g;
    const auto ref = classify(ClassifyOptions{5, std::nullopt, true, reference_basis()});
    const auto def = classify(5);

    json caps = json::array(), misprints = json::array();
    bool corrected_ok = ref.verified, literal_refuted = true;
    for (const auto& e : reference::capitals()) {
        const SolvedCapital* c = ref.capital(e.name);
        bool match = c && c->value == parse_coeff(e.corrected);
        corrected_ok = corrected_ok && match;
        caps.push_back({{"name", e.name}, {"match", match}});
        if (e.literal != e.corrected) {
            bool lit = c && c->value == parse_coeff(e.literal);
            literal_refuted = literal_refuted && !lit;
            misprints.push_back({{"name", e.name},
                                 {"printed", e.literal},
                                 {"computed", c ? c->value.str() : ""},
                                 {"printed_matches", lit},
                                 {"note", e.note}});
        }
    }
    g.push_back(entry("classify.capitals", "classify.coefficients", "symbolic", corrected_ok,
                      "A, B1..B2, C1..C3, D1..D5 reproduced exactly (d2 on u_x u_xxx; misprints corrected)",
                      {{"coefficients", caps}}));
    g.push_back(entry("classify.capital-misprints", "classify.coefficients", "symbolic", !literal_refuted,
                      "printed D1, D2, D4 differ from the computed coefficients; the corrections are single-factor "
                      "misprints",
                      {{"misprints", misprints}}));

    json cons = json::array();
    bool cons_ok = ref.unresolved.empty();
    for (const auto& e : reference::constraints()) {
        const LetterConstraint* c = ref.constraint(e.letter);
        bool match = c && c->value == parse_coeff(e.antiderivative).du(e.derivs);
        cons_ok = cons_ok && match;
        cons.push_back({{"letter", e.letter}, {"value", c ? c->display : ""}, {"found_at", c ? c->found_at : -1},
                        {"match", match}});
    }
    const LetterConstraint* d2 = def.constraint("d2");
    bool rescaled = d2 && d2->value == parse_coeff(reference::constraints()[3].antiderivative) * Rational(-3, 4);
    g.push_back(entry("classify.constraints", "classify.constraints", "symbolic", cons_ok && rescaled,
                      "b1 = (a^2/2!)', c1 = (a^3/3!)'', d1 = (a^4/4!)''' and d2 reproduced; with d2 on u_xx^2 the "
                      "d2 constraint is -3/4 times the displayed one",
                      {{"constraints", cons}, {"d2_on_uxx2_factor", "-3/4"}, {"d2_factor_holds", rescaled}}));

    json e5 = json::array();
    int n5 = 0;
    for (const auto& c : def.capitals)
        if (c.order == 5) {
            ++n5;
            e5.push_back({{"name", c.name}, {"terms", c.value.terms().size()}});
        }
    g.push_back({"classify.E1-E7", "classify.eps5", "symbolic", "unverifiable",
                 "unverifiable: E1-E7 are computed and satisfy the bracket through eps^5, but no reference values "
                 "exist to compare against",
                 {{"computed", n5}, {"bracket_verified", def.verified}, {"capitals", e5}}});

    // every determined letter is a function of a alone
    bool only_a = def.unresolved.empty();
    json letters = json::array();
    for (const auto& c : def.constraints) {
        bool pure = true;
        for (const auto& s : c.value.symbols()) pure = pure && s.base == "a";
        only_a = only_a && pure;
        letters.push_back({{"letter", c.letter}, {"found_at", c.found_at}, {"depends_only_on_a", pure}});
    }
    g.push_back({"classify.parametrization", "classify.parametrization", "symbolic", "measured",
                 std::string("through eps^5 every letter fixed by the bracket is a differential polynomial in a(u) "
                             "and no equation is left unresolved: ") +
                     (only_a ? "consistent" : "inconsistent") + " with unique parametrization by a(u); no proof",
                 {{"through", 5}, {"letters", letters}, {"consistent", only_a}}});
    return g;
}

// ---- hierarchy ----

Group hierarchy_group(const AuditOptions&) {
    Group g;
    bool all = false;
    json d = pair_checks(negative_involution_suite(3), all);
    g.push_back(entry("hierarchy.negative-involution", "hierarchy.negative", "symbolic", all,
                      "negative flows 1 <= n < m <= 3 in involution, exact", {{"pairs", d}}));
    d = pair_checks(mixed_involution_suite(5, 2), all);
    g.push_back(entry("hierarchy.mixed-involution", "hierarchy.negative", "symbolic", all,
                      "viscous CH current (K = 5) commutes with the negative flows n <= 2 through eps^5",
                      {{"pairs", d}}));

    json rc = json::array();
    bool rok = true;
    for (const auto& r : recursion_consistency(3, 5)) {
        rok = rok && r.pass;
        rc.push_back({{"n", r.n}, {"pass", r.pass}, {"detail", r.detail}});
    }
    g.push_back(entry("hierarchy.recursion", "hierarchy.recursion-operators", "symbolic", rok,
                      "R applied to the t_-n flow gives the t_-(n-1) flow plus c u_x (n = 2, 3, through eps^5)",
                      {{"checks", rc}}));

    DirectionAudit a = audit_linear_reduction(5);
    g.push_back(entry("hierarchy.linear-reduction", "hierarchy.linear-reduction", "symbolic",
                      a.statement_exact && a.proof_exact, a.verdict,
                      {{"K", a.K},
                       {"statement_exact", a.statement_exact},
                       {"proof_exact", a.proof_exact},
                       {"statement_residual", a.statement_residual.str()},
                       {"proof_residual", a.proof_residual.str()},
                       {"proof_last_line_minus_normal_form", a.proof_final_vs_normal.str()}}));

    EpsCurrent p2 = positive_current(2, 4);
    auto kg = involution_check(p2, viscous_ch_current(4), 4);
    g.push_back({"hierarchy.klein-gordon", "hierarchy.klein-gordon", "symbolic", "measured",
                 std::string("second positive flow R^2 u_x ") + (kg.pass ? "commutes" : "does not commute") +
                     " with the viscous CH current through eps^4; the linearization itself is not reproduced",
                 {{"through", 4}, {"pass", kg.pass}, {"failing_order", kg.failing_order}}});
    return g;
}

// ---- numerics (one task: FFTW planning is not thread safe) ----

Group numeric_group(const AuditOptions& opt) {
    const Tolerances& tol = opt.tol;
    using namespace sim;
    Group g;

    // Cole-Hopf linearization of Burgers
    {
        BurgersConfig bc;
        SpectralGrid grid(bc.N, bc.L);
        Field u0 = named_datum("burgers-single").sample(grid, bc.eps);
        Field u = burgers_spectral(u0, bc);
        double e = 0;
        for (int j = 0; j < bc.N; ++j)
            e = std::max(e, std::abs(u[std::size_t(j)] - burgers_single_mode(grid.x(j), bc.t_end, bc.eps, 1, 0.1)));
        g.push_back(entry("hierarchy.cole-hopf", "hierarchy.linearization", "numeric", e <= tol.burgers,
                          "pseudospectral Burgers agrees with the Cole-Hopf heat-equation solution",
                          {{"N", bc.N}, {"eps", bc.eps}, {"t", bc.t_end}, {"linf_error", e}, {"tol", tol.burgers}}));
    }

    auto cfg = [](const char* d) {
        SimConfig c;
        c.datum = named_datum(d);
        return c;
    };

    // closed-form P at t = 0
    for (int which = 1; which <= 3; ++which) {
        std::string name = "v" + std::to_string(which);
        PSystem s(cfg(name.c_str()));
        Field v = s.config().datum.sample(s.grid());
        Field P = s.solve_P(v);
        double lit = 0, cor = 0;
        for (int j = 0; j < s.grid().N(); ++j) {
            double x = s.grid().x(j);
            lit = std::max(lit, std::abs(P[std::size_t(j)] - reference::initial_P(which, x, false)));
            cor = std::max(cor, std::abs(P[std::size_t(j)] - reference::initial_P(which, x, true)));
        }
        bool ok = lit <= 1e-10;
        g.push_back(entry("pdesim.initial-P" + std::to_string(which), "pdesim.initial-data", "numeric", ok,
                          ok ? "printed P" + std::to_string(which) + " solves (1 - eps d) P = v^2/2"
                             : "printed P" + std::to_string(which) +
                                   " does not solve (1 - eps d) P = v^2/2; the corrected form does",
                          {{"printed_linf", lit}, {"corrected_linf", cor}, {"tol", 1e-10}}));
    }

    auto peak = [](const SimResult& r) {
        double p = 0;
        for (const auto& x : r.diagnostics) p = std::max(p, x.max_slope);
        return p;
    };

    SimResult r1 = integrate(cfg("v1")), r2 = integrate(cfg("v2"));
    {
        json runs = json::object();
        bool cons = true, damp = true;
        for (const auto* r : {&r1, &r2}) {
            double m0 = r->diagnostics.front().mass, dm = 0, cr = 0, amax = 0;
            for (const auto& x : r->diagnostics) {
                dm = std::max(dm, std::abs(x.mass - m0) / std::abs(m0));
                cr = std::max(cr, x.constraint);
                amax = std::max(amax, x.osc_amp);
            }
            double last = r->diagnostics.back().osc_amp;
            cons = cons && !r->blowup && dm <= tol.mass && cr <= tol.constraint;
            damp = damp && last < 0.5 * amax;
            runs[r == &r1 ? "v1" : "v2"] = {{"mass_drift", dm},   {"constraint", cr},      {"osc_amp_max", amax},
                                            {"osc_amp_end", last}, {"peak_slope", peak(*r)}, {"t_end", r->last_valid_t}};
        }
        g.push_back(entry("pdesim.aux-system", "pdesim.aux-system", "numeric", cons,
                          "auxiliary-P system conserves mass and keeps (1 - eps d) P = v^2/2 within tolerance for v1, v2",
                          runs));
        g.push_back(entry("pdesim.damping", "pdesim.behaviour", "numeric", damp,
                          "oscillations of v1 and v2 decay: amplitude at t = 12 below half its running maximum", runs));
    }
    {
        double p1 = peak(r1), p2 = peak(r2);
        double s1 = r1.diagnostics.front().max_slope, s2 = r2.diagnostics.front().max_slope;
        g.push_back({"pdesim.steepening", "pdesim.behaviour", "numeric", "measured",
                     std::string("longer wavelength steepens more relative to its initial slope (") +
                         (p1 / s1 > p2 / s2 ? "holds" : "fails") + "); absolute peak slope of v1 " +
                         (p1 > p2 ? "exceeds" : "stays below") + " that of v2 at eps = 1",
                     {{"v1_peak", p1}, {"v2_peak", p2}, {"v1_relative", p1 / s1}, {"v2_relative", p2 / s2}}});
    }
    {
        SimResult r3 = integrate(cfg("v3"));
        double s0 = r3.diagnostics.front().max_slope, p = peak(r3);
        g.push_back(entry("pdesim.v3-blowup", "pdesim.behaviour", "numeric", r3.blowup && p > 10 * s0,
                          "odd datum v3 steepens past 10x its initial slope and raises the blow-up flag",
                          {{"blowup", r3.blowup}, {"reason", r3.reason}, {"t", r3.last_valid_t}, {"peak_slope", p},
                           {"initial_slope", s0}}));
    }
    {
        PSystem s(cfg("v1"));
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> U(-1, 1);
        double worst = 0;
        for (int trial = 0; trial <= 20; ++trial) {
            Field v = s.config().datum.sample(s.grid());
            if (trial)
                for (int k = 1; k <= s.grid().N() / 3; ++k) {
                    double a = U(rng) / k, b = U(rng) / k, kk = s.grid().wavenumber(k);
                    for (int j = 0; j < s.grid().N(); ++j)
                        v[std::size_t(j)] += a * std::cos(kk * s.grid().x(j)) + b * std::sin(kk * s.grid().x(j));
                }
            Field a = s.rhs(v), b = s.nonlocal_flux_rhs(v);
            double scale = 0;
            for (double x : a) scale = std::max(scale, std::abs(x));
            worst = std::max(worst, linf(a, b) / scale);
        }
        g.push_back(entry("pdesim.nonlocal-flux", "pdesim.nonlocal-flux", "numeric", worst <= tol.nonlocal,
                          "nonlocal flux form of the rhs agrees with the auxiliary-P form on smooth states",
                          {{"states", 21}, {"max_relative", worst}, {"tol", tol.nonlocal}}));
    }
    return g;
}

// ---- asymptotics ----

Group asymptotics_group(const AuditOptions&) {
    Group g;
    QuasiMiura q = quasi_miura_burgers(3);
    {
        bool zero = true;
        for (const auto& r : formal_solution_residual(q, 3)) zero = zero && r.is_zero();
        QuasiMiura ql = quasi_miura_linear(2);
        for (const auto& r : formal_solution_residual(ql, 2)) zero = zero && r.is_zero();
        g.push_back(entry("asymptotics.transport", "asymptotics.transport", "symbolic", zero,
                          "each correction v^n solves its transport equation; the source is the eps^n part of "
                          "d_x omega(v), i.e. sum over i + j = n of v^i v^j",
                          {{"burgers_through", 3}, {"linear_through", 2}}));
    }
    {
        AlphaTable a = burgers_alpha(3), lit = burgers_alpha(3, true);
        bool ok = true;
        for (int n = 1; n <= 3; ++n) ok = ok && alpha_term(a, n) == q.terms[std::size_t(n)].hodo;
        bool lit_ok = alpha_term(lit, 2) == q.terms[2].hodo;
        g.push_back(entry("asymptotics.alpha-recursion", "asymptotics.alpha", "symbolic", lit_ok && ok,
                          "printed last row 3n (f'')^2 alpha_{n-1,3n-4} disagrees with the transport solution from "
                          "n = 2; (3n-4)(3n-2) reproduces it",
                          {{"corrected_matches_through", ok ? 3 : 0},
                           {"printed_alpha_2_5", lit[2][3].str()},
                           {"computed_alpha_2_5", a[2][3].str()}}));
    }
    {
        bool low = true;
        json t = json::array();
        for (int n = 1; n <= 2; ++n) {
            bool m = q.terms[std::size_t(n)].jets == reference::burgers_quasi_miura(n);
            low = low && m;
            t.push_back({{"order", n}, {"match", m}, {"computed", q.terms[std::size_t(n)].jets.str()}});
        }
        g.push_back(entry("asymptotics.qm-burgers-low", "asymptotics.quasi-miura", "symbolic", low,
                          "Burgers quasi-Miura eps^1 and eps^2 terms match exactly", {{"terms", t}}));
        const JetRational& v3 = q.terms[3].jets;
        bool printed = v3 == reference::burgers_quasi_miura(3);
        bool corrected = v3 == reference::burgers_quasi_miura_corrected(3);
        QuasiMiura alt = q;
        alt.terms[3].hodo = eliminate_forward(reference::burgers_quasi_miura(3));
        bool printed_solves = formal_solution_residual(alt, 3)[3].is_zero();
        g.push_back(entry("asymptotics.qm-burgers-eps3", "asymptotics.quasi-miura", "symbolic", printed,
                          "printed eps^3 bracket lacks -u_xx^4/(2 u_x^6); the printed term does not solve the third "
                          "transport equation",
                          {{"computed", v3.str()},
                           {"printed", reference::burgers_quasi_miura(3).str()},
                           {"corrected_matches", corrected},
                           {"printed_solves_transport", printed_solves}}));
    }
    {
        QuasiMiura ql = quasi_miura_linear(2);
        bool ok = true;
        for (int n = 1; n <= 2; ++n) ok = ok && ql.terms[std::size_t(n)].jets == reference::linear_quasi_miura(n);
        g.push_back(entry("asymptotics.qm-linear", "asymptotics.quasi-miura", "symbolic", ok && ql.terms[1].jets.has_log(),
                          "a(u) = u quasi-Miura eps^1, eps^2 terms match, including the ln u_x structure",
                          {{"eps1", ql.terms[1].jets.str()}, {"eps2", ql.terms[2].jets.str()}}));
    }
    {
        json runs = json::array();
        bool ok = true;
        for (int K = 1; K <= 3; ++K) {
            auto r = deformed_hodograph_residual(K, AMode::Constant);
            ok = ok && r.pass();
            runs.push_back({{"a", "constant"}, {"K", K}, {"vanishes_through", r.vanishes_through}});
        }
        auto r = deformed_hodograph_residual(2, AMode::Linear);
        ok = ok && r.pass();
        runs.push_back({{"a", "linear"}, {"K", 2}, {"vanishes_through", r.vanishes_through}});
        g.push_back(entry("asymptotics.deformed-hodograph", "asymptotics.hodograph", "symbolic", ok,
                          "deformed hodograph residual vanishes through eps^K (constant a, K <= 3; a = u with the "
                          "F correction, K = 2)",
                          {{"runs", runs}}));
    }
    {
        const CoeffExpr f2 = CoeffExpr::free("f", 2);
        HodoExpr p1 = transport_p(HodoExpr(f2, 3));
        CoeffExpr g1 = initial_datum_fix(p1);
        HodoExpr v1 = transport_solve(HodoExpr(f2, 3), g1);
        SymbolEval ev = driver_values(parse_coeff("u^3 + 2 u"));
        double worst = 0;
        for (int i = -50; i <= 50; ++i) {
            double u = hodograph_solve([](double w) { return w * w * w + 2 * w; }, 0.1 * i, 0.0, HodoSign::Plus);
            worst = std::max(worst, std::abs(eval_hodo(v1, u, -1 / (3 * u * u + 2), ev)));
        }
        g.push_back(entry("asymptotics.initial-datum", "asymptotics.initial-datum", "numeric", worst <= 1e-12,
                          "g_1 = -p_1(u, -1/f') makes the eps^1 correction vanish at t = 0 (f = u^3 + 2u)",
                          {{"g1", g1.str()}, {"max_abs_at_t0", worst}}));
    }
    return g;
}

// ---- critical ----

Group critical_group(const AuditOptions& opt) {
    const Tolerances& tol = opt.tol;
    using namespace crit;
    Group g;
    {
        Driver d{[](double u) { return u * u * u - 3 * u * u + 5 * u + std::exp(u); },
                 [](double u) { return 3 * u * u - 6 * u + 5 + std::exp(u); },
                 [](double u) { return 6 * u - 6 + std::exp(u); }, [](double u) { return 6 + std::exp(u); }};
        auto cp = find_catastrophe(d, -2, 2);
        double r1 = std::abs(d.f2(cp.u0)), r2 = std::abs(2 * cp.t0 - d.f1(cp.u0)),
               r3 = std::abs(cp.x0 + 2 * cp.u0 * cp.t0 - d.f(cp.u0));
        g.push_back(entry("critical.catastrophe", "critical.catastrophe", "numeric",
                          std::max({r1, r2, r3}) <= 1e-12 && cp.f3 > 0,
                          "catastrophe point solves f'' = 0, 2t = f', x + 2ut = f with f''' > 0",
                          {{"u0", cp.u0}, {"t0", cp.t0}, {"x0", cp.x0}, {"residual", std::max({r1, r2, r3})}}));
    }
    {
        double worst = 0;
        for (double a0 : {0.5, 1.0, 3.0})
            for (double f3 : {1.0, 6.0, 11.0}) {
                auto s = critical_scales(a0, f3);
                worst = std::max(worst, std::abs(s.s2 - s.s1 * s.s1 / (2 * a0)) / s.s2);
                worst = std::max(worst, std::abs(s.s3 - a0 / s.s1) / s.s3);
            }
        g.push_back(entry("critical.scaling", "critical.scaling", "numeric", worst <= 1e-14,
                          "rescaling x ~ eps^{3/4}, t ~ eps^{1/2}, u ~ eps^{1/4} is self-consistent",
                          {{"sigma", CriticalScales::sigma}, {"beta", CriticalScales::beta}, {"q", CriticalScales::q},
                           {"max_relative", worst}}));
    }
    {
        double want = 2 * std::tgamma(1.25) / std::sqrt(2.0), got = pearcey(0, 0).P;
        double rel = std::abs(got - want) / want;
        g.push_back(entry("critical.pearcey-origin", "critical.pearcey", "numeric", rel <= tol.pearcey_origin,
                          "Pearcey integral at the origin matches 2^{-3/2} Gamma(1/4)",
                          {{"value", got}, {"closed_form", want}, {"relative", rel}}));
    }
    {
        double lin = 0, nl = 0;
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < 25; ++j) {
                double X = -3 + 0.25 * i, T = -3 + 0.25 * j;
                lin = std::max(lin, linear_ode_residual(pearcey_jet(X, T), X, T));
                nl = std::max(nl, nonlinear_ode_residual(pearcey_log_derivative(X, T), X, T));
            }
        double ctrl_lin = linear_ode_residual({std::exp(2.0), std::exp(2.0), std::exp(2.0), std::exp(2.0)}, 2, 0);
        double ctrl_nl = nonlinear_ode_residual(Jet2{}, 2, 0.7);
        bool ok = lin <= tol.ode_linear && nl <= tol.ode_nonlinear && ctrl_lin > 0.2 && ctrl_nl > 0.2;
        g.push_back(entry("critical.odes", "critical.odes", "numeric", ok,
                          "Pearcey integral solves the linear ODE and U = P_X/P the nonlinear one on [-3,3]^2; "
                          "negative controls fail",
                          {{"linear_max", lin}, {"nonlinear_max", nl}, {"control_linear", ctrl_lin},
                           {"control_nonlinear", ctrl_nl}, {"tol_linear", tol.ode_linear}, {"tol_nonlinear", tol.ode_nonlinear}}));
    }
    {
        auto rows = audit_general_solution();
        double basis_lin = 1e300, basis_comb = 0;
        for (int i = 0; i < 3; ++i) {
            basis_lin = std::min(basis_lin, rows[std::size_t(i)].linear_residual);
            basis_comb = std::max(basis_comb, rows[std::size_t(i)].combined_residual);
        }
        g.push_back({"critical.0F2-general-solution", "critical.general-solution", "numeric", "measured",
                     std::string("measured: the displayed 0F2 functions of X + T ") +
                         (basis_comb <= 1e-10 ? "solve" : "do not solve") + " w_XXX = (X + T) w and " +
                         (basis_lin > 0.1 ? "do not solve" : "solve") +
                         " w_XXX - T w_X = X w; the Pearcey integral does the opposite",
                     {{"box", 3}, {"rows", to_json(rows)}}});
    }
    {
        auto r = universality_experiment();
        bool ok = r.monotone && std::abs(r.exponent - 0.25) <= 0.05;
        g.push_back({"critical.universality", "critical.profile", "numeric", ok ? "measured" : "refuted",
                     "Burgers near a cubic catastrophe approaches the Pearcey profile: deviation decreases with eps, "
                     "amplitude exponent near 1/4",
                     to_json(r)});
    }
    return g;
}

struct GroupSpec {
    const char* anchor;
    std::function<Group(const AuditOptions&)> run;
};

}  // namespace

const std::vector<std::string>& audit_anchors() {
    static const std::vector<std::string> a = {
        "algebra.bracket",           "miura.normal-form",      "classify.coefficients",
        "classify.constraints",      "classify.eps5",          "classify.parametrization",
        "hierarchy.linear-reduction", "hierarchy.negative",    "hierarchy.recursion-operators",
        "hierarchy.linearization",   "hierarchy.klein-gordon", "pdesim.aux-system",
        "pdesim.initial-data",       "pdesim.behaviour",       "pdesim.nonlocal-flux",
        "asymptotics.transport",     "asymptotics.alpha",      "asymptotics.quasi-miura",
        "asymptotics.hodograph",     "asymptotics.initial-datum", "critical.catastrophe",
        "critical.scaling",          "critical.odes",          "critical.general-solution",
        "critical.pearcey",          "critical.profile"};
    return a;
}

AuditReport audit_all(const AuditOptions& opt) {
    const std::vector<GroupSpec> groups = {
        {"algebra.bracket", algebra_group},     {"miura.normal-form", miura_group},
        {"classify.coefficients", classify_group}, {"hierarchy.negative", hierarchy_group},
        {"pdesim.behaviour", numeric_group},    {"asymptotics.quasi-miura", asymptotics_group},
        {"critical.odes", critical_group}};

    auto guarded = [&opt](const GroupSpec& s) {
        try {
            return s.run(opt);
        } catch (const std::exception& e) {
            return Group{{std::string(s.anchor) + ".error", s.anchor, "none", "error", e.what(), json::object()}};
        }
    };

    // groups are independent; results are assembled in a fixed order
    std::vector<std::future<Group>> jobs;
    for (const auto& s : groups) jobs.push_back(std::async(std::launch::async, guarded, std::cref(s)));
    AuditReport r;
    for (auto& j : jobs)
        for (auto& e : j.get()) r.entries.push_back(std::move(e));
    return r;
}

const AuditEntry* AuditReport::find(const std::string& id) const {
    for (const auto& e : entries)
        if (e.id == id) return &e;
    return nullptr;
}

int AuditReport::count(const std::string& status) const {
    return int(std::count_if(entries.begin(), entries.end(), [&](const AuditEntry& e) { return e.status == status; }));
}

json to_json(const AuditReport& r) {
    json j = {{"schema", "ivcl.audit/1"}, {"version", kVersion}};
    json s = json::object();
    for (const char* st : {"verified", "refuted", "measured", "unverifiable", "error"}) s[st] = r.count(st);
    j["counts"] = s;
    json e = json::array();
    for (const auto& x : r.entries)
        e.push_back({{"id", x.id},
                     {"anchor", x.anchor},
                     {"method", x.method},
                     {"status", x.status},
                     {"summary", x.summary},
                     {"data", x.data}});
    j["entries"] = e;
    return j;
}

std::string to_text(const AuditReport& r) {
    std::ostringstream o;
    std::size_t w = 0;
    for (const auto& e : r.entries) w = std::max(w, e.id.size());
    for (const auto& e : r.entries) {
        o << e.status;
        for (std::size_t i = e.status.size(); i < 13; ++i) o << ' ';
        o << e.id;
        for (std::size_t i = e.id.size(); i < w + 2; ++i) o << ' ';
        o << '[' << e.anchor << "] " << e.summary << '\n';
    }
    o << r.entries.size() << " entries: " << r.count("verified") << " verified, " << r.count("refuted") << " refuted, "
      << r.count("measured") << " measured, " << r.count("unverifiable") << " unverifiable, " << r.count("error")
      << " errors\n";
    return o.str();
}

}  // namespace ivcl
