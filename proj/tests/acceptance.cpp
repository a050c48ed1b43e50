// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include "ivcl/asymptotics.hpp"
#include "ivcl/audit.hpp"
#include "ivcl/classify.hpp"
#include "ivcl/critical.hpp"
#include "ivcl/hierarchy.hpp"
#include "ivcl/miura.hpp"
#include "ivcl/parse.hpp"
#include "ivcl/pdesim.hpp"
#include "ivcl/reference.hpp"
#include "ivcl/tolerances.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace ivcl;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) ++failures;
    std::cout << id << ' ' << (ok ? "PASS" : "FAIL") << "  " << what << "  [" << detail << "]" << std::endl;
}

// a criterion that throws is a failure, not a crash
void run(const char* id, const std::string& what, const std::function<std::pair<bool, std::string>()>& f) {
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto [ok, detail] = f();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream d;
        d << detail << "; " << std::fixed;
        d.precision(1);
        d << s << " s";
        report(id, ok, what, d.str());
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

std::string sci(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", x);
    return b;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

double linf(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

int main() {
    const Tolerances tol = tolerance_profile("default");

    run("AC1", "classification goldens through eps^5", [] {
        auto r = classify(ClassifyOptions{5, std::nullopt, true, reference_basis()});
        int match = 0, total = 0, misprints = 0;
        for (const auto& e : reference::capitals()) {
            ++total;
            const SolvedCapital* c = r.capital(e.name);
            if (c && c->value == parse_coeff(e.corrected)) ++match;
            if (e.literal != e.corrected) ++misprints;
        }
        int cons = 0;
        for (const auto& e : reference::constraints()) {
            const LetterConstraint* c = r.constraint(e.letter);
            if (c && c->value == parse_coeff(e.antiderivative).du(e.derivs)) ++cons;
        }
        auto d = classify(5);
        bool rescaled = d.constraint("d2") &&
                        d.constraint("d2")->value == parse_coeff(reference::constraints()[3].antiderivative) * Rational(-3, 4);
        bool ok = r.verified && match == total && cons == 4 && rescaled;
        return std::pair{ok, std::to_string(match) + "/" + std::to_string(total) + " capitals, " + std::to_string(cons) +
                                 "/4 constraints exact in the u_x u_xxx basis (" + std::to_string(misprints) +
                                 " single-factor misprints in D1, D2, D4 corrected); d2 is -3/4 of it in the u_xx^2 "
                                 "basis: " + yes(rescaled)};
    });

    run("AC2", "involution suites", [] {
        int pass = 0, total = 0;
        for (const auto& v : {burgers_involution_suite(4), negative_involution_suite(3), mixed_involution_suite(5, 2)})
            for (const auto& p : v) {
                ++total;
                pass += p.pass;
            }
        return std::pair{pass == total, std::to_string(pass) + "/" + std::to_string(total) +
                                            " pairs (Burgers n,m <= 4; negative n,m <= 3; viscous CH K = 5 x negative "
                                            "n <= 2 through eps^5)"};
    });

    AuditReport audit;
    run("AC3", "normal-form property suite and delta ranking", [&] {
        AuditOptions o;
        o.random_samples = 100;
        audit = audit_all(o);
        const AuditEntry* a = audit.find("miura.normal-form-suite");
        const AuditEntry* b = audit.find("miura.delta-ranking");
        bool ok = a && b && a->status == "verified" && b->status == "verified";
        std::string d = a ? "normal form " + a->data["ux_free"].dump() + "/100 u_x-free, replay " +
                                a->data["replay_exact"].dump() + "/100"
                          : "missing";
        if (b) d += "; delta lemma " + b->data["holds"].dump() + "/100";
        return std::pair{ok, d};
    });

    run("AC4", "linear-invariant reduction direction through eps^5", [] {
        DirectionAudit a = audit_linear_reduction(5);
        bool definite = a.verdict.rfind("verified as stated", 0) == 0 ||
                        a.verdict.rfind("verified with corrected statement", 0) == 0;
        return std::pair{definite && a.statement_exact,
                         a.verdict.substr(0, a.verdict.find(':')) + "; statement residual " +
                             (a.statement_residual.is_zero() ? "0" : a.statement_residual.str()) +
                             "; proof last line minus normal form " + a.proof_final_vs_normal.str()};
    });

    run("AC5", "quasi-Miura goldens and deformed hodograph", [] {
        QuasiMiura q = quasi_miura_burgers(3);
        bool e1 = q.terms[1].jets == reference::burgers_quasi_miura(1);
        bool e2 = q.terms[2].jets == reference::burgers_quasi_miura(2);
        bool e3 = q.terms[3].jets == reference::burgers_quasi_miura(3);
        bool e3c = q.terms[3].jets == reference::burgers_quasi_miura_corrected(3);
        QuasiMiura ql = quasi_miura_linear(2);
        bool l = ql.terms[1].jets == reference::linear_quasi_miura(1) &&
                 ql.terms[2].jets == reference::linear_quasi_miura(2) && ql.terms[2].jets.has_log();
        bool hc = true;
        for (int K = 1; K <= 3; ++K) hc = hc && deformed_hodograph_residual(K, AMode::Constant).pass();
        bool hl = deformed_hodograph_residual(2, AMode::Linear).pass();
        std::string d = std::string("Burgers eps^1 ") + (e1 ? "match" : "differ") + ", eps^2 " + (e2 ? "match" : "differ") +
                        ", eps^3 " + (e3 ? "match" : "differs from the printed bracket by d_x(u_xx^4/(2 u_x^6))") +
                        (e3 ? "" : std::string("; corrected form matches: ") + yes(e3c)) + "; a = u eps^1, eps^2 " +
                        (l ? "match" : "differ") + "; hodograph constant a K <= 3 " + (hc ? "vanish" : "fail") +
                        ", a = u K = 2 " + (hl ? "vanish" : "fail");
        return std::pair{e1 && e2 && e3 && l && hc && hl, d};
    });

    run("AC6", "pseudospectral Burgers against Cole-Hopf", [&] {
        sim::BurgersConfig bc;
        sim::SpectralGrid g(bc.N, bc.L);
        auto u0 = sim::named_datum("burgers-single").sample(g, bc.eps);
        double e = 0;
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            bc.t_end = t;
            auto u = sim::burgers_spectral(u0, bc);
            for (int j = 0; j < bc.N; ++j)
                e = std::max(e, std::abs(u[std::size_t(j)] - sim::burgers_single_mode(g.x(j), t, bc.eps, 1, 0.1)));
        }
        return std::pair{e <= tol.burgers, "N = 256, eps = 0.1, t <= 1: Linf error " + sci(e) + " (tol 1e-6)"};
    });

    run("AC7", "qualitative reproduction for v1, v2, v3", [&] {
        auto go = [](const char* d) {
            sim::SimConfig c;
            c.datum = sim::named_datum(d);
            return sim::integrate(c);
        };
        auto peak = [](const sim::SimResult& r) {
            double p = 0;
            for (const auto& x : r.diagnostics) p = std::max(p, x.max_slope);
            return p;
        };
        sim::SimResult r1 = go("v1"), r2 = go("v2"), r3 = go("v3");
        bool mass = true, damp = true;
        double cmax = 0;
        for (const auto* r : {&r1, &r2}) {
            double m0 = r->diagnostics.front().mass, amax = 0;
            for (const auto& x : r->diagnostics) {
                mass = mass && std::abs(x.mass - m0) <= tol.mass * std::abs(m0);
                amax = std::max(amax, x.osc_amp);
                cmax = std::max(cmax, x.constraint);
            }
            damp = damp && !r->blowup && r->diagnostics.back().osc_amp < 0.5 * amax;
        }
        for (const auto& x : r3.diagnostics) cmax = std::max(cmax, x.constraint);
        double p1 = peak(r1), p2 = peak(r2), p3 = peak(r3);
        double s1 = r1.diagnostics.front().max_slope, s2 = r2.diagnostics.front().max_slope,
               s3 = r3.diagnostics.front().max_slope;
        bool steeper = p1 > p2;
        bool blow = r3.blowup && p3 > 10 * s3;
        bool ok = mass && damp && steeper && blow && cmax <= tol.constraint;
        char b[400];
        std::snprintf(b, sizeof b,
                      "mass %s, damping %s, peak slope v1 %.3f vs v2 %.3f (%s; relative to initial %.2fx vs %.2fx), "
                      "v3 peak %.1fx initial with blow-up flag at t = %.2f, constraint max %.1e",
                      mass ? "ok" : "drifts", damp ? "ok" : "absent", p1, p2, steeper ? "v1 steeper" : "v1 not steeper",
                      p1 / s1, p2 / s2, p3 / s3, r3.last_valid_t, cmax);
        return std::pair{ok, std::string(b)};
    });

    run("AC8", "cross-scheme agreement", [&] {
        sim::SimConfig c;
        c.datum = sim::named_datum("v1");
        c.N = 512;
        c.t_end = 2;
        c.dt = 0.002;
        auto sp = sim::integrate(c);
        c.scheme = sim::Scheme::FD4;
        auto fd = sim::integrate(c);
        double e = linf(sp.final_state.v, fd.final_state.v);
        sim::SimConfig s0;
        s0.datum = sim::named_datum("v1");
        sim::PSystem ps(s0);
        auto v = s0.datum.sample(ps.grid());
        auto a = ps.rhs(v), b = ps.nonlocal_flux_rhs(v);
        double scale = 0;
        for (double x : a) scale = std::max(scale, std::abs(x));
        double nl = linf(a, b) / scale;
        return std::pair{e <= tol.cross_scheme && nl <= tol.nonlocal,
                         "spectral vs fd4 (N = 512, t = 2) " + sci(e) + " (tol 1e-4); P-rhs vs nonlocal flux " + sci(nl) +
                             " (tol 1e-9)"};
    });

    run("AC9", "Pearcey suite", [&] {
        double want = 2 * std::tgamma(1.25) / std::sqrt(2.0);
        double o = std::abs(crit::pearcey(0, 0).P - want) / want;
        double lin = 0, nl = 0;
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < 25; ++j) {
                double X = -3 + 0.25 * i, T = -3 + 0.25 * j;
                lin = std::max(lin, crit::linear_ode_residual(crit::pearcey_jet(X, T), X, T));
                nl = std::max(nl, crit::nonlinear_ode_residual(crit::pearcey_log_derivative(X, T), X, T));
            }
        double e = std::exp(1.5);
        bool controls = crit::linear_ode_residual({e, e, e, e}, 1.5, 0) > 0.2 &&
                        crit::nonlinear_ode_residual(crit::Jet2{}, 1.5, 0.7) > 0.2;
        bool ok = o <= tol.pearcey_origin && lin <= tol.ode_linear && nl <= tol.ode_nonlinear && controls;
        return std::pair{ok, "P(0,0) rel error " + sci(o) + "; linear residual " + sci(lin) + " (tol 1e-6), nonlinear " +
                                 sci(nl) + " (tol 1e-5) on [-3,3]^2; negative controls fail: " + yes(controls)};
    });

    run("AC10", "universality experiment", [] {
        auto r = crit::universality_experiment();
        std::string d = "deviation";
        for (const auto& row : r.rows) {
            char e[32];
            std::snprintf(e, sizeof e, "%g", row.eps);
            d += " " + sci(row.deviation) + " (eps " + e + ")";
        }
        char b[64];
        std::snprintf(b, sizeof b, "; amplitude exponent %.3f", r.exponent);
        return std::pair{r.monotone && std::abs(r.exponent - 0.25) <= 0.05, d + b + " (target 0.25 +- 0.05)"};
    });

    run("AC11", "audit completeness", [&] {
        if (audit.entries.empty()) audit = audit_all();
        std::set<std::string> seen;
        for (const auto& e : audit.entries) seen.insert(e.anchor);
        int missing = 0;
        for (const auto& a : audit_anchors()) missing += !seen.count(a);
        const AuditEntry* e5 = audit.find("classify.E1-E7");
        const AuditEntry* f = audit.find("critical.0F2-general-solution");
        bool both = f && f->data.contains("rows") && f->data["rows"].size() == 5 &&
                    f->data["rows"][0].contains("linear_residual") && f->data["rows"][0].contains("combined_residual");
        bool ok = missing == 0 && e5 && e5->status == "unverifiable" && f && f->status == "measured" && both &&
                  audit.count("error") == 0 && audit.entries.size() >= 12;
        return std::pair{ok, std::to_string(audit.entries.size()) + " entries over " + std::to_string(seen.size()) +
                                 " anchors, " + std::to_string(missing) + " missing; E1-E7 unverifiable: " +
                                 yes(e5 && e5->status == "unverifiable") + "; 0F2 measured with both readings: " +
                                 yes(both) + "; errors " + std::to_string(audit.count("error"))};
    });

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failures;
}
