// ivcl command line: classification, normal forms, brackets, hierarchies,
// quasi-Miura series, the periodic simulator, Pearcey tables and the audit.

#include "ivcl/asymptotics.hpp"
#include "ivcl/audit.hpp"
#include "ivcl/classify.hpp"
#include "ivcl/critical.hpp"
#include "ivcl/hierarchy.hpp"
#include "ivcl/miura.hpp"
#include "ivcl/parse.hpp"
#include "ivcl/pdesim.hpp"
#include "ivcl/serialize.hpp"
#include "ivcl/tolerances.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace ivcl;

namespace {

enum Exit {
    kOk = 0,
    kCheckFailed = 1,   // an involution or audit check did not pass
    kUsage = 2,         // bad command line
    kSchema = 3,        // malformed JSON, unknown schema version, invalid config
    kFile = 4,          // unreadable input or unwritable output
    kModule = 5,        // the computation itself refused the input
    kBlowup = 6,        // simulation stopped at a detected blow-up
    kInternal = 7,
};

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

// write next to the target and rename, so readers never see a partial file
void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path p(path), tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw FileError("cannot write " + path);
        out << text;
        if (!out) throw FileError("cannot write " + path);
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw FileError("cannot write " + path + ": " + ec.message());
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_atomic(out, text);
}

EpsCurrent load_current(const std::string& arg, bool expr, int order) {
    if (expr) return parse_current(arg, order, false);
    return current_from_document(read_json(arg));
}

std::string header(const std::string& what) { return "# ivcl " + std::string(kVersion) + " " + what + "\n"; }

void log_line(const std::string& s) { std::cerr << "[ivcl] " << s << '\n'; }

// "a:b:n" -> n points from a to b
std::vector<double> parse_range(const std::string& s) {
    double a = 0, b = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
        throw CLI::ValidationError("--grid", "expected lo:hi:n, got '" + s + "'");
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integrable viscous conservation laws toolkit"};
    app.set_version_flag("--version", std::string("ivcl ") + kVersion);
    app.require_subcommand(1);
    int code = kOk;

    // classify
    auto* cl = app.add_subcommand("classify", "order-by-order classification of commuting pairs");
    int cl_order = 3;
    std::string cl_basis = "normal", cl_a, cl_out;
    bool cl_json = false;
    cl->add_option("--order", cl_order, "highest eps order")->check(CLI::Range(0, 7));
    cl->add_option("--basis", cl_basis, "normal (d2 on u_xx^2) or reference (d2 on u_x u_xxx)")
        ->check(CLI::IsMember({"normal", "reference"}));
    cl->add_option("--a", cl_a, "fix the central invariant, e.g. 1 or u");
    cl->add_flag("--json", cl_json, "JSON output");
    cl->add_option("--out", cl_out, "output file");
    cl->callback([&] {
        ClassifyOptions o;
        o.K = cl_order;
        if (!cl_a.empty()) o.a_value = parse_coeff(cl_a);
        if (cl_basis == "reference") o.overrides = reference_basis();
        log_line("classify order " + std::to_string(cl_order) + " basis " + cl_basis);
        ClassificationResult r = classify(o);
        if (cl_json) {
            json j = to_json(r);
            j["basis"] = cl_basis;
            json eq = json::array();
            for (const auto& c : r.constraints) eq.push_back(c.letter + " = " + c.display);
            j["equations"] = eq;
            emit(cl_out, dump(j));
        } else {
            emit(cl_out, header("classify") + constraint_table(r));
        }
        if (!r.verified) code = kCheckFailed;
    });

    // normal-form
    auto* nf = app.add_subcommand("normal-form", "reduce a current to Miura normal form");
    std::string nf_in, nf_out;
    bool nf_expr = false, nf_json = false;
    int nf_order = 3;
    nf->add_option("input", nf_in, "current document (JSON) or text with --expr")->required();
    nf->add_flag("--expr", nf_expr, "read the input as text, e.g. 'u^2 + eps a u_x + eps^2 u_x^2'");
    nf->add_option("--order", nf_order, "truncation order for --expr")->check(CLI::Range(0, 12));
    nf->add_flag("--json", nf_json, "JSON output");
    nf->add_option("--out", nf_out, "output file");
    nf->callback([&] {
        EpsCurrent w = load_current(nf_in, nf_expr, nf_order);
        NormalFormResult r = normal_form(w, w.K());
        if (nf_json) {
            json j = {{"schema", "ivcl.normal-form/1"}, {"version", kVersion}};
            j["normal_form"] = current_document(r.omega);
            j["miura"] = to_json(r.seq);
            emit(nf_out, dump(j));
        } else {
            std::ostringstream o;
            o << header("normal-form") << "normal form: " << r.omega.str() << '\n';
            for (const auto& s : r.seq.steps) o << "step eps^" << s.order << " beta = " << s.beta.str() << '\n';
            emit(nf_out, o.str());
        }
    });

    // bracket
    auto* br = app.add_subcommand("bracket", "Poisson bracket of two currents and an involution report");
    std::string br_a, br_b, br_out;
    bool br_expr = false;
    int br_order = -1;
    br->add_option("alpha", br_a, "first current")->required();
    br->add_option("beta", br_b, "second current")->required();
    br->add_flag("--expr", br_expr, "read the currents as text");
    br->add_option("--order", br_order, "check through this eps order (default: both truncations)");
    br->add_option("--out", br_out, "output file");
    br->callback([&] {
        int k = br_order < 0 ? 5 : br_order;
        EpsCurrent a = load_current(br_a, br_expr, k), b = load_current(br_b, br_expr, k);
        int K = br_order >= 0 ? br_order : std::min(a.reliable(), b.reliable());
        if (K > 64) K = std::max(a.K(), b.K());
        InvolutionResult r = involution_check(a, b, K);
        json j = {{"schema", "ivcl.bracket-report/1"}, {"version", kVersion}, {"through", K},
                  {"result", r.pass ? "pass" : "fail"}};
        if (!r.pass) j["failing_order"] = r.failing_order, j["residual"] = r.residual.str();
        j["bracket"] = to_json(poisson_bracket(a, b, K));
        emit(br_out, dump(j));
        if (!r.pass) code = kCheckFailed;
    });

    // hierarchy
    auto* hi = app.add_subcommand("hierarchy", "hierarchy currents and involution suites");
    std::string hi_family = "burgers", hi_sign = "-", hi_out;
    int hi_n = 1, hi_K = 5;
    bool hi_suite = false, hi_json = false;
    hi->add_option("--family", hi_family, "burgers, negative, viscousCH or positive")
        ->check(CLI::IsMember({"burgers", "negative", "viscousCH", "positive"}));
    hi->add_option("--index", hi_n, "flow index n")->check(CLI::Range(0, 8));
    hi->add_option("--order", hi_K, "eps truncation for series flows")->check(CLI::Range(0, 8));
    hi->add_option("--sign", hi_sign, "eps sign of the negative hierarchy")->check(CLI::IsMember({"-", "+"}));
    hi->add_flag("--suite", hi_suite, "run the involution suites instead");
    hi->add_flag("--json", hi_json, "JSON output");
    hi->add_option("--out", hi_out, "output file");
    hi->callback([&] {
        int sign = hi_sign == "+" ? 1 : -1;
        if (hi_suite) {
            json j = {{"schema", "ivcl.involution-suites/1"}, {"version", kVersion}};
            bool all = true;
            auto put = [&](const char* name, const std::vector<PairCheck>& v) {
                json a = json::array();
                for (const auto& p : v) {
                    all = all && p.pass;
                    a.push_back({{"label", p.label}, {"through", p.through}, {"pass", p.pass}});
                }
                j[name] = a;
            };
            put("burgers", burgers_involution_suite(4));
            put("negative", negative_involution_suite(3, sign));
            put("mixed", mixed_involution_suite(hi_K, 2));
            j["result"] = all ? "pass" : "fail";
            emit(hi_out, dump(j));
            if (!all) code = kCheckFailed;
            return;
        }
        HierarchyFlow f = make_flow(parse_family(hi_family), hi_n, hi_K, sign);
        if (hi_json)
            emit(hi_out, dump(to_json(f)));
        else
            emit(hi_out, header("hierarchy") + family_name(f.family) + " n = " + std::to_string(f.n) +
                             (f.exact() ? " (exact)" : " (through eps^" + std::to_string(f.current.K()) + ")") +
                             "\ncurrent: " + f.current.str() + "\n");
    });

    // quasimiura
    auto* qm = app.add_subcommand("quasimiura", "quasi-Miura series around the hodograph solution");
    int qm_order = 3;
    std::string qm_a = "constant", qm_out;
    bool qm_json = false;
    qm->add_option("--order", qm_order, "highest eps order")->check(CLI::Range(1, 5));
    qm->add_option("--a", qm_a, "central invariant: constant (Burgers) or linear (a = u)")
        ->check(CLI::IsMember({"constant", "linear"}));
    qm->add_flag("--json", qm_json, "JSON output");
    qm->add_option("--out", qm_out, "output file");
    qm->callback([&] {
        QuasiMiura q = qm_a == "linear" ? quasi_miura_linear(qm_order) : quasi_miura_burgers(qm_order);
        if (qm_json) {
            emit(qm_out, dump(to_json(q)));
        } else {
            std::ostringstream o;
            o << header("quasimiura") << "omega: " << q.omega.str() << '\n';
            for (const auto& t : q.terms)
                if (t.n > 0) o << "v^" << t.n << " = " << t.jets.str() << '\n';
            emit(qm_out, o.str());
        }
    });

    // simulate
    auto* si = app.add_subcommand("simulate", "integrate v_t = v v_x + P_x with (1 - eps d) P = v^2/2");
    std::string si_config, si_datum, si_out = "fields.csv", si_scheme;
    double si_t = -1;
    int si_N = 0;
    si->add_option("--config", si_config, "simulation config (JSON)");
    si->add_option("--datum", si_datum, "named datum: v1, v2, v3, burgers-single, burgers-gaussian");
    si->add_option("--scheme", si_scheme, "spectral or fd4")->check(CLI::IsMember({"spectral", "fd4"}));
    si->add_option("--N", si_N, "grid points");
    si->add_option("--t-end", si_t, "final time");
    si->add_option("--out", si_out, "fields CSV; diagnostics and metadata go next to it");
    si->callback([&] {
        json cj = si_config.empty() ? json::object() : read_json(si_config);
        if (!si_datum.empty()) cj["datum"] = si_datum;
        if (!si_scheme.empty()) cj["scheme"] = si_scheme;
        if (si_N > 0) cj["N"] = si_N;
        if (si_t >= 0) cj["t_end"] = si_t;
        sim::SimConfig c;
        try {
            c = sim::config_from_json(cj);
        } catch (const json::exception& e) {
            throw SchemaError(std::string("config: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw SchemaError(std::string("config: ") + e.what());
        }
        Tolerances tol = active_tolerances();
        log_line("simulate datum " + c.datum.name + " N " + std::to_string(c.N) + " scheme " +
                 sim::scheme_name(c.scheme) + " tolerance profile " + active_tolerance_profile());
        sim::SimResult r = sim::integrate(c);
        std::filesystem::path out(si_out);
        std::string stem = (out.parent_path() / out.stem()).string();
        std::string diag = stem + ".diagnostics.csv", meta = stem + ".meta.json";
        try {
            sim::write_csv(r, sim::SpectralGrid(c.N, c.L), si_out + ".tmp", diag + ".tmp");
        } catch (const std::runtime_error& e) {
            throw FileError(e.what());
        }
        std::filesystem::rename(si_out + ".tmp", si_out);
        std::filesystem::rename(diag + ".tmp", diag);
        double cmax = 0;
        for (const auto& d : r.diagnostics) cmax = std::max(cmax, d.constraint);
        json m = {{"schema", "ivcl.sim-run/1"},
                  {"version", kVersion},
                  {"config", sim::to_json(c)},
                  {"tolerance_profile", active_tolerance_profile()},
                  {"steps", r.steps},
                  {"t", r.last_valid_t},
                  {"blowup", r.blowup},
                  {"reason", r.reason},
                  {"constraint_max", cmax},
                  {"constraint_within_tolerance", cmax <= tol.constraint},
                  {"fields", si_out},
                  {"diagnostics", diag}};
        write_atomic(meta, dump(m));
        std::cout << dump(m);
        if (r.blowup) code = kBlowup;
    });

    // pearcey
    auto* pe = app.add_subcommand("pearcey", "Pearcey integral, its log-derivative and ODE residuals on a grid");
    std::string pe_grid = "-3:3:13,-3:3:13", pe_out;
    bool pe_general = false, pe_universality = false;
    pe->add_option("--grid", pe_grid, "X range and T range as lo:hi:n,lo:hi:n");
    pe->add_flag("--general-solution", pe_general, "measure the 0F2 functions against both ODE readings (JSON)");
    pe->add_flag("--universality", pe_universality, "run the Burgers universality experiment (JSON)");
    pe->add_option("--out", pe_out, "output file");
    pe->callback([&] {
        if (pe_general) {
            json j = {{"schema", "ivcl.general-solution/1"}, {"version", kVersion},
                      {"rows", crit::to_json(crit::audit_general_solution())}};
            emit(pe_out, dump(j));
            return;
        }
        if (pe_universality) {
            json j = crit::to_json(crit::universality_experiment());
            j["version"] = kVersion;
            emit(pe_out, dump(j));
            return;
        }
        auto comma = pe_grid.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("--grid", "expected two ranges");
        auto xs = parse_range(pe_grid.substr(0, comma)), ts = parse_range(pe_grid.substr(comma + 1));
        Tolerances tol = active_tolerances();
        std::ostringstream o;
        o.precision(17);
        o << "X,T,P,P_X,P_XX,P_XXX,P_T,U,linear_residual,nonlinear_residual,validated\n";
        bool ok = true;
        for (double X : xs)
            for (double T : ts) {
                crit::PearceyValue p = crit::pearcey(X, T);
                crit::Jet2 u = crit::pearcey_log_derivative(X, T);
                double lr = crit::linear_ode_residual({p.P, p.PX, p.PXX, p.PXXX}, X, T);
                double nr = crit::nonlinear_ode_residual(u, X, T);
                if (p.validated) ok = ok && lr <= tol.ode_linear && nr <= tol.ode_nonlinear;
                o << X << ',' << T << ',' << p.P << ',' << p.PX << ',' << p.PXX << ',' << p.PXXX << ',' << p.PT << ','
                  << u.U << ',' << lr << ',' << nr << ',' << (p.validated ? 1 : 0) << '\n';
            }
        emit(pe_out, o.str());
        if (!ok) code = kCheckFailed;
    });

    // audit
    auto* au = app.add_subcommand("audit", "run every claim check and emit the report");
    std::string au_out;
    bool au_json = false;
    AuditOptions au_opt;
    au->add_option("--out", au_out, "write the JSON report here");
    au->add_flag("--json", au_json, "print JSON instead of text");
    au->add_option("--samples", au_opt.random_samples, "random samples for the property suites")
        ->check(CLI::Range(1, 100000));
    au->add_option("--seed", au_opt.seed, "seed for the property suites");
    au->callback([&] {
        log_line("audit seed " + std::to_string(au_opt.seed) + " samples " + std::to_string(au_opt.random_samples) +
                 " tolerance profile " + active_tolerance_profile());
        AuditReport r = audit_all(au_opt);
        json j = to_json(r);
        j["seed"] = au_opt.seed;
        j["samples"] = au_opt.random_samples;
        j["tolerance_profile"] = active_tolerance_profile();
        if (!au_out.empty()) write_atomic(au_out, dump(j));
        std::cout << (au_json ? dump(j) : header("audit") + to_text(r));
        if (r.count("error") > 0) code = kModule;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const json::exception& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kSchema;
    } catch (const FileError& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kFile;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kFile;
    } catch (const AlgebraError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kModule;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kModule;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return code;
}
