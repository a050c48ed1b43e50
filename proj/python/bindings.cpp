// Python surface. Symbolic results cross the boundary as canonical JSON text
// and are decoded on the Python side; numeric fields come back as lists.

#include "ivcl/asymptotics.hpp"
#include "ivcl/audit.hpp"
#include "ivcl/classify.hpp"
#include "ivcl/critical.hpp"
#include "ivcl/hierarchy.hpp"
#include "ivcl/miura.hpp"
#include "ivcl/parse.hpp"
#include "ivcl/pdesim.hpp"
#include "ivcl/serialize.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ivcl;

namespace {

std::string classify_json(int order, const std::string& basis, const std::string& a) {
    ClassifyOptions o;
    o.K = order;
    if (basis == "reference")
        o.overrides = reference_basis();
    else if (basis != "normal")
        throw std::invalid_argument("basis must be normal or reference");
    if (!a.empty()) o.a_value = parse_coeff(a);
    py::gil_scoped_release nogil;
    return dump(to_json(classify(o)));
}

std::string current_json(const std::string& text, int order) { return dump(current_document(parse_current(text, order, false))); }

std::string bracket_json(const std::string& a, const std::string& b, int order) {
    EpsCurrent x = parse_current(a, order, false), y = parse_current(b, order, false);
    InvolutionResult r = involution_check(x, y, order);
    json j = {{"result", r.pass ? "pass" : "fail"}, {"through", order}};
    if (!r.pass) j["failing_order"] = r.failing_order, j["residual"] = r.residual.str();
    j["bracket"] = poisson_bracket(x, y, order).str();
    return dump(j);
}

std::string normal_form_json(const std::string& text, int order) {
    NormalFormResult r = normal_form(parse_current(text, order, false), order);
    json j = {{"normal_form", r.omega.str()}, {"miura", to_json(r.seq)}, {"document", current_document(r.omega)}};
    return dump(j);
}

std::string hierarchy_json(const std::string& family, int n, int order, int sign) {
    return dump(to_json(make_flow(parse_family(family), n, order, sign)));
}

std::string quasi_miura_json(int order, const std::string& a) {
    if (a != "constant" && a != "linear") throw std::invalid_argument("a must be constant or linear");
    return dump(to_json(a == "linear" ? quasi_miura_linear(order) : quasi_miura_burgers(order)));
}

py::dict simulate(const std::string& config_json) {
    sim::SimConfig c = sim::config_from_json(json::parse(config_json));
    sim::SimResult r;
    {
        py::gil_scoped_release nogil;
        r = sim::integrate(c);
    }
    py::dict d;
    std::vector<double> t, mass, slope, osc, constraint;
    for (const auto& x : r.diagnostics) {
        t.push_back(x.t);
        mass.push_back(x.mass);
        slope.push_back(x.max_slope);
        osc.push_back(x.osc_amp);
        constraint.push_back(x.constraint);
    }
    d["t"] = t;
    d["mass"] = mass;
    d["max_slope"] = slope;
    d["osc_amp"] = osc;
    d["constraint"] = constraint;
    d["x"] = sim::SpectralGrid(c.N, c.L).xs();
    d["v"] = r.final_state.v;
    d["P"] = r.final_state.P;
    d["final_t"] = r.final_state.t;
    d["blowup"] = r.blowup;
    d["reason"] = r.reason;
    d["steps"] = r.steps;
    return d;
}

std::vector<double> burgers_error(int N, double eps, double t) {
    sim::BurgersConfig bc;
    bc.N = N;
    bc.eps = eps;
    bc.t_end = t;
    sim::SpectralGrid g(N, bc.L);
    auto u = sim::burgers_spectral(sim::named_datum("burgers-single").sample(g, eps), bc);
    std::vector<double> err(u.size());
    for (int j = 0; j < N; ++j)
        err[std::size_t(j)] = u[std::size_t(j)] - sim::burgers_single_mode(g.x(j), t, eps, 1, 0.1);
    return err;
}

py::dict pearcey(double X, double T) {
    crit::PearceyValue p = crit::pearcey(X, T);
    crit::Jet2 u = crit::pearcey_log_derivative(X, T);
    py::dict d;
    d["P"] = p.P;
    d["P_X"] = p.PX;
    d["P_XX"] = p.PXX;
    d["P_XXX"] = p.PXXX;
    d["P_T"] = p.PT;
    d["U"] = u.U;
    d["validated"] = p.validated;
    d["linear_residual"] = crit::linear_ode_residual({p.P, p.PX, p.PXX, p.PXXX}, X, T);
    d["nonlinear_residual"] = crit::nonlinear_ode_residual(u, X, T);
    return d;
}

std::string universality_json() {
    py::gil_scoped_release nogil;
    return dump(crit::to_json(crit::universality_experiment()));
}

std::string general_solution_json() { return dump(crit::to_json(crit::audit_general_solution())); }

std::string audit_json(int samples, unsigned seed) {
    AuditOptions o;
    o.random_samples = samples;
    o.seed = seed;
    py::gil_scoped_release nogil;
    return dump(to_json(audit_all(o)));
}

}  // namespace

PYBIND11_MODULE(_ivcl, m) {
    m.doc() = "integrable viscous conservation laws toolkit";
    m.attr("__version__") = kVersion;

    py::register_exception<AlgebraError>(m, "AlgebraError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

    m.def("classify_json", &classify_json, py::arg("order") = 3, py::arg("basis") = "normal", py::arg("a") = "");
    m.def("current_json", &current_json, py::arg("text"), py::arg("order"));
    m.def("bracket_json", &bracket_json, py::arg("alpha"), py::arg("beta"), py::arg("order"));
    m.def("normal_form_json", &normal_form_json, py::arg("text"), py::arg("order"));
    m.def("hierarchy_json", &hierarchy_json, py::arg("family"), py::arg("n"), py::arg("order") = 5,
          py::arg("sign") = -1);
    m.def("quasi_miura_json", &quasi_miura_json, py::arg("order") = 3, py::arg("a") = "constant");
    m.def("simulate", &simulate, py::arg("config_json"));
    m.def("burgers_error", &burgers_error, py::arg("N") = 256, py::arg("eps") = 0.1, py::arg("t") = 1.0);
    m.def("pearcey", &pearcey, py::arg("X"), py::arg("T"));
    m.def("pearcey_origin", &crit::pearcey_origin);
    m.def("universality_json", &universality_json);
    m.def("general_solution_json", &general_solution_json);
    m.def("audit_json", &audit_json, py::arg("samples") = 100, py::arg("seed") = 20240601u);
}
