#include "doctest.h"

#include "ivcl/critical.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace ivcl::crit;

namespace {

template <class F>
void on_grid(double box, int n, F f) {
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) f(-box + 2 * box * a / (n - 1), -box + 2 * box * b / (n - 1));
}

long double brute0F2(long double a, long double b, long double z) {
    long double sum = 0, term = 1;
    for (int n = 0; n < 200; ++n) {
        sum += term;
        term *= z / ((a + n) * (b + n) * (n + 1));
    }
    return sum;
}

}  // namespace

TEST_CASE("pearcey at the origin") {
    // int exp(-4 z^4) dz: substitute s = 4 z^4 to get 2 Gamma(5/4) / 4^{1/4}
    const double want = 2 * std::tgamma(1.25) / std::sqrt(2.0);
    CHECK(std::abs(pearcey(0, 0).P - want) <= 1e-10 * want);
    CHECK(std::abs(pearcey_origin() - want) <= 1e-15 * want);
    CHECK(pearcey(0, 0).PX == doctest::Approx(0).epsilon(1e-15));
}

TEST_CASE("pearcey symmetry and derivatives") {
    on_grid(3, 7, [](double X, double T) {
        auto p = pearcey(X, T), m = pearcey(-X, T);
        CHECK(std::abs(p.P - m.P) <= 1e-12 * p.P);
        CHECK(std::abs(p.PX + m.PX) <= 1e-12 * (std::abs(p.PX) + p.P));
        Jet2 u = pearcey_log_derivative(X, T), v = pearcey_log_derivative(-X, T);
        CHECK(std::abs(u.U + v.U) <= 1e-12 * (1 + std::abs(u.U)));
        // differentiated quadrature against central differences
        const double h = 1e-4;
        auto a = pearcey(X + h, T), b = pearcey(X - h, T), c = pearcey(X, T + h), d = pearcey(X, T - h);
        CHECK(std::abs(p.PX - (a.P - b.P) / (2 * h)) <= 1e-6 * (1 + std::abs(p.PX)));
        CHECK(std::abs(p.PXXX - (a.PXX - b.PXX) / (2 * h)) <= 1e-6 * (1 + std::abs(p.PXXX)));
        CHECK(std::abs(p.PT - (c.P - d.P) / (2 * h)) <= 1e-6 * (1 + std::abs(p.PT)));
    });
    CHECK(pearcey(1, 2).validated);
    CHECK_FALSE(pearcey(4, 0).validated);
}

TEST_CASE("pearcey integrand identity") {
    const double X = 1, T = 1;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double v = GK::integrate(
        [&](double z) { return (-16 * z * z * z + 4 * T * z - 2 * X) * std::exp(-(4 * z * z * z * z - 2 * T * z * z + 2 * X * z)); },
        -6.0, 6.0, 15, 1e-14);
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("pearcey solves both ODEs on the validated box") {
    double lin = 0, nl = 0;
    on_grid(3, 25, [&](double X, double T) {
        lin = std::max(lin, linear_ode_residual(pearcey_jet(X, T), X, T));
        nl = std::max(nl, nonlinear_ode_residual(pearcey_log_derivative(X, T), X, T));
    });
    CHECK(lin <= 1e-6);
    CHECK(nl <= 1e-5);
    MESSAGE("Cole-Hopf constant C = " << (lin > 0 ? nl / lin : 0.0));
    CHECK(pearcey_log_derivative(0, 0).U == doctest::Approx(0).epsilon(1e-15));
}

TEST_CASE("ODE residual negative controls") {
    CHECK(linear_ode_residual(Jet3{}, 1.3, -0.4) == 0);
    for (double X : {-2.0, 0.5, 2.0}) {
        double e = std::exp(X);
        double r = linear_ode_residual({e, e, e, e}, X, 0);
        CHECK(r == doctest::Approx(std::abs(1 - X) / std::max(1.0, std::abs(X))));
        CHECK(r > 0.2);
        CHECK(nonlinear_ode_residual(Jet2{}, X, 0.7) == doctest::Approx(std::abs(X) / std::max(1.0, std::abs(X))));
    }
}

TEST_CASE("0F2 series") {
    CHECK(pochhammer(0.3, 0) == 1);
    CHECK(pochhammer(0.5, 3) == doctest::Approx(0.5 * 1.5 * 2.5));
    CHECK(hyper0F2(0.5, 0.75, 0) == 1);
    for (double z : {1.0, -3.0, 20.0}) {
        double want = double(brute0F2(0.5L, 0.75L, z));
        CAPTURE(z);
        CHECK(std::abs(hyper0F2(0.5, 0.75, z) - want) <= 1e-13 * std::abs(want));
    }
    CHECK_THROWS(hyper0F2(0, 1, 1));
    CHECK_THROWS(hyper0F2(1, -0.5, 1));
}

TEST_CASE("displayed basis functions") {
    static const double ab[3][2] = {{0.5, 0.75}, {0.75, 1.25}, {1.25, 1.5}};
    for (int i = 0; i < 3; ++i)
        on_grid(3, 5, [&](double X, double T) {
            double s = X + T;
            Jet3 j = general_solution_basis(i, X, T);
            CHECK(j.w == doctest::Approx(std::pow(s, i) * hyper0F2(ab[i][0], ab[i][1], s * s * s * s / 64)).epsilon(1e-12));
            const double h = 1e-4;
            Jet3 a = general_solution_basis(i, X + h, T), b = general_solution_basis(i, X - h, T);
            CHECK(std::abs(j.wXXX - (a.wXX - b.wXX) / (2 * h)) <= 1e-6 * (1 + std::abs(j.wXXX)));
        });
    // power series c_k s^k with (k+1)(k+2)(k+3) c_{k+3} = c_{k-1} solve w''' = s w;
    // the first basis function starts 1 + s^4/24 + s^8/8064
    Jet3 j = general_solution_basis(0, 0.3, 0.2);
    double s = 0.5;
    CHECK(j.w == doctest::Approx(1 + std::pow(s, 4) / 24 + std::pow(s, 8) / 8064 + std::pow(s, 12) / (8064.0 * 1320)).epsilon(1e-15));
    CHECK_THROWS(general_solution_basis(3, 0, 0));
}

TEST_CASE("general solution audit") {
    auto rows = audit_general_solution();
    REQUIRE(rows.size() == 5);
    for (int i = 0; i < 3; ++i) {
        CAPTURE(rows[std::size_t(i)].function);
        CHECK(rows[std::size_t(i)].combined_residual <= 1e-10);
        CHECK(rows[std::size_t(i)].linear_residual > 0.1);
    }
    CHECK(rows[3].function == "zero");
    CHECK(rows[3].linear_residual == 0);
    CHECK(rows[3].combined_residual == 0);
    CHECK(rows[4].linear_residual <= 1e-6);
    CHECK(rows[4].combined_residual > 0.1);
    CHECK(to_json(rows).size() == 5);
}

TEST_CASE("catastrophe detection") {
    Driver cubic{[](double u) { return u * u * u; }, [](double u) { return 3 * u * u; }, [](double u) { return 6 * u; },
                 [](double) { return 6.0; }};
    auto cp = find_catastrophe(cubic, -1, 2);
    CHECK(std::abs(cp.u0) < 1e-14);
    CHECK(std::abs(cp.t0) < 1e-14);
    CHECK(std::abs(cp.x0) < 1e-14);
    CHECK(cp.f3 == 6);

    const double c = 0.8;
    Driver cu{[c](double u) { return u * u * u + c * u; }, [c](double u) { return 3 * u * u + c; },
              [](double u) { return 6 * u; }, [](double) { return 6.0; }};
    cp = find_catastrophe(cu, -0.5, 0.7);
    CHECK(std::abs(cp.u0) < 1e-14);
    CHECK(cp.t0 == doctest::Approx(c / 2));
    CHECK(std::abs(cp.x0) < 1e-14);

    Driver g{[](double u) { return u * u * u - 3 * u * u + 5 * u + std::exp(u); },
             [](double u) { return 3 * u * u - 6 * u + 5 + std::exp(u); }, [](double u) { return 6 * u - 6 + std::exp(u); },
             [](double u) { return 6 + std::exp(u); }};
    cp = find_catastrophe(g, -2, 2);
    CHECK(std::abs(g.f2(cp.u0)) <= 1e-12);
    CHECK(std::abs(2 * cp.t0 - g.f1(cp.u0)) <= 1e-12);
    CHECK(std::abs(cp.x0 + 2 * cp.u0 * cp.t0 - g.f(cp.u0)) <= 1e-12);
    CHECK(cp.f3 > 0);

    Driver sq{[](double u) { return u * u; }, [](double u) { return 2 * u; }, [](double) { return 2.0; },
              [](double) { return 0.0; }};
    CHECK_THROWS(find_catastrophe(sq, -1, 1));
    Driver neg{[](double u) { return -u * u * u; }, [](double u) { return -3 * u * u; }, [](double u) { return -6 * u; },
               [](double) { return -6.0; }};
    CHECK_THROWS(find_catastrophe(neg, -1, 1));
}

TEST_CASE("critical scales and profile") {
    for (double a0 : {0.5, 1.0, 3.0})
        for (double f3 : {1.0, 6.0, 11.0}) {
            auto s = critical_scales(a0, f3);
            CHECK(s.s2 == doctest::Approx(s.s1 * s.s1 / (2 * a0)).epsilon(1e-14));
            CHECK(s.s3 == doctest::Approx(a0 / s.s1).epsilon(1e-14));
        }
    CHECK(CriticalScales::sigma == 3);
    CHECK(CriticalScales::beta == 2);
    CHECK(CriticalScales::q == 0.25);
    CatastrophePoint cp{0.3, 0.5, -0.2, 6};
    auto p = critical_profile(cp, 1, 0.01, cp.x0, cp.t0);
    CHECK(p.u == doctest::Approx(cp.u0).epsilon(1e-14));
    CHECK(p.in_box);
    // along the characteristic direction X stays zero
    p = critical_profile(cp, 1, 0.01, cp.x0 - 2 * cp.u0 * 0.01, cp.t0 + 0.01);
    CHECK(std::abs(p.X) < 1e-12);
    CHECK_FALSE(critical_profile(cp, 1, 0.01, cp.x0 + 1, cp.t0).in_box);
    CHECK_THROWS(critical_scales(0, 6));
}

TEST_CASE("burgers approaches the Pearcey profile at the catastrophe") {
    UniversalityResult r = universality_experiment();
    REQUIRE(r.rows.size() == 3);
    CHECK(r.monotone);
    for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].deviation < r.rows[i - 1].deviation);
    CHECK(std::abs(r.exponent - 0.25) <= 0.05);
    // u -> b + u(x + 2bt, t) is a symmetry of Burgers, so a shifted driver moves the
    // catastrophe to u0 = b without changing the deviations
    UniversalityConfig c;
    c.shift = 0.7;
    UniversalityResult s = universality_experiment(c);
    CHECK(s.cp.u0 == doctest::Approx(0.7));
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(s.rows[i].deviation - r.rows[i].deviation) < 1e-6);
    CHECK(to_json(r)["schema"] == "ivcl.universality/1");
}
