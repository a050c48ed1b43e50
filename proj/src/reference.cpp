#include "ivcl/reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ivcl::reference {

const std::vector<Entry>& capitals() {
    static const std::vector<Entry> v = [] {
        std::vector<Entry> e = {
            {"A", "1/2 a f''", "", ""},
            {"B1", "1/2 b1 f'' + 1/6 a^2 f'''", "", ""},
            {"B2", "1/4 a a' f''' + 1/8 a^2 f^(4) + 1/4 b1 f'''", "", ""},
            {"C1", "1/3 a^2 a' f''' + 1/2 c1 f'' + 1/24 a^3 f^(4)", "", ""},
            {"C2", "11/12 a a'^2 f''' + 5/6 a^2 a' f^(4) + 7/24 a^2 a'' f''' + 3/4 c1 f''' + 1/12 a^3 f^(5)", "", ""},
            {"C3",
             "1/3 a a' a'' f''' + 11/24 a a'^2 f^(4) + 1/6 c1 f^(4) + 1/48 a^3 f^(6) + 1/18 a^2 a''' f''' + "
             "1/6 a^2 a'' f^(4) + 1/4 a^2 a' f^(5)",
             "", ""},
            {"D1", "1/8 a^3 a' f^(4) + 1/6 a^3 a'' f''' + 1/120 a^(4) f^(5) + 1/2 a^2 a'^2 f''' + 1/2 d1 f''",
             "1/8 a^3 a' f^(4) + 1/6 a^3 a'' f''' + 1/120 a^4 f^(5) + 1/2 a^2 a'^2 f''' + 1/2 d1 f''",
             "a^(4) read as the power a^4"},
            {"D2",
             "9/16 a^3 a'' f^(4) + 1/2 d2 a' f'' + 7/4 a^2 a' a'' f''' + d1 f''' + 1/6 a^3 a''' f''' + "
             "1/48 a^4 f^(6) + 3/8 a^3 a' f^(5) + 15/8 a^2 a'^2 f^(4) + 3/2 a a'^3 f'''",
             "9/16 a^3 a'' f^(4) + 1/2 d2 f'' + 7/4 a^2 a' a'' f''' + d1 f''' + 1/6 a^3 a''' f''' + "
             "1/48 a^4 f^(6) + 3/8 a^3 a' f^(5) + 15/8 a^2 a'^2 f^(4) + 3/2 a a'^3 f'''",
             "stray a' in the d2 term"},
            {"D3",
             "17/24 a^2 a' a'' f''' + 1/72 a^3 a''' f''' + 17/48 a^3 a'' f^(4) + 11/12 a a'^3 f''' + "
             "5/4 a^2 a'^2 f^(4) + 3/4 d1 f''' + 1/72 a^4 f^(6) + 1/4 a^3 a' f^(5)",
             "", ""},
            {"D4",
             "7/16 a^3 a'^2 f^(6) + 3/4 a^3 a'' f^(5) + 29/30 a^2 a' a''' f''' + 27/8 a a'^3 f^(4) + "
             "1/48 a^4 f^(7) + 3/5 d2 f''' + 29/10 a a'^2 a'' f''' + 4 a^2 a' a'' f^(4) + d1 f^(4) + "
             "21/8 a^2 a'^2 f^(5) + 1/3 a^3 a''' f^(4) + 1/12 a^3 a' a^(4) f''' + 9/10 a^2 a''^2 f'''",
             "7/16 a^3 a' f^(6) + 3/4 a^3 a'' f^(5) + 29/30 a^2 a' a''' f''' + 27/8 a a'^3 f^(4) + "
             "1/48 a^4 f^(7) + 3/5 d2 f''' + 29/10 a a'^2 a'' f''' + 4 a^2 a' a'' f^(4) + d1 f^(4) + "
             "21/8 a^2 a'^2 f^(5) + 1/3 a^3 a''' f^(4) + 1/12 a^3 a^(4) f''' + 9/10 a^2 a''^2 f'''",
             "a'2 read as a'; extra a' in the a^(4) term"},
            {"D5",
             "23/576 a^3 a^(4) f^(4) + 1/144 a^3 a^(5) f''' + 19/48 a^2 a''^2 f^(4) + 1/8 d2 f^(4) + "
             "1/8 a^3 a'' f^(6) + 13/144 a^3 a''' f^(5) + 3/4 a a'^3 f^(5) + 1/384 a^4 f^(8) + "
             "23/144 a^2 a'' a''' f''' + 7/16 a^2 a'^2 f^(6) + 3/16 a a' a''^2 f''' + 1/16 a^3 a' f^(7) + "
             "1/8 d1 f^(5) + 73/144 a^2 a' a''' f^(4) + 13/144 a^2 a' a^(4) f''' + 47/48 a^2 a' a'' f^(5) + "
             "7/18 a a'^2 a''' f''' + 4/3 a a'^2 a'' f^(4)",
             "", ""},
        };
        for (auto& x : e)
            if (x.corrected.empty()) x.corrected = x.literal;
        return e;
    }();
    return v;
}

const std::vector<ConstraintEntry>& constraints() {
    static const std::vector<ConstraintEntry> v = {
        {"b1", "1/2 a^2", 1, "(a^2/2!)'"},
        {"c1", "1/6 a^3", 2, "(a^3/3!)''"},
        {"d1", "1/24 a^4", 3, "(a^4/4!)'''"},
        {"d2", "5/24 a^3 a^(4) + 8/3 a a'^2 a'' + a^2 a''^2 + 31/18 a^2 a' a'''", 0,
         "5/24 a^3 a^(4) + 8/3 a (a')^2 a'' + a^2 (a'')^2 + 31/18 a^2 a' a'''"},
    };
    return v;
}

namespace {

JetRational jr(const CoeffExpr& c, std::vector<int> e, int l = 0) { return JetRational::term(c, std::move(e), l); }
JetRational jr(long p, long q, std::vector<int> e, int l = 0) { return jr(CoeffExpr(Rational(p, q)), std::move(e), l); }

}  // namespace

JetRational burgers_quasi_miura(int n) {
    switch (n) {
        case 1: return jr(1, 2, {-1, 1});
        case 2: return (jr(1, 8, {-2, 0, 1}) - jr(1, 6, {-3, 2})).dx();
        case 3:
            return (jr(1, 48, {-3, 0, 0, 0, 1}) - jr(1, 6, {-4, 1, 0, 1}) - jr(1, 8, {-4, 0, 2}) + jr(3, 4, {-5, 2, 1})).dx();
    }
    throw std::invalid_argument("printed Burgers corrections exist for n = 1, 2, 3");
}

JetRational burgers_quasi_miura_corrected(int n) {
    if (n != 3) return burgers_quasi_miura(n);
    return burgers_quasi_miura(3) - jr(1, 2, {-6, 4}).dx();
}

JetRational linear_quasi_miura(int n) {
    const CoeffExpr u = CoeffExpr::u(), u2 = CoeffExpr::u(2);
    if (n == 1) return (jr(u, {-1, 1}) + jr(1, 1, {1}, 1)) * JetRational(CoeffExpr(Rational(1, 2)));
    if (n == 2) {
        JetRational inner = jr(u2 * Rational(1, 2), {-2, 0, 0, 1}) + jr(u * Rational(3), {-1, 0, 1}) -
                            jr(u2 * Rational(7, 3), {-3, 1, 1}) - jr(u * Rational(7, 3), {-2, 2}) +
                            jr(u2 * Rational(2), {-4, 3}) + jr(1, 2, {0, 1}, 2) + jr(2, 1, {0, 1}, 1) + jr(2, 1, {0, 1}) +
                            jr(u, {-1, 0, 1}, 1) - jr(u, {-2, 2}, 1);
        return inner * JetRational(CoeffExpr(Rational(1, 4)));
    }
    throw std::invalid_argument("printed a = u corrections exist for n = 1, 2");
}

double initial_P(int which, double x, bool corrected) {
    using std::cos, std::sin;
    const double pi = std::numbers::pi, q = pi * pi;
    switch (which) {
        case 1: {
            double s = corrected ? sin(pi * x / 6) : sin(pi * x);
            return 9.0 / 4 - 9 * cos(pi * x / 6) / (36 + q) + 3 * pi * s / (2 * (36 + q)) +
                   24 * pi * cos(pi * x / 12) / (144 + q) + 288 * sin(pi * x / 12) / (144 + q);
        }
        case 2:
            return 12 * pi * cos(pi * x / 6) / (q + 36) - 9 * cos(pi * x / 3) / (4 * (q + 9)) +
                   72 * sin(pi * x / 6) / (q + 36) + 3 * pi * sin(pi * x / 3) / ((corrected ? 4 : 9) * (q + 9)) + 9.0 / 4;
        case 3:
            return 1.0 / 4 - 9 * cos(pi * x / 6) / (36 + q) + 3 * pi * sin(pi * x / 6) / (2 * (36 + q));
    }
    throw std::invalid_argument("initial P exists for data 1, 2, 3");
}

}  // namespace ivcl::reference
