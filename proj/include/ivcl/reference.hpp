// Closed-form reference values the toolkit is checked against, in the text
// notation of parse.hpp. Where the printed form has an evident misprint both
// the literal reading and the corrected one are kept.
#pragma once

#include "ivcl/asymptotics.hpp"

#include <string>
#include <vector>

namespace ivcl::reference {

struct Entry {
    std::string name;
    std::string literal;     // as printed
    std::string corrected;   // equal to literal unless a misprint was found
    std::string note;
};

// A, B1..B2, C1..C3, D1..D5 in the basis with d2 on u_x u_xxx
const std::vector<Entry>& capitals();
struct ConstraintEntry {
    std::string letter;
    std::string antiderivative;   // letter = d^m/du^m of this
    int derivs = 0;
    std::string display;
};

// b1, c1, d1, d2 (d2 in the basis with d2 on u_x u_xxx)
const std::vector<ConstraintEntry>& constraints();

// Burgers quasi-Miura corrections v^1..v^3 in the jets, printed brackets already
// differentiated. The eps^3 bracket is kept as printed.
JetRational burgers_quasi_miura(int n);
// the corrected eps^3 term: the printed bracket minus u_xx^4 / (2 u_x^6)
JetRational burgers_quasi_miura_corrected(int n);
// v^1, v^2 for a(u) = u, with the logarithm L = ln u_x
JetRational linear_quasi_miura(int n);

// P(x, 0) for the data v1 = sin(pi x/12) + 2, v2 = sin(pi x/6) + 2, v3 = sin(pi x/12)
// at eps = 1 (which = 1, 2, 3), literal or corrected
double initial_P(int which, double x, bool corrected);

}  // namespace ivcl::reference
