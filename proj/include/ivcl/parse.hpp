// Plain-text notation for coefficients, differential polynomials and eps-series.
//
//   1/2 a f'' u_x^2 - eps u u_xx + eps^2 b1 u_4x
//
// Function symbols: identifiers with primes or ^(n) for u-derivatives, "u" is the
// identity, "$c" a constant. Jet variables: u_x, u_xx, u_xxx, u_4x, u_(k).
// Powers: ^n (n may be negative for function symbols). Parentheses group sums.
#pragma once

#include "ivcl/algebra.hpp"

#include <map>
#include <string>

namespace ivcl {

using EpsPoly = std::map<int, DiffPoly>;   // eps power -> component

EpsPoly parse_eps_poly(const std::string& text);
CoeffExpr parse_coeff(const std::string& text);
DiffPoly parse_diffpoly(const std::string& text);
// exact when the text is a polynomial in eps and K is at least its eps degree
EpsCurrent parse_current(const std::string& text, int K, bool exact);

}  // namespace ivcl
