// Burgers, negative and viscous Camassa-Holm type hierarchies, and the
// pseudo-differential recursion operators acting on flows.
#pragma once

#include "ivcl/algebra.hpp"
#include "ivcl/serialize.hpp"

#include <string>
#include <vector>

namespace ivcl {

enum class Family { Burgers, Negative, ViscousCH, Positive };

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct HierarchyFlow {
    Family family = Family::Burgers;
    int n = 0;
    EpsCurrent current;   // u_t = d_x current
    bool exact() const { return current.exact(); }
};

EpsCurrent burgers_current(int n);                         // (u + eps d)^n u
EpsCurrent negative_current(int n, int eps_sign = -1);     // (1/u + sign eps d 1/u)^n (1)
EpsCurrent viscous_ch_current(int K);                      // sum eps^k u u_(k)
EpsCurrent positive_current(int n, int K);                 // R^n u_x = d_x of this

HierarchyFlow make_flow(Family f, int n, int K = 5, int eps_sign = -1);

// Composition of primitive factors, applied right to left.
struct PseudoFactor {
    enum Kind { Dx, DxInv, Mul, OneMinusEpsD, OneMinusEpsDInv } kind = Dx;
    CoeffExpr value;   // multiplier for Mul, integration constant for DxInv
};

struct PseudoOp {
    std::string name;
    std::vector<PseudoFactor> factors;   // factors[0] is applied last
};

// R = d_x u (1 - eps d)^{-1} d_x^{-1}
PseudoOp recursion_operator(const CoeffExpr& constant = CoeffExpr());
// R^{-1} = d_x (1 - eps d) u^{-1} d_x^{-1}
PseudoOp inverse_recursion_operator(const CoeffExpr& constant = CoeffExpr());
PseudoOp compose(const PseudoOp& outer, const PseudoOp& inner);

// acts on a flow (not a current); throws "not a total derivative"
EpsCurrent apply_pseudo(const PseudoOp& op, const EpsCurrent& flow, int K);
EpsCurrent apply_pseudo(const PseudoOp& op, const DiffPoly& flow, int K);

struct PairCheck {
    std::string label;
    int n = 0, m = 0;
    int through = 0;          // orders checked
    bool pass = false;
    int failing_order = -1;
    std::string residual;
};

std::vector<PairCheck> burgers_involution_suite(int nmax = 4);
std::vector<PairCheck> negative_involution_suite(int nmax = 3, int eps_sign = -1);
// viscousCH(K) against negative(n), checked through eps^K
std::vector<PairCheck> mixed_involution_suite(int K = 5, int nmax = 2);

struct RecursionCheck {
    int n = 0;
    bool pass = false;
    std::string detail;
};

// R applied to the t_{-n} flow gives the t_{-(n-1)} flow plus c u_x
std::vector<RecursionCheck> recursion_consistency(int nmax = 3, int K = 5);

json to_json(const HierarchyFlow& f);

}  // namespace ivcl
