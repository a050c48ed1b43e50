// Miura transformations v = u + eps^k d_x beta(u) acting on conservation-law
// currents, general invertible changes of variable and the rank-ordered
// normal-form reduction.
#pragma once

#include "ivcl/algebra.hpp"
#include "ivcl/serialize.hpp"

#include <string>
#include <vector>

namespace ivcl {

struct MiuraStep {
    int order = 2;     // k
    DiffPoly beta;     // homogeneous of degree k - 1
};

struct MiuraSeq {
    int K = 0;
    std::vector<MiuraStep> steps;   // strictly increasing orders
    bool empty() const { return steps.empty(); }
};

// old = F(new) as an eps-series in the new variable (written u in storage).
// F_0 must be c u + d with rational c != 0.
struct GeneralMiura {
    EpsCurrent F;
    Rational scale() const;
    Rational shift() const;
};

GeneralMiura identity_miura(int K);
void validate(const GeneralMiura& gm);
void validate(const MiuraStep& step);

// P(S) through eps^K where P is an eps-series in w and S[0] = c w + d.
EpsCurrent compose(const EpsCurrent& P, const EpsCurrent& S, int K);

EpsCurrent apply_miura(const EpsCurrent& omega, const MiuraStep& step, int K);
EpsCurrent apply_miura(const EpsCurrent& omega, const MiuraSeq& seq, int K);

GeneralMiura invert_general(const GeneralMiura& gm, int K);
// the map new = H(old) of a step sequence, as a series in old
EpsCurrent forward_map(const MiuraSeq& seq, int K);
GeneralMiura to_general(const MiuraSeq& seq, int K);

struct NormalFormResult {
    EpsCurrent omega;
    MiuraSeq seq;
};

NormalFormResult normal_form(const EpsCurrent& omega, int K);
bool is_normal_form(const EpsCurrent& omega, int K);

EpsCurrent change_variable(const EpsCurrent& omega, const GeneralMiura& gm, int K);

// Checks the linear-invariant reduction u = v - eps v_x in both directions:
// forward: the current (1-eps d)^{-1}-expanded in v mapped to u
// reverse: sum eps^k u u_(k) mapped back to v.
struct DirectionAudit {
    int K = 0;
    bool statement_exact = false;   // v solves the non-evolutionary law => u normal form
    bool proof_exact = false;       // u normal form => v solves the law
    EpsCurrent statement_residual;
    EpsCurrent proof_residual;
    EpsCurrent proof_final_vs_normal;   // proof's last line read as a current in u, minus the normal form
    std::string verdict;
};

EpsCurrent linear_invariant_normal_current(int K);   // sum eps^k u u_(k)
EpsCurrent nonlocal_law_current(int K);              // u^2/2 + sum eps^k d^k(u^2/2)
DirectionAudit audit_linear_reduction(int K);

json to_json(const MiuraSeq& seq);
MiuraSeq miura_seq_from_json(const json& j);
json to_json(const GeneralMiura& gm);
GeneralMiura general_miura_from_json(const json& j);

inline constexpr const char* kMiuraSchema = "ivcl.miura-seq/1";
inline constexpr const char* kGeneralMiuraSchema = "ivcl.general-miura/1";

}  // namespace ivcl
