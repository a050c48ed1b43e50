// Order-by-order classification of commuting pairs
//   main = u^2 + eps a u_x + sum eps^k (normal-form terms with unknown letters)
//   sym  = f + sum eps^k (all monomials with unknown capitals)
// by requiring the bracket to vanish order by order.
#pragma once

#include "ivcl/algebra.hpp"
#include "ivcl/serialize.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ivcl {

struct AnsatzTerm {
    std::string name;     // coefficient symbol, e.g. "b1" or "C2"
    int order = 0;
    JetMonomial monomial;
};

struct Ansatz {
    int K = 0;
    std::vector<AnsatzTerm> letters;    // main current, orders >= 2
    std::vector<AnsatzTerm> capitals;   // symmetry current, orders >= 1
    EpsCurrent main;                    // with letter symbols (and a)
    EpsCurrent sym;                     // with capital symbols (and f)
};

// names for orders <= 5 follow the usual lettering; beyond that they are generated.
// overrides move a small letter onto another monomial of the same degree.
using LetterOverrides = std::map<std::string, JetMonomial, std::less<>>;
Ansatz build_ansatz(int K, const LetterOverrides& overrides = {});
// d2 on u_x u_xxx instead of u_xx^2: the basis the reference coefficients are written in
LetterOverrides reference_basis();

struct SolvedCapital {
    std::string name;
    int order = 0;
    JetMonomial monomial;
    CoeffExpr value;   // lower letters already fixed at this order substituted
};

struct LetterConstraint {
    std::string letter;
    int found_at = 0;     // bracket order that produced it
    CoeffExpr value;      // letter = value
    std::string display;  // compact antiderivative form when available
};

struct Unresolved {
    int order = 0;
    CoeffExpr equation;   // = 0
};

struct ClassificationResult {
    int K = -1;                          // highest solved order
    std::optional<CoeffExpr> a_value;    // set when a was specialised up front
    Ansatz ansatz;
    std::vector<SolvedCapital> capitals;
    std::vector<LetterConstraint> constraints;
    std::vector<Unresolved> unresolved;
    bool verified = false;

    Substitution letter_substitution() const;
    // currents with every known constraint substituted
    EpsCurrent main_current() const;
    EpsCurrent sym_current() const;
    const SolvedCapital* capital(const std::string& name) const;
    const LetterConstraint* constraint(const std::string& letter) const;
};

struct ClassifyOptions {
    int K = 3;
    std::optional<CoeffExpr> a_value;   // e.g. u or 1; must be nonzero
    bool verify = true;
    LetterOverrides overrides;
};

ClassificationResult solve_order(const Ansatz& ansatz, int k, const ClassificationResult& prior);
ClassificationResult classify(const ClassifyOptions& opt);
inline ClassificationResult classify(int K) { return classify(ClassifyOptions{K, std::nullopt, true, {}}); }

// main current with a fixed, through eps^K. Needs constraints through order K,
// so it runs the classification to K + 1 with a substituted from the start.
EpsCurrent specialize(const CoeffExpr& a_value, int K);
EpsCurrent specialize(const ClassificationResult& result, const CoeffExpr& a_value);

// "(a^2/2)'" style when value is an iterated derivative of a monomial
std::string antiderivative_display(const CoeffExpr& value);

// every term linear in exactly one f^(m) with m >= 2
bool linear_in_higher_f(const CoeffExpr& c);

json to_json(const ClassificationResult& r);
std::string constraint_table(const ClassificationResult& r);

inline constexpr const char* kClassifySchema = "ivcl.classification/1";

}  // namespace ivcl
