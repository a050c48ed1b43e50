// Canonical JSON for symbolic artifacts. Serialization order follows the
// canonical containers (rank order for jet monomials, symbol order inside
// coefficients) so dump(parse(dump(x))) is byte-identical.
#pragma once

#include "ivcl/algebra.hpp"

#include "json.hpp"

#include <string>

namespace ivcl {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCurrentSchema = "ivcl.eps-current/1";
inline constexpr const char* kPolySchema = "ivcl.diff-poly/1";

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json to_json(const FuncSymbol& s, int power);
json to_json(const CoeffExpr& c);
json to_json(const DiffPoly& p);
json to_json(const EpsCurrent& w);

CoeffExpr coeff_from_json(const json& j);
DiffPoly poly_from_json(const json& j);
EpsCurrent current_from_json(const json& j);

// wrapped documents carry the schema tag
json current_document(const EpsCurrent& w);
EpsCurrent current_from_document(const json& j);
std::string dump(const json& j);

}  // namespace ivcl
