#include "ivcl/serialize.hpp"

namespace ivcl {

static const char* kind_name(SymbolKind k) {
    switch (k) {
    case SymbolKind::Defined: return "defined";
    case SymbolKind::Const: return "const";
    case SymbolKind::Free: break;
    }
    return "free";
}

json to_json(const FuncSymbol& s, int power) {
    json j;
    j["base"] = s.base;
    j["deriv_order"] = s.deriv;
    j["power"] = power;
    if (s.kind != SymbolKind::Free) j["kind"] = kind_name(s.kind);
    return j;
}

json to_json(const CoeffExpr& c) {
    json arr = json::array();
    for (const auto& [m, q] : c.terms()) {
        json t;
        t["rational"] = rational_str(q);
        json syms = json::array();
        for (const auto& [s, p] : m) syms.push_back(to_json(s, p));
        t["symbols"] = std::move(syms);
        arr.push_back(std::move(t));
    }
    return arr;
}

json to_json(const DiffPoly& p) {
    json arr = json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        json t;
        t["monomial"] = it->first.exps();
        t["coeff"] = to_json(it->second);
        arr.push_back(std::move(t));
    }
    return arr;
}

json to_json(const EpsCurrent& w) {
    json j;
    j["order"] = w.K();
    j["exact"] = w.exact();
    json comps = json::object();
    for (int k = 0; k <= w.K(); ++k) comps[std::to_string(k)] = to_json(w[k]);
    j["components"] = std::move(comps);
    return j;
}

template <class T>
static T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bad field '") + key + "': " + e.what());
    }
}

static FuncSymbol symbol_from_json(const json& j, int& power) {
    FuncSymbol s;
    s.base = field<std::string>(j, "base");
    s.deriv = field<int>(j, "deriv_order");
    power = field<int>(j, "power");
    if (s.base.empty() || s.deriv < 0 || power == 0) throw SchemaError("invalid symbol entry");
    std::string kind = j.contains("kind") ? field<std::string>(j, "kind") : "free";
    if (kind == "free")
        s.kind = SymbolKind::Free;
    else if (kind == "defined")
        s.kind = SymbolKind::Defined;
    else if (kind == "const")
        s.kind = SymbolKind::Const;
    else
        throw SchemaError("unknown symbol kind " + kind);
    if (s.kind == SymbolKind::Defined && (s.base != "u" || s.deriv != 0))
        throw SchemaError("only the identity u is a defined symbol");
    return s;
}

CoeffExpr coeff_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("coefficient must be an array");
    CoeffExpr c;
    for (const auto& t : j) {
        Rational q;
        try {
            q = parse_rational(field<std::string>(t, "rational"));
        } catch (const AlgebraError& e) {
            throw SchemaError(e.what());
        }
        if (!t.contains("symbols") || !t.at("symbols").is_array()) throw SchemaError("missing symbols array");
        CoeffExpr term(q);
        for (const auto& sj : t.at("symbols")) {
            int p = 0;
            FuncSymbol s = symbol_from_json(sj, p);
            term = term * CoeffExpr::symbol(s, p);
        }
        c += term;
    }
    return c;
}

DiffPoly poly_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("polynomial must be an array");
    DiffPoly p;
    for (const auto& t : j) {
        auto e = field<std::vector<int>>(t, "monomial");
        for (int v : e)
            if (v < 0) throw SchemaError("negative jet exponent");
        if (!t.contains("coeff")) throw SchemaError("missing field 'coeff'");
        p.add_term(JetMonomial(e), coeff_from_json(t.at("coeff")));
    }
    return p;
}

EpsCurrent current_from_json(const json& j) {
    int K = field<int>(j, "order");
    bool exact = field<bool>(j, "exact");
    if (K < 0) throw SchemaError("negative order");
    if (!j.contains("components") || !j.at("components").is_object()) throw SchemaError("missing components");
    EpsCurrent w(K, exact);
    for (const auto& [key, val] : j.at("components").items()) {
        int k = 0;
        try {
            std::size_t pos = 0;
            k = std::stoi(key, &pos);
            if (pos != key.size()) throw SchemaError("bad component key " + key);
        } catch (const std::logic_error&) {
            throw SchemaError("bad component key " + key);
        }
        if (k < 0 || k > K) throw SchemaError("component key out of range " + key);
        w.at(k) = poly_from_json(val);
    }
    return w;
}

json current_document(const EpsCurrent& w) {
    json j;
    j["schema"] = kCurrentSchema;
    j["version"] = kVersion;
    j["current"] = to_json(w);
    return j;
}

EpsCurrent current_from_document(const json& j) {
    if (!j.is_object()) throw SchemaError("document must be an object");
    std::string schema = field<std::string>(j, "schema");
    if (schema != kCurrentSchema) throw SchemaError("unknown schema version " + schema);
    if (!j.contains("current")) throw SchemaError("missing field 'current'");
    return current_from_json(j.at("current"));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ivcl
