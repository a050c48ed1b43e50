// Consolidated claim audit. Every entry is keyed by a module/topic anchor and
// carries its method, a status and the measured data.
#pragma once

#include "ivcl/serialize.hpp"
#include "ivcl/tolerances.hpp"

#include <string>
#include <vector>

namespace ivcl {

struct AuditEntry {
    std::string id;
    std::string anchor;
    std::string method;   // symbolic or numeric
    std::string status;   // verified, refuted, measured, unverifiable, error
    std::string summary;
    json data = json::object();
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    const AuditEntry* find(const std::string& id) const;
    int count(const std::string& status) const;
};

struct AuditOptions {
    int random_samples = 100;   // normal-form and ranking property suites
    unsigned seed = 20240601;
    Tolerances tol = active_tolerances();
};

// Runs every check; a failing check becomes an "error" entry instead of
// aborting the report.
AuditReport audit_all(const AuditOptions& opt = {});

// the anchors the report must cover
const std::vector<std::string>& audit_anchors();

json to_json(const AuditReport& r);
std::string to_text(const AuditReport& r);

}  // namespace ivcl
