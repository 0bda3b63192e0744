#pragma once

#include "qjp/candidates.hpp"
#include "qjp/imprecise.hpp"
#include "qjp/linalg.hpp"
#include "qjp/nogo.hpp"

#include <json.hpp>

namespace qjp {

using json = nlohmann::ordered_json;

/// {"dim": d, "re": [[...]], "im": [[...]]}, row-major.
json matrix_to_json(const Matrix &m);
/// Throws InvalidConfig on a malformed document.
Matrix matrix_from_json(const json &j);

/// {"candidate", "rows", "cols", "values", "all_nonneg", "marginal_error"}
/// plus "std_errors" and "samples" for stochastic tables.
json table_to_json(const JointTable &t);

/// {"axiom", "pass", "max_defect", "witness": {rho, P, Q} | null}
json axiom_to_json(const AxiomResult &r);
json audit_to_json(const AuditReport &r);

json slice_to_json(const FeasibleSlice &s);
/// {"alpha", "rho", "L", "feasible_slice": {...}}
json witness_to_json(const ViolationWitness &w);

json condition_witness_to_json(const ConditionWitness &w);

} // namespace qjp
