#pragma once

// Canonical minimal models of a formula: convert to clause form, branch-
// saturate the clauses over congruence-closed fact sets, keep the minimal
// fact sets, and read each back as a concrete model.

#include <optional>
#include <string>
#include <vector>

#include "wrapframe/avl.hpp"
#include "wrapframe/factset.hpp"
#include "wrapframe/model.hpp"

namespace wrapframe {

// term budget for saturating a clause form: distinct labels plus attribute
// occurrences of the source formula bound every term the search can need
int c0_bound(const Cnf& cnf);

// close `facts` under the deduction schemata; `budget` caps term creation
// for any follow-up growth (0 = unlimited)
FactSet deduce(FactSet facts, int budget);

// All saturated consistent branches of the clause set, deduplicated, in
// canonical order.  A clause fires on a branch when its premises are
// contained and none of its conclusions is; firing splits the branch per
// conclusion.  Branches that fire an integrity constraint die.
std::vector<FactSet> saturate(const Cnf& cnf);

// drop every fact set that strictly includes another one; deduplicate
std::vector<FactSet> antichain_reduce(std::vector<FactSet> sets);

struct Construction {
    std::optional<Model> model;
    std::string error;  // why no canonical model exists, when model is empty
};
Construction model_from_factset(const FactSet& fs);

// the canonical model set: one minimal model per surviving branch (empty
// when the formula has no canonical models)
std::vector<Model> minimal_model_set(const Formula& f);

}  // namespace wrapframe
