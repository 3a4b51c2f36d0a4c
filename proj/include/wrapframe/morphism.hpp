#pragma once

// Structure-preserving maps between models: labels, types, attribute edges,
// relation tuples, and wrapping membership are preserved; nodes may map to
// wrapping entities (how a bare placeholder node can stand for a whole
// wrapping).  Because attribute edges are functional and every entity is
// label-reachable, a homomorphism is determined by the labels alone, so at
// most one exists and the search is pure propagation.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wrapframe/avl.hpp"
#include "wrapframe/model.hpp"

namespace wrapframe {

using EntityMap = std::map<Entity, Entity>;

std::optional<EntityMap> find_homomorphism(const Model& from, const Model& to);

// `general` maps into `specific`: everything the general model states, the
// specific one does too
bool subsumes(const Model& general, const Model& specific);

bool is_isomorphic(const Model& a, const Model& b);

// disjoint union; node ids are renumbered, wrapping names uniquified.
// Throws std::invalid_argument when two inputs share a label.
Model juxtapose(const std::vector<Model>& models);

struct UnifyResult {
    std::optional<Model> model;
    std::string reason;  // why unification failed, when model is empty
};

// least common extension of the inputs under the given path equations
// (each a path-equation formula); shared labels identify entities
UnifyResult unify(const std::vector<Model>& models,
                  const std::vector<Formula>& equations);
UnifyResult unify(const Model& a, const Model& b,
                  const std::vector<Formula>& equations);

}  // namespace wrapframe
