#pragma once
// JSON (de)serialization and Graphviz rendering for models.
//
// Schema:
//   {"nodes":    [{"id":int, "labels":[str], "types":[str]}],
//    "attrs":    [{"from":int, "attr":str, "to": int | {"wrap":str}}],
//    "rels":     [{"name":str, "args":[int | {"wrap":str}]}],
//    "wrappings":[{"id":str, "labels":[str], "types":[str], "members":[int]}]}
// "types" on wrappings is optional and usually absent; it carries the
// entity-level types a wrapping can acquire during scope resolution.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wrapframe/model.hpp"

namespace wrapframe {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Model model_from_json(const nlohmann::json& doc);
nlohmann::ordered_json model_to_json(const Model& m);  // deterministic

Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

// Graphviz DOT: wrappings as subgraph clusters, attribute edges solid and
// labelled, relation edges dashed.
std::string to_dot(const Model& m);

}  // namespace wrapframe
