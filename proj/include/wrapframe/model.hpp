#pragma once
// Feature structures with wrappings: typed, labelled directed graphs with
// functional attribute edges, m-ary relations, and wrappings -- disjoint
// nonempty node sets that act as entities of their own (attachable by
// attributes and relations from outside).

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wrapframe {

using Path = std::vector<std::string>;  // attribute names, outermost first

std::string path_to_string(const Path& p);

// ------------------------------------------------------------------ labels

// Labels carry their sigil: "@b" names a discourse individual (base label),
// "?x" a node variable, "$T" a wrapping variable.
enum class LabelSort { base, node_var, wrap_var };

bool is_label(const std::string& text);
LabelSort label_sort(const std::string& label);  // throws on non-label

// --------------------------------------------------------------- signature

struct Signature {
    std::set<std::string> types;
    std::set<std::string> attributes;
    std::map<std::string, int> relations;  // name -> arity (>= 2)
    std::set<std::string> base_labels;
    std::set<std::string> node_vars;
    std::set<std::string> wrap_vars;

    void add_label(const std::string& label);
    void merge(const Signature& other);
    std::vector<std::string> check() const;  // invariant violations
    std::set<std::string> all_labels() const;
};

// ------------------------------------------------------------------ entity

// An entity is either a node or a wrapping. Wrappings are addressed by index
// into Model::wrappings, so the two identifier spaces cannot collide.
struct Entity {
    enum class Kind { node, wrapping };
    Kind kind = Kind::node;
    int id = 0;

    friend auto operator<=>(const Entity&, const Entity&) = default;
    bool is_node() const { return kind == Kind::node; }
    bool is_wrapping() const { return kind == Kind::wrapping; }
};

inline Entity node_entity(int id) { return Entity{Entity::Kind::node, id}; }
inline Entity wrap_entity(int index) {
    return Entity{Entity::Kind::wrapping, index};
}

struct Rel {
    std::string name;
    std::vector<Entity> args;
    friend auto operator<=>(const Rel&, const Rel&) = default;
};

// ------------------------------------------------------------------- model

struct NodeInfo {
    std::set<std::string> labels;  // base labels and node variables
    std::set<std::string> types;
};

struct Wrapping {
    std::string name;              // serialization id, unique within a model
    std::set<std::string> labels;  // wrapping variables
    std::set<std::string> types;   // entity-level types (scope resolution)
    std::set<int> members;         // node ids, nonempty
};

struct Model {
    std::map<int, NodeInfo> nodes;
    std::map<std::pair<int, std::string>, Entity> attrs;  // functional
    std::set<Rel> rels;
    std::vector<Wrapping> wrappings;

    bool has_node(int id) const { return nodes.count(id) != 0; }
    bool has_entity(const Entity& e) const;

    // Index of the wrapping containing the node, or nullopt (complement).
    std::optional<int> wrap_of(int node) const;

    std::optional<Entity> find_label(const std::string& label) const;
    std::optional<Entity> attr_target(int node, const std::string& attr) const;
    std::optional<Entity> follow(const Entity& from, const Path& path) const;
    std::optional<Entity> interp(const std::string& label,
                                 const Path& path) const;

    bool has_type(const Entity& e, const std::string& type) const;
    const std::set<std::string>& labels_of(const Entity& e) const;
    const std::set<std::string>& types_of(const Entity& e) const;
    std::set<std::string> all_labels() const;
    int fresh_node_id() const;

    Signature signature() const;

    // Empty result iff the model is well formed: nonempty node set, disjoint
    // nonempty wrappings, functional labelling, reachability of every node
    // from a labelled node of its own w-set, and non-escapability of
    // attribute edges leaving wrapped nodes.
    std::vector<std::string> validate() const;
};

// w-set of a node: its wrapping index, or nullopt for the complement block.
using WSetRef = std::optional<int>;
WSetRef w_set_of(const Model& m, int node);

}  // namespace wrapframe
