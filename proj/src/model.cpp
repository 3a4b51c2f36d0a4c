#include "wrapframe/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace wrapframe {

std::string path_to_string(const Path& p) {
    std::string out;
    for (const auto& a : p) {
        if (!out.empty()) out += '.';
        out += a;
    }
    return out;
}

// ------------------------------------------------------------------ labels

bool is_label(const std::string& text) {
    if (text.size() < 2) return false;
    char c = text[0];
    return c == '@' || c == '?' || c == '$';
}

LabelSort label_sort(const std::string& label) {
    if (!is_label(label))
        throw std::invalid_argument("not a label: '" + label + "'");
    switch (label[0]) {
        case '@': return LabelSort::base;
        case '?': return LabelSort::node_var;
        default: return LabelSort::wrap_var;
    }
}

// --------------------------------------------------------------- signature

void Signature::add_label(const std::string& label) {
    switch (label_sort(label)) {
        case LabelSort::base: base_labels.insert(label); break;
        case LabelSort::node_var: node_vars.insert(label); break;
        case LabelSort::wrap_var: wrap_vars.insert(label); break;
    }
}

void Signature::merge(const Signature& other) {
    types.insert(other.types.begin(), other.types.end());
    attributes.insert(other.attributes.begin(), other.attributes.end());
    for (const auto& [name, arity] : other.relations) {
        auto [it, fresh] = relations.emplace(name, arity);
        if (!fresh && it->second != arity)
            throw std::invalid_argument("relation '" + name +
                                        "' declared with two arities");
    }
    base_labels.insert(other.base_labels.begin(), other.base_labels.end());
    node_vars.insert(other.node_vars.begin(), other.node_vars.end());
    wrap_vars.insert(other.wrap_vars.begin(), other.wrap_vars.end());
}

std::vector<std::string> Signature::check() const {
    std::vector<std::string> bad;
    for (const auto& [name, arity] : relations)
        if (arity < 2)
            bad.push_back("relation '" + name + "' has arity < 2");
    auto empty_name = [&](const std::set<std::string>& s) {
        return s.count("") != 0;
    };
    if (empty_name(types) || empty_name(attributes))
        bad.push_back("empty name in signature");
    return bad;
}

std::set<std::string> Signature::all_labels() const {
    std::set<std::string> out = base_labels;
    out.insert(node_vars.begin(), node_vars.end());
    out.insert(wrap_vars.begin(), wrap_vars.end());
    return out;
}

// ------------------------------------------------------------------- model

bool Model::has_entity(const Entity& e) const {
    if (e.is_node()) return has_node(e.id);
    return e.id >= 0 && e.id < static_cast<int>(wrappings.size());
}

std::optional<int> Model::wrap_of(int node) const {
    for (int w = 0; w < static_cast<int>(wrappings.size()); ++w)
        if (wrappings[w].members.count(node)) return w;
    return std::nullopt;
}

std::optional<Entity> Model::find_label(const std::string& label) const {
    for (const auto& [id, info] : nodes)
        if (info.labels.count(label)) return node_entity(id);
    for (int w = 0; w < static_cast<int>(wrappings.size()); ++w)
        if (wrappings[w].labels.count(label)) return wrap_entity(w);
    return std::nullopt;
}

std::optional<Entity> Model::attr_target(int node,
                                         const std::string& attr) const {
    auto it = attrs.find({node, attr});
    if (it == attrs.end()) return std::nullopt;
    return it->second;
}

std::optional<Entity> Model::follow(const Entity& from,
                                    const Path& path) const {
    Entity cur = from;
    for (const auto& a : path) {
        if (!cur.is_node()) return std::nullopt;  // wrappings have no edges
        auto next = attr_target(cur.id, a);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return cur;
}

std::optional<Entity> Model::interp(const std::string& label,
                                    const Path& path) const {
    auto start = find_label(label);
    if (!start) return std::nullopt;
    return follow(*start, path);
}

bool Model::has_type(const Entity& e, const std::string& type) const {
    if (!has_entity(e)) return false;
    return types_of(e).count(type) != 0;
}

const std::set<std::string>& Model::labels_of(const Entity& e) const {
    static const std::set<std::string> none;
    if (e.is_node()) {
        auto it = nodes.find(e.id);
        return it == nodes.end() ? none : it->second.labels;
    }
    if (e.id < 0 || e.id >= static_cast<int>(wrappings.size())) return none;
    return wrappings[e.id].labels;
}

const std::set<std::string>& Model::types_of(const Entity& e) const {
    static const std::set<std::string> none;
    if (e.is_node()) {
        auto it = nodes.find(e.id);
        return it == nodes.end() ? none : it->second.types;
    }
    if (e.id < 0 || e.id >= static_cast<int>(wrappings.size())) return none;
    return wrappings[e.id].types;
}

std::set<std::string> Model::all_labels() const {
    std::set<std::string> out;
    for (const auto& [id, info] : nodes)
        out.insert(info.labels.begin(), info.labels.end());
    for (const auto& w : wrappings) out.insert(w.labels.begin(), w.labels.end());
    return out;
}

int Model::fresh_node_id() const {
    return nodes.empty() ? 0 : nodes.rbegin()->first + 1;
}

Signature Model::signature() const {
    Signature sig;
    for (const auto& [id, info] : nodes) {
        for (const auto& l : info.labels) sig.add_label(l);
        sig.types.insert(info.types.begin(), info.types.end());
    }
    for (const auto& w : wrappings) {
        for (const auto& l : w.labels) sig.add_label(l);
        sig.types.insert(w.types.begin(), w.types.end());
    }
    for (const auto& [key, tgt] : attrs) {
        (void)tgt;
        sig.attributes.insert(key.second);
    }
    for (const auto& r : rels)
        sig.relations.emplace(r.name, static_cast<int>(r.args.size()));
    return sig;
}

std::vector<std::string> Model::validate() const {
    std::vector<std::string> bad;
    if (nodes.empty()) bad.push_back("model has no nodes (V must be nonempty)");

    // wrappings: nonempty, existing members, pairwise disjoint, unique names
    std::map<int, int> member_of;
    std::set<std::string> wrap_names;
    for (int w = 0; w < static_cast<int>(wrappings.size()); ++w) {
        const auto& wr = wrappings[w];
        if (wr.members.empty())
            bad.push_back("wrapping '" + wr.name + "' is empty");
        if (!wrap_names.insert(wr.name).second)
            bad.push_back("duplicate wrapping name '" + wr.name + "'");
        for (int n : wr.members) {
            if (!has_node(n)) {
                bad.push_back("wrapping '" + wr.name +
                              "' lists unknown node " + std::to_string(n));
                continue;
            }
            auto [it, fresh] = member_of.emplace(n, w);
            if (!fresh && it->second != w)
                bad.push_back("node " + std::to_string(n) +
                              " belongs to two wrappings");
        }
        for (const auto& l : wr.labels)
            if (label_sort(l) != LabelSort::wrap_var)
                bad.push_back("wrapping '" + wr.name +
                              "' carries node-sort label '" + l + "'");
    }

    // labelling is functional; node labels have node sort
    std::map<std::string, Entity> seen_label;
    auto check_label = [&](const std::string& l, const Entity& e) {
        auto [it, fresh] = seen_label.emplace(l, e);
        if (!fresh && !(it->second == e))
            bad.push_back("label '" + l + "' names two entities");
    };
    for (const auto& [id, info] : nodes) {
        for (const auto& l : info.labels) {
            if (label_sort(l) == LabelSort::wrap_var)
                bad.push_back("node " + std::to_string(id) +
                              " carries wrapping-sort label '" + l + "'");
            check_label(l, node_entity(id));
        }
    }
    for (int w = 0; w < static_cast<int>(wrappings.size()); ++w)
        for (const auto& l : wrappings[w].labels)
            check_label(l, wrap_entity(w));

    // attribute edges: known endpoints, non-escapability
    for (const auto& [key, tgt] : attrs) {
        const auto& [src, attr] = key;
        if (!has_node(src)) {
            bad.push_back("attribute '" + attr + "' leaves unknown node " +
                          std::to_string(src));
            continue;
        }
        if (!has_entity(tgt)) {
            bad.push_back("attribute '" + attr + "' from node " +
                          std::to_string(src) + " targets unknown entity");
            continue;
        }
        auto it = member_of.find(src);
        if (it != member_of.end()) {
            bool ok = tgt.is_node() && member_of.count(tgt.id) &&
                      member_of.at(tgt.id) == it->second;
            if (!ok)
                bad.push_back("non-escapability: attribute '" + attr +
                              "' leaves wrapping '" +
                              wrappings[it->second].name + "' from node " +
                              std::to_string(src));
        }
    }

    // relations: known arguments
    for (const auto& r : rels)
        for (const auto& a : r.args)
            if (!has_entity(a))
                bad.push_back("relation '" + r.name +
                              "' has an unknown argument");

    // reachability: BFS inside each w-set from its labelled nodes
    std::set<int> reached;
    std::deque<int> queue;
    for (const auto& [id, info] : nodes)
        if (!info.labels.empty()) {
            reached.insert(id);
            queue.push_back(id);
        }
    auto same_wset = [&](int a, int b) {
        auto ia = member_of.find(a), ib = member_of.find(b);
        bool wa = ia != member_of.end(), wb = ib != member_of.end();
        if (wa != wb) return false;
        return !wa || ia->second == ib->second;
    };
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (auto it = attrs.lower_bound({cur, ""});
             it != attrs.end() && it->first.first == cur; ++it) {
            const Entity& tgt = it->second;
            if (!tgt.is_node() || !has_node(tgt.id)) continue;
            if (!same_wset(cur, tgt.id)) continue;
            if (reached.insert(tgt.id).second) queue.push_back(tgt.id);
        }
    }
    for (const auto& [id, info] : nodes)
        if (!reached.count(id))
            bad.push_back("reachability: node " + std::to_string(id) +
                          " is not attribute-accessible from a labelled node"
                          " of its w-set");

    return bad;
}

WSetRef w_set_of(const Model& m, int node) {
    if (!m.has_node(node))
        throw std::out_of_range("w_set_of: unknown node " +
                                std::to_string(node));
    return m.wrap_of(node);
}

}  // namespace wrapframe
