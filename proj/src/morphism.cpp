#include "wrapframe/morphism.hpp"

#include <algorithm>
#include <stdexcept>

#include "wrapframe/factset.hpp"

namespace wrapframe {

std::optional<EntityMap> find_homomorphism(const Model& from, const Model& to) {
    EntityMap h;
    std::vector<Entity> work;
    bool ok = true;

    auto is_subset = [](const std::set<std::string>& small,
                        const std::set<std::string>& big) {
        return std::includes(big.begin(), big.end(), small.begin(),
                             small.end());
    };
    auto bind = [&](const Entity& x, const Entity& y) {
        if (!ok) return;
        auto [it, fresh] = h.emplace(x, y);
        if (!fresh) {
            ok = it->second == y;
            return;
        }
        if (x.is_wrapping() && !y.is_wrapping()) {
            ok = false;  // wrappings map to wrappings
            return;
        }
        if (!is_subset(from.types_of(x), to.types_of(y))) {
            ok = false;
            return;
        }
        work.push_back(x);
    };

    for (const auto& label : from.all_labels()) {
        auto x = from.find_label(label);
        auto y = to.find_label(label);
        if (!y) return std::nullopt;
        bind(*x, *y);
        if (!ok) return std::nullopt;
    }

    while (ok && !work.empty()) {
        Entity x = work.back();
        work.pop_back();
        Entity y = h.at(x);
        if (!x.is_node()) continue;

        auto lo = from.attrs.lower_bound({x.id, ""});
        for (auto it = lo; it != from.attrs.end() && it->first.first == x.id;
             ++it) {
            // x has outgoing attribute edges, so its image must too; only
            // nodes can have them
            if (!y.is_node()) return std::nullopt;
            auto target = to.attr_target(y.id, it->first.second);
            if (!target) return std::nullopt;
            bind(it->second, *target);
            if (!ok) return std::nullopt;
        }
        if (auto w = from.wrap_of(x.id)) {
            if (!y.is_node()) return std::nullopt;  // wrapped stays a node
            auto w2 = to.wrap_of(y.id);
            if (!w2) return std::nullopt;  // membership is preserved
            bind(wrap_entity(*w), wrap_entity(*w2));
            if (!ok) return std::nullopt;
        }
    }
    if (!ok) return std::nullopt;

    // totality: validity makes every entity label-reachable, so leftovers
    // mean there is nothing to determine an image and no homomorphism
    for (const auto& [id, info] : from.nodes) {
        (void)info;
        if (!h.count(node_entity(id))) return std::nullopt;
    }
    for (int w = 0; w < static_cast<int>(from.wrappings.size()); ++w)
        if (!h.count(wrap_entity(w))) return std::nullopt;

    for (const auto& r : from.rels) {
        Rel image;
        image.name = r.name;
        for (const auto& a : r.args) image.args.push_back(h.at(a));
        if (!to.rels.count(image)) return std::nullopt;
    }
    return h;
}

bool subsumes(const Model& general, const Model& specific) {
    return find_homomorphism(general, specific).has_value();
}

bool is_isomorphic(const Model& a, const Model& b) {
    // attribute edges are functional and every entity label-reachable, so
    // these models are rigid: mutual homomorphisms compose to the unique
    // endomorphism, the identity
    return subsumes(a, b) && subsumes(b, a);
}

Model juxtapose(const std::vector<Model>& models) {
    Model out;
    std::set<std::string> labels;
    std::set<std::string> wrap_names;
    int model_no = 0;
    for (const Model& m : models) {
        ++model_no;
        for (const auto& label : m.all_labels())
            if (!labels.insert(label).second)
                throw std::invalid_argument("label '" + label +
                                            "' appears in two models");
        int node_off = out.nodes.empty() ? 0 : out.nodes.rbegin()->first + 1;
        int wrap_off = static_cast<int>(out.wrappings.size());
        for (const auto& [id, info] : m.nodes)
            out.nodes.emplace(id + node_off, info);
        for (const auto& w : m.wrappings) {
            Wrapping moved = w;
            if (!wrap_names.insert(moved.name).second) {
                moved.name += "_" + std::to_string(model_no);
                wrap_names.insert(moved.name);
            }
            moved.members.clear();
            for (int n : w.members) moved.members.insert(n + node_off);
            out.wrappings.push_back(std::move(moved));
        }
        auto shift = [&](const Entity& e) {
            return e.is_node() ? node_entity(e.id + node_off)
                               : wrap_entity(e.id + wrap_off);
        };
        for (const auto& [key, tgt] : m.attrs)
            out.attrs.emplace(std::make_pair(key.first + node_off, key.second),
                              shift(tgt));
        for (const auto& r : m.rels) {
            Rel moved;
            moved.name = r.name;
            for (const auto& a : r.args) moved.args.push_back(shift(a));
            out.rels.insert(std::move(moved));
        }
    }
    return out;
}

UnifyResult unify(const std::vector<Model>& models,
                  const std::vector<Formula>& equations) {
    FactSet fs;
    for (const Model& m : models) fs.absorb_model(m);
    for (const Formula& eq : equations) {
        if (eq.kind != Formula::Kind::path_eq)
            throw std::invalid_argument(
                "unification takes path equations, got: " + to_string(eq));
        fs.assert_atom(apath_eq(eq.lhs, eq.rhs));
        if (fs.contradictory())
            return {std::nullopt, "equation " + to_string(eq) +
                                      " is inconsistent with the inputs: " +
                                      fs.reason()};
    }
    if (fs.contradictory()) return {std::nullopt, fs.reason()};
    auto built = fs.build_model();
    if (!built.model) return {std::nullopt, built.error};
    return {std::move(built.model), ""};
}

UnifyResult unify(const Model& a, const Model& b,
                  const std::vector<Formula>& equations) {
    return unify(std::vector<Model>{a, b}, equations);
}

}  // namespace wrapframe
