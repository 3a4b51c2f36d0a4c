// Seeded random generation of small well-formed models, used by the
// `--seed-corpus` tool and by the property-test suites.  Generation is
// deterministic for a given engine state; every model returned passes
// Model::validate().
#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wrapframe/model.hpp"

namespace wrapframe {

struct RandomModelOptions {
    int max_nodes = 6;
    int max_wrappings = 2;
    int attr_tries = 7;   // attempted attribute edges
    int rel_tries = 2;    // attempted relation tuples
};

// A valid model with 1..max_nodes nodes: disjoint nonempty wrappings,
// attribute edges that never escape a wrapping, labels added until every
// node is reachable from a labelled node of its own w-set.
inline Model random_model(std::mt19937& rng,
                          const RandomModelOptions& opt = {}) {
    auto pick = [&rng](int n) {
        return static_cast<int>(rng() % static_cast<unsigned>(n));
    };
    const std::vector<std::string> type_pool{"t1", "t2", "t3", "t4"};
    const std::vector<std::string> attr_pool{"P", "Q", "R"};
    const std::vector<std::string> wrap_labels{"$A", "$B", "$C"};

    Model m;
    int n = 1 + pick(opt.max_nodes);
    for (int v = 0; v < n; ++v) m.nodes[v] = NodeInfo{};

    // Disjoint wrappings over a prefix of the shuffled node list.
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t used = 0;
    for (int w = 0; w < opt.max_wrappings; ++w) {
        if (used >= order.size() || pick(2) == 0) continue;
        std::size_t take =
            1 + static_cast<std::size_t>(pick(static_cast<int>(
                    std::min<std::size_t>(3, order.size() - used))));
        Wrapping wr;
        wr.name = "W" + std::to_string(m.wrappings.size());
        wr.labels = {wrap_labels[m.wrappings.size()]};
        for (std::size_t i = 0; i < take; ++i) wr.members.insert(order[used++]);
        m.wrappings.push_back(std::move(wr));
    }

    for (auto& [v, info] : m.nodes) {
        int k = pick(4);  // 0..2 types, skewed towards one
        if (k >= 1) info.types.insert(type_pool[pick(4)]);
        if (k == 3) info.types.insert(type_pool[pick(4)]);
    }

    // Attribute edges: functional per (source, name); a wrapped source may
    // only point at a node of its own wrapping (non-escapability).
    for (int i = 0; i < opt.attr_tries; ++i) {
        int src = pick(n);
        const std::string& a = attr_pool[pick(3)];
        if (m.attrs.count({src, a})) continue;
        Entity tgt;
        if (auto w = m.wrap_of(src)) {
            const auto& members = m.wrappings[*w].members;
            std::vector<int> inside(members.begin(), members.end());
            tgt = node_entity(inside[pick(static_cast<int>(inside.size()))]);
        } else if (!m.wrappings.empty() && pick(4) == 0) {
            tgt = wrap_entity(pick(static_cast<int>(m.wrappings.size())));
        } else {
            tgt = node_entity(pick(n));
        }
        m.attrs[{src, a}] = tgt;
    }

    // Relation tuples over arbitrary entities; fixed arities r/2, s/1.
    for (int i = 0; i < opt.rel_tries; ++i) {
        auto entity = [&]() {
            if (!m.wrappings.empty() && pick(4) == 0)
                return wrap_entity(pick(static_cast<int>(m.wrappings.size())));
            return node_entity(pick(n));
        };
        if (pick(2) == 0)
            m.rels.insert(Rel{"r", {entity(), entity()}});
        else
            m.rels.insert(Rel{"s", {entity()}});
    }

    // Label nodes until every node is attribute-reachable from a labelled
    // node of its own w-set.  Wrapped nodes get variable labels, unwrapped
    // ones base labels, mirroring common usage.
    int next_base = 0, next_var = 0;
    auto same_wset = [&](int a, int b) {
        auto wa = m.wrap_of(a), wb = m.wrap_of(b);
        return wa == wb;
    };
    auto reach_from = [&](int v, std::set<int>& seen) {
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (!seen.insert(u).second) continue;
            for (const auto& [key, tgt] : m.attrs)
                if (key.first == u && tgt.is_node() && same_wset(u, tgt.id))
                    stack.push_back(tgt.id);
        }
    };
    std::set<int> reached;
    for (auto& [v, info] : m.nodes)
        if (!info.labels.empty()) reach_from(v, reached);
    for (auto& [v, info] : m.nodes) {
        if (reached.count(v)) continue;
        if (m.wrap_of(v))
            info.labels.insert("?v" + std::to_string(next_var++));
        else
            info.labels.insert("@b" + std::to_string(next_base++));
        reach_from(v, reached);
    }
    return m;
}

}  // namespace wrapframe
