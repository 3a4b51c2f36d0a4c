#include "wrapframe/scope.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wrapframe/morphism.hpp"

namespace wrapframe {

ConstraintSet default_constraints() {
    ConstraintSet cs;
    cs.implications = {
        {"some", "exist-quant"},  {"a", "exist-quant"},
        {"exist-quant", "quant"}, {"every", "univ-quant"},
        {"univ-quant", "quant"},  {"no", "quant"},
        {"most", "quant"},        {"the", "quant"},
        {"quant", "logical"},     {"conj", "conn"},
        {"conn", "logical"},      {"hole", "logical"},
        {"neg", "logical"},       {"always", "logical"},
    };
    cs.incompatibilities = {{"ext", "logical"}};
    return cs;
}

std::optional<Model> apply_constraints(const Model& m0,
                                       const ConstraintSet& cs) {
    Model m = m0;
    bool changed = true;
    auto add = [](std::set<std::string>& ts, const std::string& t) {
        return ts.insert(t).second;
    };
    while (changed) {
        changed = false;
        for (auto& [id, info] : m.nodes)
            for (const auto& [a, b] : cs.implications)
                if (info.types.count(a) && add(info.types, b)) changed = true;
        for (auto& w : m.wrappings)
            for (const auto& [a, b] : cs.implications)
                if (w.types.count(a) && add(w.types, b)) changed = true;

        if (cs.cascade_holes) {
            std::vector<int> quants;
            for (const auto& [id, info] : m.nodes)
                if (info.types.count(cs.quant_type)) quants.push_back(id);
            for (int q : quants)
                for (const std::string& attr : {cs.restr_attr, cs.nscope_attr}) {
                    auto tgt = m.attr_target(q, attr);
                    if (!tgt) {
                        int h = m.fresh_node_id();
                        m.nodes[h].types.insert(cs.hole_type);
                        if (auto w = m.wrap_of(q))
                            m.wrappings[*w].members.insert(h);
                        m.attrs[{q, attr}] = node_entity(h);
                        changed = true;
                    } else if (tgt->is_node()) {
                        if (add(m.nodes.at(tgt->id).types, cs.hole_type))
                            changed = true;
                    } else if (add(m.wrappings[tgt->id].types, cs.hole_type)) {
                        changed = true;
                    }
                }
        }

        if (cs.scope_transitivity) {
            std::vector<Rel> added;
            for (const auto& r1 : m.rels) {
                if (r1.name != cs.scope_rel || r1.args.size() != 2) continue;
                for (const auto& r2 : m.rels) {
                    if (r2.name != cs.scope_rel || r2.args.size() != 2 ||
                        !(r1.args[1] == r2.args[0]))
                        continue;
                    Rel r{cs.scope_rel, {r1.args[0], r2.args[1]}};
                    if (!m.rels.count(r)) added.push_back(std::move(r));
                }
            }
            for (auto& r : added) {
                m.rels.insert(std::move(r));
                changed = true;
            }
        }
    }

    auto clash = [&](const std::set<std::string>& ts) {
        for (const auto& [a, b] : cs.incompatibilities)
            if (ts.count(a) && ts.count(b)) return true;
        return false;
    };
    for (const auto& [id, info] : m.nodes)
        if (clash(info.types)) return std::nullopt;
    for (const auto& w : m.wrappings) {
        if (clash(w.types)) return std::nullopt;
        if (cs.wrappingization)
            for (const auto& t : w.types)
                if (t != cs.hole_type) return std::nullopt;
    }
    return m;
}

// ---------------------------------------------------------------- fragments

namespace {

bool is_hole(const Model& m, const Entity& e, const ConstraintSet& cs) {
    return e.is_node() && m.has_node(e.id) &&
           m.nodes.at(e.id).types.count(cs.hole_type) != 0;
}

struct DSets {
    std::map<int, int> parent;
    int find(int x) {
        auto it = parent.emplace(x, x).first;
        if (it->second != x) it->second = find(it->second);
        return it->second;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::string display_name(const Model& m, const Entity& root) {
    if (root.is_wrapping()) {
        const Wrapping& w = m.wrappings[root.id];
        return w.labels.empty() ? w.name : *w.labels.begin();
    }
    const NodeInfo& n = m.nodes.at(root.id);
    if (!n.labels.empty()) return *n.labels.begin();
    if (!n.types.empty())
        return *n.types.begin() + "#" + std::to_string(root.id);
    return "n" + std::to_string(root.id);
}

}  // namespace

std::vector<Fragment> fragments(const Model& m, const ConstraintSet& cs) {
    std::vector<Fragment> out;
    for (int w = 0; w < static_cast<int>(m.wrappings.size()); ++w) {
        Fragment f;
        f.wrapping = w;
        f.root = wrap_entity(w);
        f.name = display_name(m, f.root);
        out.push_back(std::move(f));
    }

    // glue the complement: attribute edges between complement nodes, plus
    // scope relations whose source is a non-hole complement node (these
    // attach the holes of connective fragments)
    DSets ds;
    for (const auto& [id, info] : m.nodes)
        if (!m.wrap_of(id)) ds.find(id);
    auto complement_node = [&](const Entity& e) {
        return e.is_node() && !m.wrap_of(e.id);
    };
    std::set<std::pair<int, int>> bind;  // directed: parent -> child
    for (const auto& [key, tgt] : m.attrs)
        if (!m.wrap_of(key.first) && complement_node(tgt))
            bind.emplace(key.first, tgt.id);
    for (const auto& r : m.rels) {
        if (r.name != cs.scope_rel || r.args.size() < 2) continue;
        const Entity& src = r.args.front();
        if (!complement_node(src) || is_hole(m, src, cs)) continue;
        for (size_t i = 1; i < r.args.size(); ++i)
            if (complement_node(r.args[i])) bind.emplace(src.id, r.args[i].id);
    }
    for (const auto& [a, b] : bind) ds.unite(a, b);

    std::map<int, std::vector<int>> groups;  // root of dsets -> members
    for (const auto& [id, info] : m.nodes)
        if (!m.wrap_of(id)) groups[ds.find(id)].push_back(id);

    std::set<int> targets;
    for (const auto& [a, b] : bind) targets.insert(b);

    for (auto& [rep, members] : groups) {
        Fragment f;
        f.nodes.insert(members.begin(), members.end());
        std::vector<int> roots;
        for (int v : members)
            if (!targets.count(v)) roots.push_back(v);
        if (roots.size() != 1)
            throw std::invalid_argument(
                "scope fragment must have exactly one root node");
        f.root = node_entity(roots.front());
        for (int v : members)
            if (m.nodes.at(v).types.count(cs.hole_type)) f.holes.push_back(v);
        f.name = display_name(m, f.root);
        out.push_back(std::move(f));
    }
    return out;
}

// ------------------------------------------------------------------- solver

namespace {

struct Dominance {
    int hole;  // source hole node
    int src;   // its fragment
    int tgt;   // dominated fragment
};

struct SolveCtx {
    const Model* m = nullptr;
    const ConstraintSet* cs = nullptr;
    std::vector<Fragment> frags;
    std::map<Entity, int> frag_of;
    std::set<std::pair<int, int>> edges;  // undirected connectivity
    std::vector<Dominance> doms;
};

SolveCtx build_ctx(const Model& m, const ConstraintSet& cs) {
    SolveCtx ctx;
    ctx.m = &m;
    ctx.cs = &cs;
    ctx.frags = fragments(m, cs);
    for (int i = 0; i < static_cast<int>(ctx.frags.size()); ++i) {
        const Fragment& f = ctx.frags[i];
        ctx.frag_of[f.root] = i;
        if (f.wrapping)
            for (int v : m.wrappings[*f.wrapping].members)
                ctx.frag_of[node_entity(v)] = i;
        for (int v : f.nodes) ctx.frag_of[node_entity(v)] = i;
    }
    auto link = [&](const Entity& a, const Entity& b) {
        int fa = ctx.frag_of.at(a), fb = ctx.frag_of.at(b);
        if (fa != fb) ctx.edges.emplace(std::min(fa, fb), std::max(fa, fb));
    };
    for (const auto& [key, tgt] : m.attrs) link(node_entity(key.first), tgt);
    for (const auto& r : m.rels)
        for (size_t i = 1; i < r.args.size(); ++i) link(r.args[0], r.args[i]);
    for (const auto& r : m.rels) {
        if (r.name != cs.scope_rel || r.args.size() < 2) continue;
        if (!is_hole(m, r.args[0], cs)) continue;
        int src = ctx.frag_of.at(r.args[0]);
        for (size_t i = 1; i < r.args.size(); ++i)
            ctx.doms.push_back({r.args[0].id, src, ctx.frag_of.at(r.args[i])});
    }
    return ctx;
}

std::vector<std::set<int>> components(const SolveCtx& ctx,
                                      const std::set<int>& active) {
    DSets ds;
    for (int f : active) ds.find(f);
    for (const auto& [a, b] : ctx.edges)
        if (active.count(a) && active.count(b)) ds.unite(a, b);
    std::map<int, std::set<int>> by_rep;
    for (int f : active) by_rep[ds.find(f)].insert(f);
    std::vector<std::set<int>> out;
    for (auto& [rep, comp] : by_rep) out.push_back(std::move(comp));
    return out;
}

std::vector<PlugTree> solve_rec(const SolveCtx& ctx,
                                const std::set<int>& active) {
    std::vector<PlugTree> out;
    for (int f : active) {
        bool free = true;
        for (const auto& d : ctx.doms)
            if (d.tgt == f && d.src != f && active.count(d.src)) {
                free = false;
                break;
            }
        if (!free) continue;

        const std::vector<int>& holes = ctx.frags[f].holes;
        std::set<int> rest = active;
        rest.erase(f);
        if (rest.empty()) {
            if (holes.empty()) out.push_back(PlugTree{f, {}});
            continue;
        }
        auto comps = components(ctx, rest);
        if (comps.size() != holes.size()) continue;

        // dominance edges out of f claim a component for a specific hole
        std::vector<std::set<int>> claims(comps.size());  // holes claimed
        for (const auto& d : ctx.doms) {
            if (d.src != f || !rest.count(d.tgt)) continue;
            for (size_t c = 0; c < comps.size(); ++c)
                if (comps[c].count(d.tgt)) claims[c].insert(d.hole);
        }
        bool ok = true;
        std::map<int, int> hole_comp;  // hole node -> component index
        std::vector<size_t> flexible;
        for (size_t c = 0; c < comps.size() && ok; ++c) {
            if (claims[c].size() > 1)
                ok = false;  // one component below two holes: no tree
            else if (claims[c].empty())
                flexible.push_back(c);
            else if (!hole_comp.emplace(*claims[c].begin(), c).second)
                ok = false;  // two components claim the same hole
        }
        if (!ok) continue;
        std::vector<int> open;  // holes without a claimed component
        for (int h : holes)
            if (!hole_comp.count(h)) open.push_back(h);

        std::vector<size_t> perm(flexible.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            auto assignment = hole_comp;
            for (size_t i = 0; i < open.size(); ++i)
                assignment[open[i]] = static_cast<int>(flexible[perm[i]]);
            std::vector<PlugTree> acc{PlugTree{f, {}}};
            for (int h : holes) {
                auto subs = solve_rec(ctx, comps[assignment.at(h)]);
                if (subs.empty()) {
                    acc.clear();
                    break;
                }
                std::vector<PlugTree> next;
                for (const auto& base : acc)
                    for (const auto& s : subs) {
                        PlugTree t = base;
                        t.plugs.emplace_back(h, s);
                        next.push_back(std::move(t));
                    }
                acc = std::move(next);
            }
            out.insert(out.end(), acc.begin(), acc.end());
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

void collect_merges(const SolveCtx& ctx, const PlugTree& t,
                    std::map<int, Entity>& res) {
    for (const auto& [hole, sub] : t.plugs) {
        res[hole] = ctx.frags[sub.fragment].root;
        collect_merges(ctx, sub, res);
    }
}

void preorder_names(const SolveCtx& ctx, const PlugTree& t,
                    std::vector<std::string>& out) {
    out.push_back(ctx.frags[t.fragment].name);
    for (const auto& [hole, sub] : t.plugs) preorder_names(ctx, sub, out);
}

Model materialize(const SolveCtx& ctx, const PlugTree& tree,
                  std::map<int, Entity>& resolution) {
    const Model& src = *ctx.m;
    std::map<int, Entity> res;
    collect_merges(ctx, tree, res);
    auto chase = [&](Entity e) {
        while (e.is_node() && res.count(e.id)) e = res.at(e.id);
        return e;
    };

    Model out;
    out.wrappings = src.wrappings;
    for (const auto& [id, info] : src.nodes)
        if (!res.count(id)) out.nodes[id] = info;
    for (const auto& [id, tgt] : res) {
        Entity final = chase(node_entity(id));
        const NodeInfo& info = src.nodes.at(id);
        if (final.is_node()) {
            NodeInfo& n = out.nodes.at(final.id);
            n.types.insert(info.types.begin(), info.types.end());
            n.labels.insert(info.labels.begin(), info.labels.end());
        } else {
            Wrapping& w = out.wrappings[final.id];
            w.types.insert(info.types.begin(), info.types.end());
            // node labels cannot name a wrapping; they are discarded
        }
        resolution[id] = final;
    }
    for (const auto& [key, tgt] : src.attrs) {
        Entity nsrc = chase(node_entity(key.first));
        if (!nsrc.is_node())
            throw std::logic_error(
                "solver merged an attribute source into a wrapping");
        Entity ntgt = chase(tgt);
        auto [it, inserted] = out.attrs.emplace(
            std::make_pair(nsrc.id, key.second), ntgt);
        if (!inserted && !(it->second == ntgt))
            throw std::logic_error(
                "solver merge made an attribute non-functional");
    }
    for (const auto& r : src.rels) {
        Rel nr{r.name, {}};
        for (const auto& a : r.args) nr.args.push_back(chase(a));
        out.rels.insert(std::move(nr));
    }
    auto errs = out.validate();
    if (!errs.empty())
        throw std::logic_error("solved reading is not well formed: " +
                               errs.front());
    return out;
}

}  // namespace

std::vector<Fragment> free_fragments(const Model& m, const ConstraintSet& cs) {
    SolveCtx ctx = build_ctx(m, cs);
    std::vector<Fragment> out;
    for (int f = 0; f < static_cast<int>(ctx.frags.size()); ++f) {
        bool free = true;
        for (const auto& d : ctx.doms)
            if (d.tgt == f && d.src != f) {
                free = false;
                break;
            }
        if (free) out.push_back(ctx.frags[f]);
    }
    return out;
}

std::vector<Reading> solve(const Model& complex, const ConstraintSet& cs,
                           int max_readings) {
    SolveCtx ctx = build_ctx(complex, cs);
    std::set<int> all;
    for (int i = 0; i < static_cast<int>(ctx.frags.size()); ++i) all.insert(i);
    if (all.empty()) return {};

    auto source = std::make_shared<const Model>(complex);
    std::vector<Reading> out;
    for (const PlugTree& tree : solve_rec(ctx, all)) {
        Reading r;
        r.tree = tree;
        r.fragments = ctx.frags;
        r.source = source;
        r.model = materialize(ctx, tree, r.resolution);
        preorder_names(ctx, tree, r.choices);
        bool dup = std::any_of(out.begin(), out.end(), [&](const Reading& o) {
            return is_isomorphic(o.model, r.model);
        });
        if (!dup) out.push_back(std::move(r));
        if (max_readings > 0 &&
            static_cast<int>(out.size()) >= max_readings)
            break;
    }
    return out;
}

// ------------------------------------------------------------ transcription

namespace {

struct Transcriber {
    const Reading& r;
    const ConstraintSet& cs;
    const Model& src;
    bool gqt = false;           // render wrapping members through gamma
    std::set<std::string> used;
    int next_u = 0, next_y = 0, next_z = 0;

    Transcriber(const Reading& reading, const ConstraintSet& constraints)
        : r(reading), cs(constraints), src(*reading.source) {}

    std::string claim(const std::string& want) {
        if (used.insert(want).second) return want;
        for (int i = 1;; ++i) {
            std::string cand = want + std::to_string(i);
            if (used.insert(cand).second) return cand;
        }
    }
    std::string fresh_u() {
        std::string v = next_u ? "u" + std::to_string(next_u) : "u";
        ++next_u;
        return claim(v);
    }
    std::string member_var(int v) {
        const auto& labels = src.nodes.at(v).labels;
        for (const auto& l : labels)
            if (label_sort(l) != LabelSort::wrap_var && l.size() > 1)
                return claim(l.substr(1));
        return claim("y" + std::to_string(next_y++));
    }

    const PlugTree& plug_of(const PlugTree& t, int hole) const {
        for (const auto& [h, sub] : t.plugs)
            if (h == hole) return sub;
        throw std::runtime_error("unresolved hole in reading");
    }

    int hole_at(int quant, const std::string& attr) const {
        auto e = src.attr_target(quant, attr);
        if (!e || !e->is_node())
            throw std::runtime_error("quantifier node " +
                                     std::to_string(quant) + " lacks a " +
                                     attr + " hole");
        return e->id;
    }

    // no logical machinery on the node: plain frame content
    bool plain_content(const std::set<std::string>& types) const {
        if (types.count(cs.hole_type) || types.count(cs.quant_type))
            return false;
        for (const auto& [a, b] : cs.implications)
            if (types.count(a) || types.count(b)) return false;
        return true;
    }

    // the fact set of a node group: types, internal attribute edges,
    // dangling attribute witnesses, resolvable relations, gamma equations
    FolPtr facts(const std::set<int>& members,
                 const std::map<int, std::string>& gamma) {
        std::map<int, std::string> var;
        std::vector<int> order(members.begin(), members.end());
        for (int v : order) {
            auto g = gamma.find(v);
            var[v] = gqt && g != gamma.end() ? g->second : member_var(v);
        }
        std::vector<FolPtr> atoms;
        for (int v : order)
            for (const auto& t : src.nodes.at(v).types)
                atoms.push_back(fol_pred(t, {var[v]}));
        for (const auto& [key, tgt] : src.attrs) {
            if (!members.count(key.first)) continue;
            if (tgt.is_node() && var.count(tgt.id)) {
                atoms.push_back(
                    fol_pred(key.second, {var[key.first], var[tgt.id]}));
            } else if (tgt.is_wrapping()) {
                std::string z = claim("z" + std::to_string(next_z++));
                atoms.push_back(fol_exists(
                    z, fol_pred(key.second, {var[key.first], z})));
            }
        }
        for (const auto& rel : src.rels) {
            if (rel.name == cs.scope_rel || rel.name == cs.var_rel) continue;
            bool touches = false, resolvable = true;
            std::vector<std::string> args;
            for (const auto& a : rel.args) {
                if (a.is_node() && var.count(a.id)) {
                    touches = true;
                    args.push_back(var.at(a.id));
                } else if (a.is_node() && gamma.count(a.id)) {
                    args.push_back(gamma.at(a.id));
                } else {
                    resolvable = false;
                }
            }
            if (touches && resolvable)
                atoms.push_back(fol_pred(rel.name, std::move(args)));
        }
        if (!gqt)
            for (int v : order)
                if (auto g = gamma.find(v); g != gamma.end())
                    atoms.push_back(fol_eq(var[v], g->second));
        FolPtr body = fol_and(std::move(atoms));
        if (!gqt)
            for (auto it = order.rbegin(); it != order.rend(); ++it)
                body = fol_exists(var[*it], std::move(body));
        return body;
    }

    FolPtr form(const PlugTree& t, const std::map<int, std::string>& gamma) {
        const Fragment& f = r.fragments.at(t.fragment);
        if (f.wrapping)
            return facts(src.wrappings[*f.wrapping].members, gamma);

        int root = f.root.id;
        const auto& types = src.nodes.at(root).types;
        if (types.count(cs.hole_type) && f.nodes.size() == 1) {
            if (t.plugs.size() != 1)
                throw std::runtime_error("unresolved hole in reading");
            return form(t.plugs.front().second, gamma);
        }

        static const std::set<std::string> determiners{"some", "a", "every",
                                                       "no"};
        std::vector<std::string> found;
        for (const auto& ty : types)
            if (determiners.count(ty)) found.push_back(ty);
        if (found.empty() && plain_content(types) && t.plugs.empty())
            return facts(f.nodes, gamma);
        if (found.size() != 1) {
            std::string all;
            for (const auto& ty : types) all += (all.empty() ? "" : ", ") + ty;
            throw std::runtime_error("unsupported quantifier (types: " + all +
                                     ")");
        }
        const std::string& det = found.front();

        std::string u = fresh_u();
        auto g1 = gamma, g2 = gamma;
        if (auto rv = src.attr_target(root, cs.rvar_attr);
            rv && rv->is_node())
            g1[rv->id] = u;
        if (auto nv = src.attr_target(root, cs.nsvar_attr);
            nv && nv->is_node())
            g2[nv->id] = u;
        FolPtr A = form(plug_of(t, hole_at(root, cs.restr_attr)), g1);
        FolPtr B = form(plug_of(t, hole_at(root, cs.nscope_attr)), g2);
        if (det == "every") return fol_forall(u, fol_impl(A, B));
        if (det == "no") return fol_not(fol_exists(u, fol_and({A, B})));
        return fol_exists(u, fol_and({A, B}));  // some, a
    }

    std::string render(const PlugTree& t,
                       const std::map<int, std::string>& gamma) {
        const Fragment& f = r.fragments.at(t.fragment);
        if (f.wrapping) {
            FolPtr body = facts(src.wrappings[*f.wrapping].members, gamma);
            return body->kind == Fol::Kind::truth ? "true" : to_string(body);
        }
        int root = f.root.id;
        const auto& types = src.nodes.at(root).types;
        if (types.count(cs.hole_type) && f.nodes.size() == 1) {
            if (t.plugs.size() != 1)
                throw std::runtime_error("unresolved hole in reading");
            return render(t.plugs.front().second, gamma);
        }
        static const std::set<std::string> determiners{"some", "a", "every",
                                                       "no"};
        std::string det;
        for (const auto& ty : types)
            if (determiners.count(ty)) det = ty;
        if (det.empty() && plain_content(types) && t.plugs.empty()) {
            FolPtr body = facts(f.nodes, gamma);
            return body->kind == Fol::Kind::truth ? "true" : to_string(body);
        }
        if (det.empty()) {
            std::string all;
            for (const auto& ty : types) all += (all.empty() ? "" : ", ") + ty;
            throw std::runtime_error("unsupported quantifier (types: " + all +
                                     ")");
        }
        std::string u = fresh_u();
        auto g1 = gamma, g2 = gamma;
        if (auto rv = src.attr_target(root, cs.rvar_attr);
            rv && rv->is_node())
            g1[rv->id] = u;
        if (auto nv = src.attr_target(root, cs.nsvar_attr);
            nv && nv->is_node())
            g2[nv->id] = u;
        std::string A = render(plug_of(t, hole_at(root, cs.restr_attr)), g1);
        std::string B = render(plug_of(t, hole_at(root, cs.nscope_attr)), g2);
        return det + "(" + u + ", " + A + ", " + B + ")";
    }
};

}  // namespace

FolPtr transcribe(const Reading& r, const ConstraintSet& cs) {
    Transcriber tr(r, cs);
    return tr.form(r.tree, {});
}

std::string to_gqt(const Reading& r, const ConstraintSet& cs) {
    Transcriber tr(r, cs);
    tr.gqt = true;
    return tr.render(r.tree, {});
}

bool check_instance(const FolPtr& formula, const Model& instance) {
    auto fv = free_variables(formula);
    if (!fv.empty())
        throw std::invalid_argument("formula has a free variable '" +
                                    *fv.begin() + "'");
    return fol_eval(translate_model(instance), formula);
}

}  // namespace wrapframe
