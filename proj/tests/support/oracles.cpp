#include "oracles.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wrapframe/json_io.hpp"
#include "wrapframe/morphism.hpp"

namespace support {

using namespace wrapframe;

// --------------------------------------------------------------- fixtures

std::string fixture_path(const std::string& name) {
    return std::string(WRAPFRAME_FIXTURES) + "/" + name;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Model load_fixture(const std::string& name) {
    return load_model(fixture_path(name));
}

ParsedFormula parse_fixture(const std::string& name) {
    return parse_source(read_text(fixture_path(name)));
}

// ---------------------------------------------------------------- oracles

namespace {

bool subset(const std::set<std::string>& small,
            const std::set<std::string>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// exhaustive backtracking search for structure-preserving maps
struct HomSearch {
    const Model& from;
    const Model& to;
    long cap;
    long found = 0;

    std::vector<int> wrap_img;             // from wrapping -> to wrapping
    std::map<int, Entity> node_img;        // from node -> to entity
    std::map<Entity, Entity> forced;       // images pinned by labels
    std::vector<int> node_order;

    bool pin_labels() {
        for (const auto& label : from.all_labels()) {
            auto x = from.find_label(label);
            auto y = to.find_label(label);
            if (!y) return false;
            auto [it, fresh] = forced.emplace(*x, *y);
            if (!fresh && it->second != *y) return false;
        }
        return true;
    }

    std::optional<Entity> image(const Entity& e) const {
        if (e.is_wrapping()) {
            if (wrap_img[e.id] < 0) return std::nullopt;
            return wrap_entity(wrap_img[e.id]);
        }
        auto it = node_img.find(e.id);
        if (it == node_img.end()) return std::nullopt;
        return it->second;
    }

    bool admissible(int n, const Entity& img) const {
        const NodeInfo& info = from.nodes.at(n);
        if (!subset(info.labels, to.labels_of(img))) return false;
        if (!subset(info.types, to.types_of(img))) return false;

        bool has_out = from.attrs.lower_bound({n, ""}) != from.attrs.end() &&
                       from.attrs.lower_bound({n, ""})->first.first == n;
        if (has_out && !img.is_node()) return false;

        if (auto w = from.wrap_of(n)) {
            if (!img.is_node()) return false;
            auto w2 = to.wrap_of(img.id);
            if (!w2 || *w2 != wrap_img[*w]) return false;
        }

        // attribute edges whose other end is already placed (counting the
        // node being placed itself, so self-loops are covered)
        auto placed = [&](const Entity& e) -> std::optional<Entity> {
            if (e == node_entity(n)) return img;
            return image(e);
        };
        for (auto it = from.attrs.lower_bound({n, ""});
             it != from.attrs.end() && it->first.first == n; ++it) {
            auto tgt = placed(it->second);
            if (!tgt) continue;
            auto actual = to.attr_target(img.id, it->first.second);
            if (!actual || *actual != *tgt) return false;
        }
        for (const auto& [key, tgt] : from.attrs) {
            if (tgt != node_entity(n) || key.first == n) continue;
            auto src = placed(node_entity(key.first));
            if (!src) continue;
            auto actual = to.attr_target(src->id, key.second);
            if (!actual || *actual != img) return false;
        }
        return true;
    }

    bool rels_preserved() const {
        for (const auto& r : from.rels) {
            Rel img;
            img.name = r.name;
            for (const auto& a : r.args) img.args.push_back(*image(a));
            if (!to.rels.count(img)) return false;
        }
        return true;
    }

    void place_nodes(size_t i) {
        if (found >= cap) return;
        if (i == node_order.size()) {
            if (rels_preserved()) ++found;
            return;
        }
        int n = node_order[i];
        auto try_img = [&](const Entity& img) {
            if (!admissible(n, img)) return;
            node_img[n] = img;
            place_nodes(i + 1);
            node_img.erase(n);
        };
        auto pin = forced.find(node_entity(n));
        if (pin != forced.end()) {
            try_img(pin->second);
            return;
        }
        for (const auto& [id, info] : to.nodes) {
            (void)info;
            try_img(node_entity(id));
        }
        for (size_t w = 0; w < to.wrappings.size(); ++w)
            try_img(wrap_entity(static_cast<int>(w)));
    }

    void place_wrappings(size_t w) {
        if (found >= cap) return;
        if (w == from.wrappings.size()) {
            place_nodes(0);
            return;
        }
        const Wrapping& ours = from.wrappings[w];
        auto pin = forced.find(wrap_entity(static_cast<int>(w)));
        for (size_t c = 0; c < to.wrappings.size(); ++c) {
            Entity img = wrap_entity(static_cast<int>(c));
            if (pin != forced.end() && pin->second != img) continue;
            if (!subset(ours.labels, to.wrappings[c].labels)) continue;
            if (!subset(ours.types, to.wrappings[c].types)) continue;
            wrap_img[w] = static_cast<int>(c);
            place_wrappings(w + 1);
            wrap_img[w] = -1;
        }
    }

    long run() {
        if (!pin_labels()) return 0;
        for (const auto& [e, img] : forced)
            if (e.is_wrapping() && !img.is_wrapping()) return 0;
        wrap_img.assign(from.wrappings.size(), -1);
        for (const auto& [id, info] : from.nodes) {
            (void)info;
            node_order.push_back(id);
        }
        place_wrappings(0);
        return found;
    }
};

}  // namespace

long count_homomorphisms(const Model& from, const Model& to, long cap) {
    HomSearch search{from, to, cap, 0, {}, {}, {}, {}};
    return search.run();
}

Model quantifier_ladder(int k, const std::vector<std::pair<int, int>>& above) {
    Model m;
    m.nodes[0] = NodeInfo{{"?e"}, {"act"}};
    Wrapping body{"V", {"$V"}, {}, {0}};
    for (int i = 0; i < k; ++i) {
        m.nodes[1 + i] = NodeInfo{{"?v" + std::to_string(i)}, {}};
        m.attrs[{0, "ARG" + std::to_string(i)}] = node_entity(1 + i);
        body.members.insert(1 + i);
    }
    m.wrappings.push_back(body);

    std::vector<int> quant(k), nscope_hole(k);
    int next = k + 1;
    for (int i = 0; i < k; ++i) {
        int content = next++, q = next++, hr = next++, hn = next++;
        quant[i] = q;
        nscope_hole[i] = hn;
        m.nodes[content] =
            NodeInfo{{"?x" + std::to_string(i)}, {"c" + std::to_string(i)}};
        m.nodes[q] = NodeInfo{{"@q" + std::to_string(i)},
                              {i % 2 ? std::string("every") : std::string("a")}};
        m.nodes[hr] = NodeInfo{{}, {"hole"}};
        m.nodes[hn] = NodeInfo{{}, {"hole"}};
        m.attrs[{q, "RESTR"}] = node_entity(hr);
        m.attrs[{q, "NSCOPE"}] = node_entity(hn);
        m.attrs[{q, "RVAR"}] = node_entity(content);
        m.attrs[{q, "NSVAR"}] = node_entity(1 + i);
        m.wrappings.push_back(Wrapping{"R" + std::to_string(i),
                                       {"$R" + std::to_string(i)},
                                       {},
                                       {content}});
        m.rels.insert(Rel{"scope", {node_entity(hr), wrap_entity(1 + i)}});
        m.rels.insert(Rel{"scope", {node_entity(hn), wrap_entity(0)}});
    }
    int top = next++;
    m.nodes[top] = NodeInfo{{"@h0"}, {"hole"}};
    for (int i = 0; i < k; ++i)
        m.rels.insert(Rel{"scope", {node_entity(top), node_entity(quant[i])}});
    for (const auto& [hi, lo] : above)
        m.rels.insert(
            Rel{"scope", {node_entity(nscope_hole[hi]), node_entity(quant[lo])}});
    return m;
}

long ladder_reading_count(int k,
                          const std::vector<std::pair<int, int>>& above) {
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    long count = 0;
    do {
        std::vector<int> pos(k);
        for (int i = 0; i < k; ++i) pos[order[i]] = i;
        bool ok = true;
        for (const auto& [hi, lo] : above)
            if (pos[hi] >= pos[lo]) ok = false;
        count += ok;
    } while (std::next_permutation(order.begin(), order.end()));
    return count;
}

// ------------------------------------------------------------- generators

namespace {

int roll(std::mt19937& rng, int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& pool) {
    return pool[roll(rng, static_cast<int>(pool.size()))];
}

struct Vocabulary {
    std::vector<std::string> node_labels;
    std::vector<std::string> wrap_labels;
    std::vector<std::string> attrs;
    std::vector<std::string> types;
    std::vector<std::pair<std::string, int>> rels;
};

Description random_description(std::mt19937& rng, const Vocabulary& v,
                               int depth) {
    int die = roll(rng, 100);
    if (depth > 0 && die < 35 && !v.attrs.empty())
        return dattr(pick(rng, v.attrs), random_description(rng, v, depth - 1));
    if (depth > 0 && die < 50)
        return dand({random_description(rng, v, depth - 1),
                     random_description(rng, v, depth - 1)});
    if (depth > 0 && die < 62)
        return dor({random_description(rng, v, depth - 1),
                    random_description(rng, v, depth - 1)});
    if (die < 80 && !v.types.empty()) return dtype(pick(rng, v.types));
    if (die < 92 && !v.node_labels.empty())
        return dlabel(pick(rng, v.node_labels));
    if (!v.types.empty()) return dtype(pick(rng, v.types));
    return dtop();
}

Formula::Term random_term(std::mt19937& rng, const Vocabulary& v,
                          bool allow_wrap = true) {
    std::string label =
        (allow_wrap && !v.wrap_labels.empty() && roll(rng, 5) == 0)
            ? pick(rng, v.wrap_labels)
            : pick(rng, v.node_labels);
    Path path;
    if (label_sort(label) != LabelSort::wrap_var && !v.attrs.empty()) {
        int len = roll(rng, 3);
        for (int i = 0; i < len; ++i) path.push_back(pick(rng, v.attrs));
    }
    return {label, path};
}

Formula random_conjunct(std::mt19937& rng, const Vocabulary& v) {
    int die = roll(rng, 100);
    if (die < 40)
        return fat(pick(rng, v.node_labels), random_description(rng, v, 2));
    if (die < 60 && !v.wrap_labels.empty())
        return fwrap(pick(rng, v.wrap_labels), pick(rng, v.node_labels),
                     random_description(rng, v, 1));
    if (die < 75) return fpath_eq(random_term(rng, v), random_term(rng, v));
    if (die < 90 && !v.rels.empty()) {
        const auto& [name, arity] = pick(rng, v.rels);
        std::vector<Formula::Term> args;
        for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, v));
        return frel(name, std::move(args));
    }
    if (!v.types.empty())
        return fnot(fat(pick(rng, v.node_labels), dtype(pick(rng, v.types))));
    return fat(pick(rng, v.node_labels), random_description(rng, v, 1));
}

Formula random_formula_from(std::mt19937& rng, const Vocabulary& v) {
    int n = 1 + roll(rng, 4);
    std::vector<Formula> parts;
    for (int i = 0; i < n; ++i) parts.push_back(random_conjunct(rng, v));
    return parts.size() == 1 ? parts.front() : fand(std::move(parts));
}

}  // namespace

Formula random_formula(std::mt19937& rng) {
    static const Vocabulary v{
        {"@a", "@b", "?u", "?v"},
        {"$W1", "$W2"},
        {"P", "Q", "R"},
        {"s", "t", "w0"},
        {{"r", 2}},
    };
    return random_formula_from(rng, v);
}

Formula random_formula_over(std::mt19937& rng, const Model& m) {
    Signature sig = m.signature();
    Vocabulary v;
    v.node_labels.insert(v.node_labels.end(), sig.base_labels.begin(),
                         sig.base_labels.end());
    v.node_labels.insert(v.node_labels.end(), sig.node_vars.begin(),
                         sig.node_vars.end());
    v.wrap_labels.assign(sig.wrap_vars.begin(), sig.wrap_vars.end());
    v.attrs.assign(sig.attributes.begin(), sig.attributes.end());
    v.types.assign(sig.types.begin(), sig.types.end());
    for (const auto& [name, arity] : sig.relations) v.rels.push_back({name, arity});
    if (v.node_labels.empty()) v.node_labels = {"@a"};
    if (v.types.empty()) v.types = {"t"};
    return random_formula_from(rng, v);
}

std::optional<Model> random_strict_extension(std::mt19937& rng,
                                             const Model& base) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        Model ext = base;
        std::string salt = std::to_string(roll(rng, 100000));
        std::vector<Entity> entities;
        for (const auto& [id, info] : ext.nodes) {
            (void)info;
            entities.push_back(node_entity(id));
        }
        for (size_t w = 0; w < ext.wrappings.size(); ++w)
            entities.push_back(wrap_entity(static_cast<int>(w)));
        Entity spot = pick(rng, entities);

        switch (roll(rng, 5)) {
            case 0:
                if (spot.is_node())
                    ext.nodes[spot.id].types.insert("zz" + salt);
                else
                    ext.wrappings[spot.id].types.insert("zz" + salt);
                break;
            case 1:
                if (spot.is_node())
                    ext.nodes[spot.id].labels.insert(
                        (roll(rng, 2) ? "@zz" : "?zz") + salt);
                else
                    ext.wrappings[spot.id].labels.insert("$ZZ" + salt);
                break;
            case 2: {
                int fresh = ext.fresh_node_id();
                ext.nodes[fresh] = NodeInfo{{"@nn" + salt}, {}};
                if (roll(rng, 2))
                    ext.attrs[{fresh, "NN"}] = spot;
                break;
            }
            case 3: {
                Rel r{"xr", {spot, pick(rng, entities)}};
                if (ext.rels.count(r)) continue;
                ext.rels.insert(r);
                break;
            }
            default: {
                if (!spot.is_node()) continue;
                std::string attr = pick<std::string>(rng, {"P", "Q", "XX"});
                if (ext.attrs.count({spot.id, attr})) continue;
                Entity target;
                if (auto w = ext.wrap_of(spot.id)) {
                    std::vector<int> members(ext.wrappings[*w].members.begin(),
                                             ext.wrappings[*w].members.end());
                    target = node_entity(pick(rng, members));
                } else {
                    target = pick(rng, entities);
                }
                ext.attrs[{spot.id, attr}] = target;
                break;
            }
        }
        if (!ext.validate().empty()) continue;
        if (!subsumes(base, ext)) continue;
        if (subsumes(ext, base)) continue;  // not strict
        return ext;
    }
    return std::nullopt;
}

namespace {

// remove empty wrappings, dangling references, and nodes no longer
// label-reachable within their w-set; nullopt when no well-formed model
// remains
std::optional<Model> tidy(Model m) {
    for (bool changed = true; changed;) {
        changed = false;

        std::vector<int> remap(m.wrappings.size(), -1);
        std::vector<Wrapping> kept;
        for (size_t i = 0; i < m.wrappings.size(); ++i) {
            std::set<int> members;
            for (int n : m.wrappings[i].members)
                if (m.nodes.count(n)) members.insert(n);
            if (members.size() != m.wrappings[i].members.size()) changed = true;
            m.wrappings[i].members = std::move(members);
            if (m.wrappings[i].members.empty()) {
                changed = true;
                continue;
            }
            remap[i] = static_cast<int>(kept.size());
            kept.push_back(m.wrappings[i]);
        }
        m.wrappings = std::move(kept);

        auto relocate = [&](const Entity& e) -> std::optional<Entity> {
            if (e.is_node())
                return m.nodes.count(e.id) ? std::optional<Entity>(e)
                                           : std::nullopt;
            if (e.id < 0 || e.id >= static_cast<int>(remap.size()) ||
                remap[e.id] < 0)
                return std::nullopt;
            return wrap_entity(remap[e.id]);
        };

        std::map<std::pair<int, std::string>, Entity> attrs;
        for (const auto& [key, tgt] : m.attrs) {
            auto moved = relocate(tgt);
            if (!m.nodes.count(key.first) || !moved) {
                changed = true;
                continue;
            }
            attrs[key] = *moved;
        }
        m.attrs = std::move(attrs);

        std::set<Rel> rels;
        for (const auto& r : m.rels) {
            Rel moved{r.name, {}};
            bool ok = true;
            for (const auto& a : r.args) {
                auto img = relocate(a);
                if (!img) ok = false;
                else moved.args.push_back(*img);
            }
            if (ok) rels.insert(std::move(moved));
            else changed = true;
        }
        m.rels = std::move(rels);

        // label reachability within each w-set
        std::set<int> reached;
        std::vector<int> queue;
        for (const auto& [id, info] : m.nodes)
            if (!info.labels.empty()) {
                reached.insert(id);
                queue.push_back(id);
            }
        while (!queue.empty()) {
            int n = queue.back();
            queue.pop_back();
            for (auto it = m.attrs.lower_bound({n, ""});
                 it != m.attrs.end() && it->first.first == n; ++it) {
                if (!it->second.is_node()) continue;
                int t = it->second.id;
                if (w_set_of(m, n) != w_set_of(m, t)) continue;
                if (reached.insert(t).second) queue.push_back(t);
            }
        }
        for (auto it = m.nodes.begin(); it != m.nodes.end();) {
            if (reached.count(it->first)) ++it;
            else {
                it = m.nodes.erase(it);
                changed = true;
            }
        }
    }
    if (m.nodes.empty() || !m.validate().empty()) return std::nullopt;
    return m;
}

}  // namespace

std::vector<Model> weakenings(const Model& m) {
    std::vector<Model> out;
    auto offer = [&](Model candidate) {
        if (auto fixed = tidy(std::move(candidate))) out.push_back(*fixed);
    };

    for (const auto& [id, info] : m.nodes) {
        for (const auto& type : info.types) {
            Model c = m;
            c.nodes[id].types.erase(type);
            offer(std::move(c));
        }
        for (const auto& label : info.labels) {
            Model c = m;
            c.nodes[id].labels.erase(label);
            offer(std::move(c));
        }
    }
    for (size_t w = 0; w < m.wrappings.size(); ++w) {
        for (const auto& type : m.wrappings[w].types) {
            Model c = m;
            c.wrappings[w].types.erase(type);
            offer(std::move(c));
        }
        for (const auto& label : m.wrappings[w].labels) {
            Model c = m;
            c.wrappings[w].labels.erase(label);
            offer(std::move(c));
        }
        for (int member : m.wrappings[w].members) {
            Model c = m;
            c.wrappings[w].members.erase(member);
            offer(std::move(c));
        }
        Model whole = m;
        whole.wrappings[w].members.clear();  // tidy removes and remaps
        offer(std::move(whole));
    }
    for (const auto& [key, tgt] : m.attrs) {
        (void)tgt;
        Model c = m;
        c.attrs.erase(key);
        offer(std::move(c));
    }
    for (const auto& r : m.rels) {
        Model c = m;
        c.rels.erase(r);
        offer(std::move(c));
    }
    return out;
}

// ------------------------------------------------------------ cli harness

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::string slurp_or_empty(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args,
                  const std::string& env) {
    static std::atomic<int> seq{0};
    std::string base = "/tmp/wrapframe_test_" + std::to_string(getpid()) +
                       "_" + std::to_string(seq++);
    std::string out_file = base + ".out";
    std::string err_file = base + ".err";

    std::string cmd;
    if (!env.empty()) cmd += env + " ";
    cmd += shell_quote(WRAPFRAME_CLI);
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " >" + out_file + " 2>" + err_file;

    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp_or_empty(out_file);
    r.err = slurp_or_empty(err_file);
    std::remove(out_file.c_str());
    std::remove(err_file.c_str());
    return r;
}

}  // namespace support
