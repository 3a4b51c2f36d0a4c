#include "wrapframe/factset.hpp"

#include <algorithm>
#include <stdexcept>

namespace wrapframe {

// ------------------------------------------------------------ cell plumbing

int FactSet::new_cell() {
    ++created_;
    if (budget_ > 0 && created_ > budget_)
        throw std::logic_error("fact-set term budget exceeded");
    parent_.push_back(static_cast<int>(cells_.size()));
    cells_.emplace_back();
    return static_cast<int>(cells_.size()) - 1;
}

int FactSet::find(int i) const {
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

int FactSet::cell_for_label(const std::string& label) {
    auto it = label_cell_.find(label);
    if (it != label_cell_.end()) return find(it->second);
    int c = new_cell();
    cells_[c].labels.insert(label);
    if (label_sort(label) == LabelSort::wrap_var) cells_[c].wr = true;
    label_cell_.emplace(label, c);
    return c;
}

std::optional<int> FactSet::lookup(const Formula::Term& t) const {
    auto it = label_cell_.find(t.first);
    if (it == label_cell_.end()) return std::nullopt;
    int c = find(it->second);
    for (const auto& attr : t.second) {
        const auto& succ = cells_[c].succ;
        auto s = succ.find(attr);
        if (s == succ.end()) return std::nullopt;
        c = find(s->second);
    }
    return c;
}

int FactSet::walk(const Formula::Term& t) {
    int c = cell_for_label(t.first);
    for (const auto& attr : t.second) {
        auto s = cells_[c].succ.find(attr);
        if (s != cells_[c].succ.end()) {
            c = find(s->second);
        } else {
            int n = new_cell();
            cells_[c].succ.emplace(attr, n);
            c = n;
        }
    }
    return c;
}

void FactSet::queue_merge(int a, int b) { pending_.emplace_back(a, b); }

void FactSet::contradiction(const std::string& why) {
    if (!contradictory_) {
        contradictory_ = true;
        reason_ = why;
    }
}

void FactSet::do_merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);  // keep the older cell as representative
    parent_[b] = a;

    Cell& ca = cells_[a];
    Cell& cb = cells_[b];
    for (const auto& l : cb.labels) {
        ca.labels.insert(l);
        label_cell_[l] = a;
    }
    cb.labels.clear();
    ca.types.insert(cb.types.begin(), cb.types.end());
    cb.types.clear();
    ca.inwr = ca.inwr || cb.inwr;
    ca.wr = ca.wr || cb.wr;
    if (cb.container != -1) {
        if (ca.container == -1)
            ca.container = cb.container;
        else
            queue_merge(ca.container, cb.container);  // disjointedness
    }
    for (auto& [attr, tgt] : cb.succ) {
        auto s = ca.succ.find(attr);
        if (s == ca.succ.end())
            ca.succ.emplace(attr, tgt);
        else
            queue_merge(s->second, tgt);  // successors are functional
    }
    cb.succ.clear();
}

void FactSet::normalize() {
    bool changed = true;
    while (changed) {
        changed = false;
        while (!pending_.empty()) {
            auto [a, b] = pending_.back();
            pending_.pop_back();
            do_merge(a, b);
            changed = true;
        }
        for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
            if (find(i) != i) continue;
            Cell& c = cells_[i];
            for (const auto& l : c.labels) {
                bool is_wvar = label_sort(l) == LabelSort::wrap_var;
                if (is_wvar && !c.wr) {
                    c.wr = true;
                    changed = true;
                }
                if (!is_wvar && c.wr)
                    contradiction("label '" + l +
                                  "' (node sort) would name a wrapping");
            }
            if (c.container != -1) {
                int w = find(c.container);
                if (w != c.container) {
                    c.container = w;
                    changed = true;
                }
                if (!c.inwr) {
                    c.inwr = true;
                    changed = true;
                }
                if (!cells_[w].wr) {
                    cells_[w].wr = true;
                    changed = true;
                }
            }
            if (c.wr && c.inwr)
                contradiction("an entity both wraps and is wrapped");
            if (c.wr && !c.succ.empty())
                contradiction("a wrapping cannot have attribute successors");
            if (c.inwr) {
                // attribute edges from wrapped nodes stay inside the
                // wrapping: targets are wrapped, and (since wrappings are
                // disjoint) source and target share their container
                for (auto& [attr, tgt] : c.succ) {
                    int t = find(tgt);
                    if (t != tgt) {
                        tgt = t;
                        changed = true;
                    }
                    Cell& ct = cells_[t];
                    if (!ct.inwr) {
                        ct.inwr = true;
                        changed = true;
                    }
                    if (c.container != -1 && ct.container == -1) {
                        ct.container = c.container;
                        changed = true;
                    } else if (c.container != -1 && ct.container != -1 &&
                               find(ct.container) != find(c.container)) {
                        queue_merge(ct.container, c.container);
                        changed = true;
                    } else if (c.container == -1 && ct.container != -1) {
                        c.container = ct.container;
                        changed = true;
                    }
                }
            }
        }
    }
    // canonicalize relation tuples
    std::set<std::pair<std::string, std::vector<int>>> rels;
    for (const auto& [name, args] : rels_) {
        std::vector<int> canon;
        canon.reserve(args.size());
        for (int a : args) canon.push_back(find(a));
        rels.emplace(name, std::move(canon));
    }
    rels_ = std::move(rels);
}

void FactSet::close() { normalize(); }

// ----------------------------------------------------------------- asserts

void FactSet::assert_atom(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::path_top:
            walk(a.terms[0]);
            break;
        case Atom::Kind::path_type:
            cells_[walk(a.terms[0])].types.insert(a.name);
            break;
        case Atom::Kind::path_eq: {
            int x = walk(a.terms[0]);
            int y = walk(a.terms[1]);
            queue_merge(x, y);
            break;
        }
        case Atom::Kind::rel: {
            std::vector<int> args;
            args.reserve(a.terms.size());
            for (const auto& t : a.terms) args.push_back(walk(t));
            rels_.emplace(a.name, std::move(args));
            break;
        }
        case Atom::Kind::inwr:
            cells_[cell_for_label(a.terms[0].first)].inwr = true;
            break;
        case Atom::Kind::in: {
            int v = cell_for_label(a.terms[0].first);
            int w = cell_for_label(a.terms[1].first);
            cells_[w].wr = true;
            Cell& cv = cells_[v];
            cv.inwr = true;
            if (cv.container == -1)
                cv.container = w;
            else
                queue_merge(cv.container, w);
            break;
        }
        case Atom::Kind::wr:
            cells_[cell_for_label(a.terms[0].first)].wr = true;
            break;
    }
    normalize();
}

bool FactSet::contains(const Atom& a) const {
    switch (a.kind) {
        case Atom::Kind::path_top:
            return lookup(a.terms[0]).has_value();
        case Atom::Kind::path_type: {
            auto c = lookup(a.terms[0]);
            return c && cells_[*c].types.count(a.name) > 0;
        }
        case Atom::Kind::path_eq: {
            auto x = lookup(a.terms[0]);
            auto y = lookup(a.terms[1]);
            return x && y && *x == *y;
        }
        case Atom::Kind::rel: {
            std::vector<int> args;
            args.reserve(a.terms.size());
            for (const auto& t : a.terms) {
                auto c = lookup(t);
                if (!c) return false;
                args.push_back(*c);
            }
            return rels_.count({a.name, args}) > 0;
        }
        case Atom::Kind::inwr: {
            auto c = lookup(a.terms[0]);
            return c && cells_[*c].inwr;
        }
        case Atom::Kind::in: {
            auto v = lookup(a.terms[0]);
            auto w = lookup(a.terms[1]);
            return v && w && cells_[*v].container != -1 &&
                   find(cells_[*v].container) == *w;
        }
        case Atom::Kind::wr: {
            auto c = lookup(a.terms[0]);
            return c && cells_[*c].wr;
        }
    }
    return false;
}

// ------------------------------------------------------------------ absorb

void FactSet::absorb(const FactSet& other) {
    if (other.contradictory_) contradiction(other.reason_);

    std::map<int, int> image;  // other root -> local cell
    for (int i = 0; i < static_cast<int>(other.cells_.size()); ++i) {
        if (other.find(i) != i) continue;
        image.emplace(i, new_cell());
    }
    for (const auto& [root, local] : image) {
        const Cell& src = other.cells_[root];
        Cell& dst = cells_[local];
        dst.types = src.types;
        dst.inwr = src.inwr;
        dst.wr = src.wr;
        if (src.container != -1) dst.container = image.at(other.find(src.container));
        for (const auto& [attr, tgt] : src.succ)
            dst.succ.emplace(attr, image.at(other.find(tgt)));
        for (const auto& l : src.labels) {
            dst.labels.insert(l);
            auto [it, fresh] = label_cell_.emplace(l, local);
            if (!fresh) queue_merge(it->second, local);
        }
    }
    for (const auto& [name, args] : other.rels_) {
        std::vector<int> local;
        local.reserve(args.size());
        for (int a : args) local.push_back(image.at(other.find(a)));
        rels_.emplace(name, std::move(local));
    }
    normalize();
}

void FactSet::absorb_model(const Model& m) {
    FactSet fs;
    std::map<int, int> wrap_cell;
    for (int w = 0; w < static_cast<int>(m.wrappings.size()); ++w) {
        int c = fs.new_cell();
        wrap_cell.emplace(w, c);
        fs.cells_[c].wr = true;
        fs.cells_[c].types = m.wrappings[w].types;
        for (const auto& l : m.wrappings[w].labels) {
            fs.cells_[c].labels.insert(l);
            fs.label_cell_.emplace(l, c);
        }
    }
    std::map<int, int> node_cell;
    for (const auto& [id, info] : m.nodes) {
        int c = fs.new_cell();
        node_cell.emplace(id, c);
        fs.cells_[c].types = info.types;
        for (const auto& l : info.labels) {
            fs.cells_[c].labels.insert(l);
            fs.label_cell_.emplace(l, c);
        }
        if (auto w = m.wrap_of(id)) {
            fs.cells_[c].inwr = true;
            fs.cells_[c].container = wrap_cell.at(*w);
        }
    }
    auto as_cell = [&](const Entity& e) {
        return e.is_node() ? node_cell.at(e.id) : wrap_cell.at(e.id);
    };
    for (const auto& [key, tgt] : m.attrs)
        fs.cells_[node_cell.at(key.first)].succ.emplace(key.second,
                                                        as_cell(tgt));
    for (const auto& r : m.rels) {
        std::vector<int> args;
        args.reserve(r.args.size());
        for (const auto& e : r.args) args.push_back(as_cell(e));
        fs.rels_.emplace(r.name, std::move(args));
    }
    fs.normalize();
    absorb(fs);
}

// --------------------------------------------------------------- inclusion

bool FactSet::subset_of(const FactSet& other) const {
    std::map<int, int> f;  // this root -> other root
    std::vector<int> work;
    auto bind = [&](int mine, int theirs) {
        mine = find(mine);
        theirs = other.find(theirs);
        auto [it, fresh] = f.emplace(mine, theirs);
        if (!fresh) return it->second == theirs;
        work.push_back(mine);
        return true;
    };

    for (const auto& [label, cell] : label_cell_) {
        auto it = other.label_cell_.find(label);
        if (it == other.label_cell_.end()) return false;
        if (!bind(cell, it->second)) return false;
    }
    while (!work.empty()) {
        int mine = work.back();
        work.pop_back();
        const Cell& c = cells_[mine];
        const Cell& oc = other.cells_[f.at(mine)];
        if (!std::includes(oc.types.begin(), oc.types.end(), c.types.begin(),
                           c.types.end()))
            return false;
        if (c.inwr && !oc.inwr) return false;
        if (c.wr && !oc.wr) return false;
        if (c.container != -1) {
            if (oc.container == -1) return false;
            if (!bind(c.container, oc.container)) return false;
        }
        for (const auto& [attr, tgt] : c.succ) {
            auto s = oc.succ.find(attr);
            if (s == oc.succ.end()) return false;
            if (!bind(tgt, s->second)) return false;
        }
    }
    for (const auto& [name, args] : rels_) {
        std::vector<int> image;
        image.reserve(args.size());
        for (int a : args) {
            auto it = f.find(find(a));
            if (it == f.end()) return false;
            image.push_back(it->second);
        }
        if (!other.rels_.count({name, image})) return false;
    }
    return true;
}

// ----------------------------------------------------- canonical traversal

std::vector<int> FactSet::bfs_order() const {
    std::vector<int> order;
    std::set<int> seen;
    std::vector<int> queue;
    auto push = [&](int c) {
        c = find(c);
        if (seen.insert(c).second) queue.push_back(c);
    };
    for (const auto& [label, cell] : label_cell_) {
        (void)label;  // map iteration is already label-sorted
        push(cell);
    }
    for (size_t i = 0; i < queue.size(); ++i) {
        int c = queue[i];
        order.push_back(c);
        for (const auto& [attr, tgt] : cells_[c].succ) {
            (void)attr;
            push(tgt);
        }
        if (cells_[c].container != -1) push(cells_[c].container);
    }
    // anything else would be unreachable from every label; cells are only
    // created by label-rooted walks, so this is defensive
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (find(i) == i && !seen.count(i)) {
            seen.insert(i);
            queue.push_back(i);
            order.push_back(i);
        }
    return order;
}

std::string FactSet::canonical_key() const {
    std::vector<int> order = bfs_order();
    std::map<int, int> num;
    for (size_t i = 0; i < order.size(); ++i)
        num.emplace(order[i], static_cast<int>(i));

    std::string key = contradictory_ ? "!|" : "|";
    for (int c : order) {
        const Cell& cell = cells_[c];
        key += "{";
        for (const auto& l : cell.labels) key += l + ",";
        key += ";";
        for (const auto& t : cell.types) key += t + ",";
        key += ";";
        if (cell.inwr) key += "i";
        if (cell.wr) key += "w";
        key += ";";
        if (cell.container != -1)
            key += std::to_string(num.at(find(cell.container)));
        key += ";";
        for (const auto& [attr, tgt] : cell.succ)
            key += attr + ">" + std::to_string(num.at(find(tgt))) + ",";
        key += "}";
    }
    std::set<std::string> rel_keys;
    for (const auto& [name, args] : rels_) {
        std::string r = name + "(";
        for (int a : args) r += std::to_string(num.at(find(a))) + ",";
        rel_keys.insert(r + ")");
    }
    for (const auto& r : rel_keys) key += r;
    return key;
}

// -------------------------------------------------------------- inspection

int FactSet::cell_count() const {
    int live = 0;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
        if (find(i) == i) ++live;
    return live;
}

std::set<std::string> FactSet::labels() const {
    std::set<std::string> out;
    for (const auto& [label, cell] : label_cell_) {
        (void)cell;
        out.insert(label);
    }
    return out;
}

Signature FactSet::signature() const {
    Signature sig;
    for (const auto& [label, cell] : label_cell_) {
        (void)cell;
        sig.add_label(label);
    }
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
        if (find(i) != i) continue;
        sig.types.insert(cells_[i].types.begin(), cells_[i].types.end());
        for (const auto& [attr, tgt] : cells_[i].succ) {
            (void)tgt;
            sig.attributes.insert(attr);
        }
    }
    for (const auto& [name, args] : rels_)
        sig.relations.emplace(name, static_cast<int>(args.size()));
    return sig;
}

std::vector<Formula::Term> FactSet::enumerate_terms(int max_len) const {
    std::vector<Formula::Term> out;
    for (const auto& [label, cell] : label_cell_) {
        std::vector<std::pair<Path, int>> frontier{{{}, find(cell)}};
        out.emplace_back(label, Path{});
        for (int len = 1; len <= max_len; ++len) {
            std::vector<std::pair<Path, int>> next;
            for (const auto& [path, c] : frontier)
                for (const auto& [attr, tgt] : cells_[c].succ) {
                    Path ext = path;
                    ext.push_back(attr);
                    out.emplace_back(label, ext);
                    next.emplace_back(std::move(ext), find(tgt));
                }
            frontier = std::move(next);
        }
    }
    return out;
}

// ------------------------------------------------------- model construction

FactSet::Built FactSet::build_model() const {
    if (contradictory_) return {std::nullopt, "contradictory facts: " + reason_};
    if (cells_.empty()) return {std::nullopt, "no labelled content"};

    std::vector<int> order = bfs_order();

    Model m;
    std::map<int, int> node_id;    // cell -> node id
    std::map<int, int> wrap_idx;   // cell -> wrapping index
    for (int c : order) {
        if (cells_[c].wr) {
            int w = static_cast<int>(m.wrappings.size());
            wrap_idx.emplace(c, w);
            Wrapping wr;
            wr.name = "W" + std::to_string(w);
            wr.labels = cells_[c].labels;
            wr.types = cells_[c].types;
            m.wrappings.push_back(std::move(wr));
        } else {
            int id = static_cast<int>(node_id.size());
            node_id.emplace(c, id);
            NodeInfo info;
            info.labels = cells_[c].labels;
            info.types = cells_[c].types;
            m.nodes.emplace(id, std::move(info));
        }
    }

    // memberships; wrapped cells with no named wrapping get anonymous
    // wrappings, one per attribute-connected component
    std::map<int, std::vector<int>> anon;  // component seed -> cells
    {
        std::map<int, int> comp;  // cell -> seed
        for (int c : order) {
            const Cell& cell = cells_[c];
            if (cell.wr || !cell.inwr) continue;
            if (cell.container != -1) {
                m.wrappings[wrap_idx.at(find(cell.container))].members.insert(
                    node_id.at(c));
                continue;
            }
            if (!comp.count(c)) {
                // closure keeps anonymous-wrapped components succ-closed,
                // so a plain sweep from c collects the whole component
                std::vector<int> stack{c};
                comp.emplace(c, c);
                anon[c].push_back(c);
                while (!stack.empty()) {
                    int x = stack.back();
                    stack.pop_back();
                    auto reach = [&](int y) {
                        y = find(y);
                        if (cells_[y].inwr && cells_[y].container == -1 &&
                            !comp.count(y)) {
                            comp.emplace(y, c);
                            anon[c].push_back(y);
                            stack.push_back(y);
                        }
                    };
                    for (const auto& [attr, tgt] : cells_[x].succ) {
                        (void)attr;
                        reach(tgt);
                    }
                    for (int o : order)
                        for (const auto& [attr, tgt] : cells_[o].succ) {
                            (void)attr;
                            if (find(tgt) == x) reach(o);
                        }
                }
            }
        }
    }
    std::map<int, int> anon_wrap;  // component seed -> wrapping index
    for (const auto& [seed, members] : anon) {
        int w = static_cast<int>(m.wrappings.size());
        anon_wrap.emplace(seed, w);
        Wrapping wr;
        wr.name = "W" + std::to_string(w);
        for (int c : members) wr.members.insert(node_id.at(c));
        m.wrappings.push_back(std::move(wr));
    }

    for (const auto& [c, w] : wrap_idx)
        if (m.wrappings[w].members.empty()) {
            std::string who = m.wrappings[w].labels.empty()
                                  ? m.wrappings[w].name
                                  : *m.wrappings[w].labels.begin();
            return {std::nullopt, "wrapping '" + who +
                                      "' has no members; no least model"};
        }

    auto as_entity = [&](int c) {
        c = find(c);
        if (cells_[c].wr) return wrap_entity(wrap_idx.at(c));
        return node_entity(node_id.at(c));
    };
    for (int c : order)
        for (const auto& [attr, tgt] : cells_[c].succ)
            m.attrs.emplace(std::make_pair(node_id.at(c), attr),
                            as_entity(find(tgt)));
    for (const auto& [name, args] : rels_) {
        Rel r;
        r.name = name;
        for (int a : args) r.args.push_back(as_entity(a));
        m.rels.insert(std::move(r));
    }

    auto errors = m.validate();
    if (!errors.empty()) {
        std::string what = "fact-set model construction broke an invariant:";
        for (const auto& e : errors) what += "\n  " + e;
        throw std::logic_error(what);
    }
    return {std::move(m), ""};
}

}  // namespace wrapframe
