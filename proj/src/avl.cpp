#include "wrapframe/avl.hpp"

#include <algorithm>

namespace wrapframe {

// ----------------------------------------------------------- constructors

Description dtop() { return {}; }

Description dtype(std::string type) {
    Description d;
    d.kind = Description::Kind::type;
    d.text = std::move(type);
    return d;
}

Description dlabel(std::string label) {
    Description d;
    d.kind = Description::Kind::label;
    d.text = std::move(label);
    return d;
}

Description dattr(std::string attr, Description sub) {
    Description d;
    d.kind = Description::Kind::attr;
    d.text = std::move(attr);
    d.kids.push_back(std::move(sub));
    return d;
}

Description dand(std::vector<Description> kids) {
    if (kids.size() == 1) return std::move(kids.front());
    Description d;
    d.kind = Description::Kind::conj;
    d.kids = std::move(kids);
    return d;
}

Description dor(std::vector<Description> kids) {
    if (kids.size() == 1) return std::move(kids.front());
    Description d;
    d.kind = Description::Kind::disj;
    d.kids = std::move(kids);
    return d;
}

Formula ftop() { return {}; }

Formula fat(std::string label, Description desc) {
    Formula f;
    f.kind = Formula::Kind::at;
    f.label = std::move(label);
    f.desc = std::move(desc);
    return f;
}

Formula fwrap(std::string wvar, std::string nvar, Description desc) {
    Formula f;
    f.kind = Formula::Kind::wrap;
    f.label = std::move(wvar);
    f.nvar = std::move(nvar);
    f.desc = std::move(desc);
    return f;
}

Formula fpath_eq(Formula::Term lhs, Formula::Term rhs) {
    Formula f;
    f.kind = Formula::Kind::path_eq;
    f.lhs = std::move(lhs);
    f.rhs = std::move(rhs);
    return f;
}

Formula frel(std::string name, std::vector<Formula::Term> args) {
    Formula f;
    f.kind = Formula::Kind::rel;
    f.rel_name = std::move(name);
    f.rel_args = std::move(args);
    return f;
}

Formula fand(std::vector<Formula> kids) {
    if (kids.size() == 1) return std::move(kids.front());
    Formula f;
    f.kind = Formula::Kind::conj;
    f.kids = std::move(kids);
    return f;
}

Formula fnot(Formula kid) {
    Formula f;
    f.kind = Formula::Kind::neg;
    f.kids.push_back(std::move(kid));
    return f;
}

Atom apath_top(std::string label, Path path) {
    Atom a;
    a.kind = Atom::Kind::path_top;
    a.terms = {{std::move(label), std::move(path)}};
    return a;
}

Atom apath_type(std::string label, Path path, std::string type) {
    Atom a;
    a.kind = Atom::Kind::path_type;
    a.name = std::move(type);
    a.terms = {{std::move(label), std::move(path)}};
    return a;
}

Atom apath_eq(Formula::Term lhs, Formula::Term rhs) {
    Atom a;
    a.kind = Atom::Kind::path_eq;
    a.terms = {std::move(lhs), std::move(rhs)};
    return a;
}

Atom arel(std::string name, std::vector<Formula::Term> args) {
    Atom a;
    a.kind = Atom::Kind::rel;
    a.name = std::move(name);
    a.terms = std::move(args);
    return a;
}

Atom ainwr(std::string label) {
    Atom a;
    a.kind = Atom::Kind::inwr;
    a.terms = {{std::move(label), {}}};
    return a;
}

Atom ain(std::string label, std::string wvar) {
    Atom a;
    a.kind = Atom::Kind::in;
    a.terms = {{std::move(label), {}}, {std::move(wvar), {}}};
    return a;
}

Atom awr(std::string label) {
    Atom a;
    a.kind = Atom::Kind::wr;
    a.terms = {{std::move(label), {}}};
    return a;
}

// ------------------------------------------------------------ satisfaction

namespace {

bool desc_holds(const Model& m, const Entity& v, const Description& d) {
    switch (d.kind) {
        case Description::Kind::top:
            return true;
        case Description::Kind::type:
            return m.has_type(v, d.text);
        case Description::Kind::label: {
            auto e = m.find_label(d.text);
            return e && *e == v;
        }
        case Description::Kind::attr: {
            if (!v.is_node()) return false;
            auto t = m.attr_target(v.id, d.text);
            return t && desc_holds(m, *t, d.kids.front());
        }
        case Description::Kind::conj:
            return std::all_of(d.kids.begin(), d.kids.end(), [&](const auto& k) {
                return desc_holds(m, v, k);
            });
        case Description::Kind::disj:
            return std::any_of(d.kids.begin(), d.kids.end(), [&](const auto& k) {
                return desc_holds(m, v, k);
            });
    }
    return false;
}

}  // namespace

bool satisfies(const Model& m, const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::top:
            return true;
        case Formula::Kind::at: {
            // the described label must name an unwrapped node
            auto v = m.find_label(f.label);
            if (!v || !v->is_node() || w_set_of(m, v->id)) return false;
            return desc_holds(m, *v, f.desc);
        }
        case Formula::Kind::wrap: {
            auto v = m.find_label(f.nvar);
            auto w = m.find_label(f.label);
            if (!v || !v->is_node() || !w || !w->is_wrapping()) return false;
            if (!m.wrappings[w->id].members.count(v->id)) return false;
            return desc_holds(m, *v, f.desc);
        }
        case Formula::Kind::path_eq: {
            auto a = m.interp(f.lhs.first, f.lhs.second);
            auto b = m.interp(f.rhs.first, f.rhs.second);
            return a && b && *a == *b;
        }
        case Formula::Kind::rel: {
            Rel r;
            r.name = f.rel_name;
            for (const auto& [label, path] : f.rel_args) {
                auto e = m.interp(label, path);
                if (!e) return false;
                r.args.push_back(*e);
            }
            return m.rels.count(r) > 0;
        }
        case Formula::Kind::conj:
            return std::all_of(f.kids.begin(), f.kids.end(), [&](const auto& k) {
                return satisfies(m, k);
            });
        case Formula::Kind::neg:
            return !satisfies(m, f.kids.front());
    }
    return false;
}

bool satisfies(const Model& m, const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::path_top:
            return m.interp(a.terms[0].first, a.terms[0].second).has_value();
        case Atom::Kind::path_type: {
            auto e = m.interp(a.terms[0].first, a.terms[0].second);
            return e && m.has_type(*e, a.name);
        }
        case Atom::Kind::path_eq: {
            auto x = m.interp(a.terms[0].first, a.terms[0].second);
            auto y = m.interp(a.terms[1].first, a.terms[1].second);
            return x && y && *x == *y;
        }
        case Atom::Kind::rel: {
            Rel r;
            r.name = a.name;
            for (const auto& [label, path] : a.terms) {
                auto e = m.interp(label, path);
                if (!e) return false;
                r.args.push_back(*e);
            }
            return m.rels.count(r) > 0;
        }
        case Atom::Kind::inwr: {
            auto e = m.find_label(a.terms[0].first);
            return e && e->is_node() && m.wrap_of(e->id).has_value();
        }
        case Atom::Kind::in: {
            auto v = m.find_label(a.terms[0].first);
            auto w = m.find_label(a.terms[1].first);
            return v && v->is_node() && w && w->is_wrapping() &&
                   m.wrappings[w->id].members.count(v->id) > 0;
        }
        case Atom::Kind::wr: {
            auto e = m.find_label(a.terms[0].first);
            return e && e->is_wrapping();
        }
    }
    return false;
}

bool satisfies(const Model& m, const Clause& c) {
    for (const auto& p : c.premises)
        if (!satisfies(m, p)) return true;
    return std::any_of(c.conclusions.begin(), c.conclusions.end(),
                       [&](const auto& a) { return satisfies(m, a); });
}

bool satisfies(const Model& m, const Cnf& cnf) {
    return std::all_of(cnf.clauses.begin(), cnf.clauses.end(),
                       [&](const auto& c) { return satisfies(m, c); });
}

// -------------------------------------------------------------- signature

namespace {

void collect_desc(const Description& d, Signature& sig) {
    switch (d.kind) {
        case Description::Kind::type:
            sig.types.insert(d.text);
            break;
        case Description::Kind::label:
            sig.add_label(d.text);
            break;
        case Description::Kind::attr:
            sig.attributes.insert(d.text);
            break;
        default:
            break;
    }
    for (const auto& k : d.kids) collect_desc(k, sig);
}

void collect_term(const Formula::Term& t, Signature& sig) {
    sig.add_label(t.first);
    sig.attributes.insert(t.second.begin(), t.second.end());
}

void collect_formula(const Formula& f, Signature& sig) {
    switch (f.kind) {
        case Formula::Kind::at:
            sig.add_label(f.label);
            collect_desc(f.desc, sig);
            break;
        case Formula::Kind::wrap:
            sig.add_label(f.label);
            sig.add_label(f.nvar);
            collect_desc(f.desc, sig);
            break;
        case Formula::Kind::path_eq:
            collect_term(f.lhs, sig);
            collect_term(f.rhs, sig);
            break;
        case Formula::Kind::rel: {
            int arity = static_cast<int>(f.rel_args.size());
            auto [it, fresh] = sig.relations.emplace(f.rel_name, arity);
            if (!fresh && it->second != arity)
                throw ParseError("relation '" + f.rel_name +
                                 "' used with conflicting arities");
            for (const auto& t : f.rel_args) collect_term(t, sig);
            break;
        }
        default:
            break;
    }
    for (const auto& k : f.kids) collect_formula(k, sig);
}

}  // namespace

Signature signature_of(const Formula& f) {
    Signature sig;
    collect_formula(f, sig);
    return sig;
}

// ------------------------------------------------------------- clause form

namespace {

// intermediate literal tree: the formula with description guards expanded,
// over possibly negated atoms
struct LTree {
    enum class K { conj, disj, lit, truth, falsity };
    K k = K::truth;
    Atom atom;
    bool negated = false;
    std::vector<LTree> kids;
};

LTree lt_lit(Atom a, bool negated = false) {
    LTree t;
    t.k = LTree::K::lit;
    t.atom = std::move(a);
    t.negated = negated;
    return t;
}

LTree lt_node(LTree::K k, std::vector<LTree> kids) {
    LTree t;
    t.k = k;
    t.kids = std::move(kids);
    return t;
}

LTree negate(LTree t) {
    switch (t.k) {
        case LTree::K::truth:
            t.k = LTree::K::falsity;
            return t;
        case LTree::K::falsity:
            t.k = LTree::K::truth;
            return t;
        case LTree::K::lit:
            t.negated = !t.negated;
            return t;
        case LTree::K::conj:
        case LTree::K::disj:
            t.k = t.k == LTree::K::conj ? LTree::K::disj : LTree::K::conj;
            for (auto& k : t.kids) k = negate(std::move(k));
            return t;
    }
    return t;
}

LTree desc_tree(const std::string& k, const Path& p, const Description& d) {
    switch (d.kind) {
        case Description::Kind::top:
            return lt_lit(apath_top(k, p));
        case Description::Kind::type:
            return lt_lit(apath_type(k, p, d.text));
        case Description::Kind::label:
            return lt_lit(apath_eq({k, p}, {d.text, {}}));
        case Description::Kind::attr: {
            Path ext = p;
            ext.push_back(d.text);
            return desc_tree(k, ext, d.kids.front());
        }
        case Description::Kind::conj:
        case Description::Kind::disj: {
            std::vector<LTree> kids;
            kids.reserve(d.kids.size());
            for (const auto& kid : d.kids) kids.push_back(desc_tree(k, p, kid));
            return lt_node(d.kind == Description::Kind::conj ? LTree::K::conj
                                                             : LTree::K::disj,
                           std::move(kids));
        }
    }
    return lt_node(LTree::K::truth, {});
}

LTree rewrite(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::top:
            return lt_node(LTree::K::truth, {});
        case Formula::Kind::at:
            // an unwrapped-node context: neither inside a wrapping nor one
            return lt_node(LTree::K::conj,
                           {lt_lit(ainwr(f.label), true),
                            lt_lit(awr(f.label), true),
                            desc_tree(f.label, {}, f.desc)});
        case Formula::Kind::wrap:
            return lt_node(LTree::K::conj, {lt_lit(ain(f.nvar, f.label)),
                                            desc_tree(f.nvar, {}, f.desc)});
        case Formula::Kind::path_eq:
            return lt_lit(apath_eq(f.lhs, f.rhs));
        case Formula::Kind::rel:
            return lt_lit(arel(f.rel_name, f.rel_args));
        case Formula::Kind::conj: {
            std::vector<LTree> kids;
            kids.reserve(f.kids.size());
            for (const auto& k : f.kids) kids.push_back(rewrite(k));
            return lt_node(LTree::K::conj, std::move(kids));
        }
        case Formula::Kind::neg:
            return negate(rewrite(f.kids.front()));
    }
    return lt_node(LTree::K::truth, {});
}

using Lit = std::pair<Atom, bool>;       // atom, negated
using Disj = std::set<Lit>;

// conjunction of disjunctions; {} is true, { {} } is false
std::vector<Disj> distribute(const LTree& t) {
    switch (t.k) {
        case LTree::K::truth:
            return {};
        case LTree::K::falsity:
            return {Disj{}};
        case LTree::K::lit:
            return {Disj{{t.atom, t.negated}}};
        case LTree::K::conj: {
            std::vector<Disj> out;
            for (const auto& k : t.kids) {
                auto sub = distribute(k);
                out.insert(out.end(), std::make_move_iterator(sub.begin()),
                           std::make_move_iterator(sub.end()));
            }
            return out;
        }
        case LTree::K::disj: {
            std::vector<Disj> acc = {Disj{}};
            for (const auto& k : t.kids) {
                auto sub = distribute(k);
                std::vector<Disj> next;
                for (const auto& a : acc)
                    for (const auto& b : sub) {
                        Disj u = a;
                        u.insert(b.begin(), b.end());
                        next.push_back(std::move(u));
                    }
                acc = std::move(next);
            }
            return acc;
        }
    }
    return {};
}

void count_desc(const Description& d, std::set<std::string>& labels,
                int& attrs) {
    switch (d.kind) {
        case Description::Kind::attr:
            ++attrs;
            break;
        case Description::Kind::label:
            labels.insert(d.text);
            break;
        default:
            break;
    }
    for (const auto& k : d.kids) count_desc(k, labels, attrs);
}

void count_formula(const Formula& f, std::set<std::string>& labels,
                   int& attrs) {
    auto count_term = [&](const Formula::Term& t) {
        labels.insert(t.first);
        attrs += static_cast<int>(t.second.size());
    };
    switch (f.kind) {
        case Formula::Kind::at:
            labels.insert(f.label);
            count_desc(f.desc, labels, attrs);
            break;
        case Formula::Kind::wrap:
            labels.insert(f.label);
            labels.insert(f.nvar);
            count_desc(f.desc, labels, attrs);
            break;
        case Formula::Kind::path_eq:
            count_term(f.lhs);
            count_term(f.rhs);
            break;
        case Formula::Kind::rel:
            for (const auto& t : f.rel_args) count_term(t);
            break;
        default:
            break;
    }
    for (const auto& k : f.kids) count_formula(k, labels, attrs);
}

}  // namespace

Cnf to_cnf(const Formula& f) {
    Cnf out;

    std::set<std::string> labels;
    count_formula(f, labels, out.attr_weight);
    out.label_count = static_cast<int>(labels.size());

    std::set<Clause> clauses;
    for (const auto& disj : distribute(rewrite(f))) {
        Clause c;
        bool tautology = false;
        for (const auto& [atom, negated] : disj) {
            (negated ? c.premises : c.conclusions).insert(atom);
        }
        for (const auto& a : c.premises)
            if (c.conclusions.count(a)) tautology = true;
        if (!tautology) clauses.insert(std::move(c));
    }
    out.clauses.assign(clauses.begin(), clauses.end());
    return out;
}

}  // namespace wrapframe
