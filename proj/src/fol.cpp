#include "wrapframe/fol.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wrapframe {

// ------------------------------------------------------------ constructors

namespace {

FolPtr make(Fol::Kind k, std::string name = {},
            std::vector<std::string> args = {}, std::vector<FolPtr> kids = {}) {
    auto f = std::make_shared<Fol>();
    f->kind = k;
    f->name = std::move(name);
    f->args = std::move(args);
    f->kids = std::move(kids);
    return f;
}

}  // namespace

FolPtr fol_true() { return make(Fol::Kind::truth); }
FolPtr fol_false() { return make(Fol::Kind::falsity); }

FolPtr fol_pred(std::string name, std::vector<std::string> args) {
    return make(Fol::Kind::pred, std::move(name), std::move(args));
}

FolPtr fol_eq(std::string a, std::string b) {
    return make(Fol::Kind::eq, "", {std::move(a), std::move(b)});
}

FolPtr fol_not(FolPtr kid) {
    return make(Fol::Kind::neg, "", {}, {std::move(kid)});
}

FolPtr fol_and(std::vector<FolPtr> kids) {
    std::vector<FolPtr> flat;
    for (auto& k : kids) {
        if (k->kind == Fol::Kind::truth) continue;
        if (k->kind == Fol::Kind::falsity) return fol_false();
        if (k->kind == Fol::Kind::conj)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return fol_true();
    if (flat.size() == 1) return flat.front();
    return make(Fol::Kind::conj, "", {}, std::move(flat));
}

FolPtr fol_or(std::vector<FolPtr> kids) {
    std::vector<FolPtr> flat;
    for (auto& k : kids) {
        if (k->kind == Fol::Kind::falsity) continue;
        if (k->kind == Fol::Kind::truth) return fol_true();
        if (k->kind == Fol::Kind::disj)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(std::move(k));
    }
    if (flat.empty()) return fol_false();
    if (flat.size() == 1) return flat.front();
    return make(Fol::Kind::disj, "", {}, std::move(flat));
}

FolPtr fol_impl(FolPtr a, FolPtr b) {
    return make(Fol::Kind::impl, "", {}, {std::move(a), std::move(b)});
}

FolPtr fol_iff(FolPtr a, FolPtr b) {
    return make(Fol::Kind::iff, "", {}, {std::move(a), std::move(b)});
}

FolPtr fol_exists(std::string var, FolPtr body) {
    return make(Fol::Kind::exists, std::move(var), {}, {std::move(body)});
}

FolPtr fol_forall(std::string var, FolPtr body) {
    return make(Fol::Kind::forall, std::move(var), {}, {std::move(body)});
}

// ---------------------------------------------------------------- printing

namespace {

std::string print(const FolPtr& f, bool parens) {
    auto joined = [&](const char* sep) {
        std::string out;
        for (const auto& k : f->kids) {
            if (!out.empty()) out += sep;
            out += print(k, true);
        }
        return parens ? "(" + out + ")" : out;
    };
    switch (f->kind) {
        case Fol::Kind::truth:
            return "true";
        case Fol::Kind::falsity:
            return "false";
        case Fol::Kind::pred: {
            std::string out = f->name + "(";
            for (size_t i = 0; i < f->args.size(); ++i) {
                if (i) out += ", ";
                out += f->args[i];
            }
            return out + ")";
        }
        case Fol::Kind::eq:
            return f->args[0] + " = " + f->args[1];
        case Fol::Kind::neg:
            return "!" + print(f->kids.front(), true);
        case Fol::Kind::conj:
            return joined(" & ");
        case Fol::Kind::disj:
            return joined(" | ");
        case Fol::Kind::impl:
            return (parens ? "(" : "") + print(f->kids[0], true) + " -> " +
                   print(f->kids[1], true) + (parens ? ")" : "");
        case Fol::Kind::iff:
            return (parens ? "(" : "") + print(f->kids[0], true) + " <-> " +
                   print(f->kids[1], true) + (parens ? ")" : "");
        case Fol::Kind::exists:
        case Fol::Kind::forall: {
            std::string head =
                f->kind == Fol::Kind::exists ? "exists " : "forall ";
            std::string out =
                head + f->name + ". " + print(f->kids.front(), true);
            return parens ? "(" + out + ")" : out;
        }
    }
    return {};
}

}  // namespace

std::string to_string(const FolPtr& f) { return print(f, false); }

// ------------------------------------------------------------ alpha-equal

namespace {

struct VarMatch {
    std::map<std::string, std::string> a2b, b2a;

    bool vars(const std::string& a, const std::string& b) {
        auto ita = a2b.find(a);
        auto itb = b2a.find(b);
        if (ita == a2b.end() && itb == b2a.end()) return a == b;  // both free
        return ita != a2b.end() && itb != b2a.end() && ita->second == b &&
               itb->second == a;
    }
};

bool ae(const FolPtr& a, const FolPtr& b, VarMatch& m);

// multiset matching over kid lists (conjunction/disjunction reordering)
bool ae_multiset(const std::vector<FolPtr>& as, const std::vector<FolPtr>& bs,
                 size_t i, std::vector<bool>& used, VarMatch& m) {
    if (i == as.size()) return true;
    for (size_t j = 0; j < bs.size(); ++j) {
        if (used[j]) continue;
        VarMatch saved = m;
        if (ae(as[i], bs[j], m)) {
            used[j] = true;
            if (ae_multiset(as, bs, i + 1, used, m)) return true;
            used[j] = false;
        }
        m = std::move(saved);
    }
    return false;
}

bool ae(const FolPtr& a, const FolPtr& b, VarMatch& m) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Fol::Kind::truth:
        case Fol::Kind::falsity:
            return true;
        case Fol::Kind::pred: {
            if (a->name != b->name || a->args.size() != b->args.size())
                return false;
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!m.vars(a->args[i], b->args[i])) return false;
            return true;
        }
        case Fol::Kind::eq: {
            if (m.vars(a->args[0], b->args[0]) &&
                m.vars(a->args[1], b->args[1]))
                return true;
            return m.vars(a->args[0], b->args[1]) &&
                   m.vars(a->args[1], b->args[0]);
        }
        case Fol::Kind::neg:
            return ae(a->kids[0], b->kids[0], m);
        case Fol::Kind::impl:
            return ae(a->kids[0], b->kids[0], m) &&
                   ae(a->kids[1], b->kids[1], m);
        case Fol::Kind::iff: {
            VarMatch saved = m;
            if (ae(a->kids[0], b->kids[0], m) &&
                ae(a->kids[1], b->kids[1], m))
                return true;
            m = std::move(saved);
            return ae(a->kids[0], b->kids[1], m) &&
                   ae(a->kids[1], b->kids[0], m);
        }
        case Fol::Kind::conj:
        case Fol::Kind::disj: {
            if (a->kids.size() != b->kids.size()) return false;
            std::vector<bool> used(b->kids.size(), false);
            return ae_multiset(a->kids, b->kids, 0, used, m);
        }
        case Fol::Kind::exists:
        case Fol::Kind::forall: {
            VarMatch inner = m;
            // rebind: shadowing replaces any outer pairing of these names
            for (auto it = inner.a2b.begin(); it != inner.a2b.end();)
                it = it->first == a->name || it->second == b->name
                         ? inner.a2b.erase(it)
                         : std::next(it);
            for (auto it = inner.b2a.begin(); it != inner.b2a.end();)
                it = it->first == b->name || it->second == a->name
                         ? inner.b2a.erase(it)
                         : std::next(it);
            inner.a2b.emplace(a->name, b->name);
            inner.b2a.emplace(b->name, a->name);
            return ae(a->kids[0], b->kids[0], inner);
        }
    }
    return false;
}

}  // namespace

bool alpha_equal(const FolPtr& a, const FolPtr& b) {
    VarMatch m;
    return ae(a, b, m);
}

std::set<std::string> free_variables(const FolPtr& f) {
    std::set<std::string> out;
    std::function<void(const FolPtr&, std::set<std::string>&)> walk =
        [&](const FolPtr& g, std::set<std::string>& bound) {
            switch (g->kind) {
                case Fol::Kind::pred:
                case Fol::Kind::eq:
                    for (const auto& a : g->args)
                        if (!bound.count(a)) out.insert(a);
                    break;
                case Fol::Kind::exists:
                case Fol::Kind::forall: {
                    bool fresh = bound.insert(g->name).second;
                    walk(g->kids[0], bound);
                    if (fresh) bound.erase(g->name);
                    break;
                }
                default:
                    for (const auto& k : g->kids) walk(k, bound);
            }
        };
    std::set<std::string> bound;
    walk(f, bound);
    return out;
}

// ------------------------------------------------------------- translation

namespace {

constexpr const char* kMember = "IN";
constexpr const char* kWraps = "WR";

std::string fresh(int& next) { return "v" + std::to_string(next++); }

FolPtr trans_desc(const Description& d, const std::string& u, int& next) {
    switch (d.kind) {
        case Description::Kind::top:
            return fol_true();
        case Description::Kind::type:
        case Description::Kind::label:
            return fol_pred(d.text, {u});
        case Description::Kind::attr: {
            std::string v = fresh(next);
            return fol_exists(v, fol_and({fol_pred(d.text, {u, v}),
                                          trans_desc(d.kids.front(), v, next)}));
        }
        case Description::Kind::conj:
        case Description::Kind::disj: {
            std::vector<FolPtr> kids;
            kids.reserve(d.kids.size());
            for (const auto& k : d.kids)
                kids.push_back(trans_desc(k, u, next));
            return d.kind == Description::Kind::conj ? fol_and(std::move(kids))
                                                     : fol_or(std::move(kids));
        }
    }
    return fol_true();
}

// the label-path term reaches `target`: an existential attribute chain
FolPtr chain(const Formula::Term& t, const std::string& target, int& next) {
    if (t.second.empty()) return fol_pred(t.first, {target});
    std::vector<std::string> vars;
    for (size_t i = 0; i < t.second.size(); ++i) vars.push_back(fresh(next));
    std::vector<FolPtr> steps{fol_pred(t.first, {vars[0]})};
    for (size_t i = 0; i < t.second.size(); ++i) {
        const std::string& from = vars[i];
        const std::string& to = i + 1 < vars.size() ? vars[i + 1] : target;
        steps.push_back(fol_pred(t.second[i], {from, to}));
    }
    FolPtr body = fol_and(std::move(steps));
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = fol_exists(*it, std::move(body));
    return body;
}

FolPtr unwrapped(const std::string& u, int& next) {
    std::string w = fresh(next);
    return fol_and({fol_not(fol_exists(w, fol_pred(kMember, {u, w}))),
                    fol_not(fol_pred(kWraps, {u}))});
}

FolPtr trans_formula(const Formula& f, int& next) {
    switch (f.kind) {
        case Formula::Kind::top:
            return fol_true();
        case Formula::Kind::at: {
            std::string u = fresh(next);
            return fol_exists(
                u, fol_and({fol_pred(f.label, {u}), unwrapped(u, next),
                            trans_desc(f.desc, u, next)}));
        }
        case Formula::Kind::wrap: {
            std::string u = fresh(next);
            std::string w = fresh(next);
            return fol_exists(
                u, fol_exists(w, fol_and({fol_pred(f.nvar, {u}),
                                          fol_pred(f.label, {w}),
                                          fol_pred(kMember, {u, w}),
                                          trans_desc(f.desc, u, next)})));
        }
        case Formula::Kind::path_eq: {
            std::string u = fresh(next);
            return fol_exists(
                u, fol_and({chain(f.lhs, u, next), chain(f.rhs, u, next)}));
        }
        case Formula::Kind::rel: {
            std::vector<std::string> vars;
            std::vector<FolPtr> parts;
            for (const auto& t : f.rel_args) {
                vars.push_back(fresh(next));
                parts.push_back(chain(t, vars.back(), next));
            }
            parts.push_back(fol_pred(f.rel_name, vars));
            FolPtr body = fol_and(std::move(parts));
            for (auto it = vars.rbegin(); it != vars.rend(); ++it)
                body = fol_exists(*it, std::move(body));
            return body;
        }
        case Formula::Kind::conj: {
            std::vector<FolPtr> kids;
            for (const auto& k : f.kids)
                kids.push_back(trans_formula(k, next));
            return fol_and(std::move(kids));
        }
        case Formula::Kind::neg:
            return fol_not(trans_formula(f.kids.front(), next));
    }
    return fol_true();
}

}  // namespace

FolPtr translate_description(const Description& d, const std::string& var) {
    int next = 0;
    return trans_desc(d, var, next);
}

FolPtr translate_formula(const Formula& f) {
    int next = 0;
    return trans_formula(f, next);
}

std::vector<FolPtr> theory_axioms(const Signature& sig, int reach_depth) {
    std::vector<FolPtr> out;
    const std::string u = "u", v = "v", v2 = "v2", w = "w", w2 = "w2";

    // labels name exactly one entity, of their sort
    for (const auto& label : sig.all_labels()) {
        out.push_back(fol_exists(
            u, fol_and({fol_pred(label, {u}),
                        fol_forall(v, fol_impl(fol_pred(label, {v}),
                                               fol_eq(v, u)))})));
        FolPtr wraps = fol_pred(kWraps, {u});
        if (label_sort(label) != LabelSort::wrap_var) wraps = fol_not(wraps);
        out.push_back(fol_forall(u, fol_impl(fol_pred(label, {u}), wraps)));
    }

    for (const auto& attr : sig.attributes) {
        // attributes are functional and leave nodes only
        out.push_back(fol_forall(
            u, fol_forall(
                   v, fol_forall(v2, fol_impl(fol_and({fol_pred(attr, {u, v}),
                                                       fol_pred(attr, {u, v2})}),
                                              fol_eq(v, v2))))));
        out.push_back(fol_forall(
            u, fol_forall(v, fol_impl(fol_pred(attr, {u, v}),
                                      fol_not(fol_pred(kWraps, {u}))))));
        // membership never escapes along an attribute edge
        out.push_back(fol_forall(
            u,
            fol_forall(
                v, fol_forall(w, fol_impl(fol_and({fol_pred(kMember, {u, w}),
                                                   fol_pred(attr, {u, v})}),
                                          fol_pred(kMember, {v, w}))))));
    }

    // membership relates nodes to wrappings; wrappings are nonempty and
    // pairwise disjoint
    out.push_back(fol_forall(
        u, fol_forall(w, fol_impl(fol_pred(kMember, {u, w}),
                                  fol_and({fol_pred(kWraps, {w}),
                                           fol_not(fol_pred(kWraps, {u}))})))));
    out.push_back(fol_forall(
        w, fol_impl(fol_pred(kWraps, {w}),
                    fol_exists(u, fol_pred(kMember, {u, w})))));
    out.push_back(fol_forall(
        u, fol_forall(
               w, fol_forall(w2, fol_impl(fol_and({fol_pred(kMember, {u, w}),
                                                   fol_pred(kMember, {u, w2})}),
                                          fol_eq(w, w2))))));

    // every non-wrapping entity is reached from some labelled entity of the
    // same w-set by an attribute path (up to reach_depth); the path
    // disjunction is unrolled step by step so evaluation prunes dead edges
    // immediately instead of retrying every shared prefix
    {
        const std::string r = "r";  // the labelled origin
        auto step_var = [](int i) { return "s" + std::to_string(i); };
        FolPtr reached = fol_eq(step_var(reach_depth), u);
        for (int i = reach_depth - 1; i >= 0; --i) {
            const std::string cur = i == 0 ? r : step_var(i);
            std::vector<FolPtr> ways{fol_eq(cur, u)};
            for (const auto& attr : sig.attributes)
                ways.push_back(fol_exists(
                    step_var(i + 1),
                    fol_and({fol_pred(attr, {cur, step_var(i + 1)}),
                             reached})));
            reached = fol_or(std::move(ways));
        }
        if (reach_depth == 0) reached = fol_eq(r, u);
        std::vector<FolPtr> witnesses;
        for (const auto& label : sig.all_labels())
            witnesses.push_back(fol_exists(
                r, fol_and({fol_pred(label, {r}),
                            fol_forall(w, fol_iff(fol_pred(kMember, {u, w}),
                                                  fol_pred(kMember, {r, w}))),
                            reached})));
        out.push_back(fol_forall(
            u, fol_or({fol_pred(kWraps, {u}), fol_or(std::move(witnesses))})));
    }

    return out;
}

// ------------------------------------------------------- finite structures

FolModel translate_model(const Model& m) {
    FolModel out;
    auto elem = [&](const Entity& e) {
        return e.is_node() ? "n" + std::to_string(e.id)
                           : "w" + m.wrappings[e.id].name;
    };
    for (const auto& [id, info] : m.nodes) {
        std::string e = elem(node_entity(id));
        out.domain.push_back(e);
        for (const auto& l : info.labels) out.preds[l].insert({e});
        for (const auto& t : info.types) out.preds[t].insert({e});
    }
    for (int w = 0; w < static_cast<int>(m.wrappings.size()); ++w) {
        std::string e = elem(wrap_entity(w));
        out.domain.push_back(e);
        out.preds[kWraps].insert({e});
        for (const auto& l : m.wrappings[w].labels) out.preds[l].insert({e});
        for (const auto& t : m.wrappings[w].types) out.preds[t].insert({e});
        for (int n : m.wrappings[w].members)
            out.preds[kMember].insert({elem(node_entity(n)), e});
    }
    for (const auto& [key, tgt] : m.attrs)
        out.preds[key.second].insert(
            {elem(node_entity(key.first)), elem(tgt)});
    for (const auto& r : m.rels) {
        std::vector<std::string> tuple;
        for (const auto& a : r.args) tuple.push_back(elem(a));
        out.preds[r.name].insert(std::move(tuple));
    }
    return out;
}

namespace {

bool eval(const FolModel& m, const FolPtr& f,
          std::map<std::string, std::string>& env) {
    auto resolve = [&](const std::string& a) -> const std::string& {
        auto it = env.find(a);
        if (it == env.end())
            throw std::invalid_argument("free variable '" + a +
                                        "' in evaluated formula");
        return it->second;
    };
    switch (f->kind) {
        case Fol::Kind::truth:
            return true;
        case Fol::Kind::falsity:
            return false;
        case Fol::Kind::pred: {
            auto it = m.preds.find(f->name);
            if (it == m.preds.end()) return false;
            std::vector<std::string> tuple;
            tuple.reserve(f->args.size());
            for (const auto& a : f->args) tuple.push_back(resolve(a));
            return it->second.count(tuple) > 0;
        }
        case Fol::Kind::eq:
            return resolve(f->args[0]) == resolve(f->args[1]);
        case Fol::Kind::neg:
            return !eval(m, f->kids[0], env);
        case Fol::Kind::conj:
            return std::all_of(
                f->kids.begin(), f->kids.end(),
                [&](const FolPtr& k) { return eval(m, k, env); });
        case Fol::Kind::disj:
            return std::any_of(
                f->kids.begin(), f->kids.end(),
                [&](const FolPtr& k) { return eval(m, k, env); });
        case Fol::Kind::impl:
            return !eval(m, f->kids[0], env) || eval(m, f->kids[1], env);
        case Fol::Kind::iff:
            return eval(m, f->kids[0], env) == eval(m, f->kids[1], env);
        case Fol::Kind::exists:
        case Fol::Kind::forall: {
            auto it = env.find(f->name);
            std::optional<std::string> saved;
            if (it != env.end()) saved = it->second;
            bool want = f->kind == Fol::Kind::exists;
            bool result = !want;
            for (const auto& d : m.domain) {
                env[f->name] = d;
                if (eval(m, f->kids[0], env) == want) {
                    result = want;
                    break;
                }
            }
            if (saved)
                env[f->name] = *saved;
            else
                env.erase(f->name);
            return result;
        }
    }
    return false;
}

}  // namespace

bool fol_eval(const FolModel& m, const FolPtr& f) {
    std::map<std::string, std::string> env;
    return eval(m, f, env);
}

// ----------------------------------------------------------------- SMT-LIB

namespace {

std::string smt_name(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        if (c == '@')
            out += "b_";
        else if (c == '?')
            out += "n_";
        else if (c == '$')
            out += "w_";
        else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out += c;
        else
            out += '_';
    }
    return out.empty() ? "_" : out;
}

void collect_preds(const FolPtr& f, std::map<std::string, size_t>& preds) {
    if (f->kind == Fol::Kind::pred)
        preds.emplace(f->name, f->args.size());
    for (const auto& k : f->kids) collect_preds(k, preds);
}

void smt_print(const FolPtr& f, std::ostringstream& out) {
    switch (f->kind) {
        case Fol::Kind::truth:
            out << "true";
            return;
        case Fol::Kind::falsity:
            out << "false";
            return;
        case Fol::Kind::pred: {
            if (f->args.empty()) {
                out << smt_name(f->name);
                return;
            }
            out << "(" << smt_name(f->name);
            for (const auto& a : f->args) out << " " << smt_name(a);
            out << ")";
            return;
        }
        case Fol::Kind::eq:
            out << "(= " << smt_name(f->args[0]) << " " << smt_name(f->args[1])
                << ")";
            return;
        case Fol::Kind::neg:
            out << "(not ";
            smt_print(f->kids[0], out);
            out << ")";
            return;
        case Fol::Kind::conj:
        case Fol::Kind::disj: {
            out << (f->kind == Fol::Kind::conj ? "(and" : "(or");
            for (const auto& k : f->kids) {
                out << " ";
                smt_print(k, out);
            }
            out << ")";
            return;
        }
        case Fol::Kind::impl:
        case Fol::Kind::iff: {
            out << (f->kind == Fol::Kind::impl ? "(=> " : "(= ");
            smt_print(f->kids[0], out);
            out << " ";
            smt_print(f->kids[1], out);
            out << ")";
            return;
        }
        case Fol::Kind::exists:
        case Fol::Kind::forall: {
            out << (f->kind == Fol::Kind::exists ? "(exists ((" : "(forall ((")
                << smt_name(f->name) << " E)) ";
            smt_print(f->kids[0], out);
            out << ")";
            return;
        }
    }
}

}  // namespace

std::string to_smtlib(const std::vector<FolPtr>& formulas) {
    std::ostringstream out;
    out << "(set-logic UF)\n(declare-sort E 0)\n";
    std::map<std::string, size_t> preds;
    for (const auto& f : formulas) collect_preds(f, preds);
    for (const auto& [name, arity] : preds) {
        out << "(declare-fun " << smt_name(name) << " (";
        for (size_t i = 0; i < arity; ++i) out << (i ? " E" : "E");
        out << ") Bool)\n";
    }
    for (const auto& f : formulas) {
        out << "(assert ";
        smt_print(f, out);
        out << ")\n";
    }
    out << "(check-sat)\n";
    return out.str();
}

}  // namespace wrapframe
