#pragma once

// Attribute-value logic over wrapped feature structures: the surface language
// (formulas with descriptions), its ground atoms, clause form, satisfaction,
// and the formula -> clause-form conversion used by minimal-model search.
//
// Concrete syntax (parse_formula / to_string):
//
//   formula  := term ('&' term)*
//   term     := '!' term
//             | '(' formula ')'
//             | 'TOP'
//             | WVAR ':' '[' NVAR '.' dformula ']'          wrapping content
//             | ident '(' labelpath (',' labelpath)* ')'    relation
//             | labelpath '==' labelpath                    path equation
//             | LABEL (('.' | ':') datom)?                  node description
//   labelpath:= LABEL ('.' ATTR)*
//   dformula := dconj ('|' dconj)*
//   dconj    := datom ('&' datom)*
//   datom    := ATTR ':' datom | '#'? LABEL | ident | 'TOP' | '(' dformula ')'
//
// Labels carry their sigil (@base, ?node-var, $wrapping-var).  Attributes are
// ALL-CAPS identifiers; any other identifier in a description is a type.  In
// the `LABEL . datom` form, leading `.ATTR` segments fold into nested
// attribute descriptions, so `@b.Q:$T3` reads as `@b . (Q:#$T3)`.
// `//` starts a comment.  A source may begin with declaration lines
// (`types: ...`, `attrs: ...`, `rels: name/arity ...`) ahead of the formula;
// anything undeclared is inferred from use.

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wrapframe/model.hpp"

namespace wrapframe {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------- descriptions

struct Description {
    enum class Kind { attr, type, label, conj, disj, top };

    Kind kind = Kind::top;
    std::string text;                // attribute, type, or label (with sigil)
    std::vector<Description> kids;   // attr: 1 child; conj/disj: 2+

    bool operator==(const Description&) const = default;
};

Description dtop();
Description dtype(std::string type);
Description dlabel(std::string label);
Description dattr(std::string attr, Description sub);
Description dand(std::vector<Description> kids);
Description dor(std::vector<Description> kids);

// ----------------------------------------------------------------- formulas

struct Formula {
    enum class Kind { at, path_eq, rel, wrap, conj, neg, top };

    using Term = std::pair<std::string, Path>;  // label . attribute path

    Kind kind = Kind::top;
    std::string label;               // at: described label; wrap: wrapping var
    std::string nvar;                // wrap: bound node variable
    Description desc;                // at / wrap body
    Term lhs, rhs;                   // path_eq
    std::string rel_name;            // rel
    std::vector<Term> rel_args;      // rel
    std::vector<Formula> kids;       // conj: 2+; neg: 1

    bool operator==(const Formula&) const = default;
};

Formula ftop();
Formula fat(std::string label, Description desc);
Formula fwrap(std::string wvar, std::string nvar, Description desc);
Formula fpath_eq(Formula::Term lhs, Formula::Term rhs);
Formula frel(std::string name, std::vector<Formula::Term> args);
Formula fand(std::vector<Formula> kids);
Formula fnot(Formula kid);

// ------------------------------------------------------------------- atoms

// Ground facts over label-path terms; the clause language of deduction.
struct Atom {
    enum class Kind { path_top, path_type, path_eq, rel, inwr, in, wr };

    Kind kind = Kind::path_top;
    std::string name;                         // type (path_type) or relation
    std::vector<Formula::Term> terms;         // see factory functions

    auto operator<=>(const Atom&) const = default;
};

Atom apath_top(std::string label, Path path);               // k.p : TOP
Atom apath_type(std::string label, Path path, std::string type);
Atom apath_eq(Formula::Term lhs, Formula::Term rhs);        // k.p == l.q
Atom arel(std::string name, std::vector<Formula::Term> args);
Atom ainwr(std::string label);                              // INWR(k)
Atom ain(std::string label, std::string wvar);              // IN(k, T)
Atom awr(std::string label);                                // WR(k)

// ------------------------------------------------------------ clause form

// premises => conclusions, read as: if all premises hold, some conclusion
// holds.  Empty conclusions make an integrity constraint; empty premises an
// unconditional (disjunctive) fact.
struct Clause {
    std::set<Atom> premises;
    std::set<Atom> conclusions;

    auto operator<=>(const Clause&) const = default;
};

struct Cnf {
    std::vector<Clause> clauses;     // sorted, duplicate-free
    int label_count = 0;             // distinct labels in the source formula
    int attr_weight = 0;             // attribute occurrences in the source
};

// -------------------------------------------------------------- operations

struct ParsedFormula {
    Formula formula;
    Signature signature;             // declared merged with inferred
};

ParsedFormula parse_source(const std::string& text);
Formula parse_formula(const std::string& text);
Atom parse_atom(const std::string& text);

std::string to_string(const Description& d);
std::string to_string(const Formula& f);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);

// signature inferred from use (labels by sigil, ALL-CAPS attributes, other
// identifiers as types, relations with their arity)
Signature signature_of(const Formula& f);

bool satisfies(const Model& m, const Formula& f);
bool satisfies(const Model& m, const Atom& a);
bool satisfies(const Model& m, const Clause& c);
bool satisfies(const Model& m, const Cnf& cnf);

// Clause-form conversion: description guards become clause structure, labels
// and attribute occurrences of the source are recorded for the search budget.
Cnf to_cnf(const Formula& f);

}  // namespace wrapframe
