#pragma once
// Quantifier scope resolution over wrapped feature structures.
//
// A scope complex is an ordinary model whose complement carries logical
// machinery: quantifier nodes (typed every/some/a/no/...), hole nodes
// (unfilled argument positions), dominance constraints (scope relations
// whose first argument is a hole), and restrictor / nuclear-scope
// attributes. Wrappings hold the content fragments.
//
// Solving enumerates the ways of plugging every hole with a fragment such
// that the result is a tree honouring all dominance constraints; each solved
// reading is materialized as a model (holes merged into the entity that
// fills them) and can be transcribed into a closed first-order formula.
//
// Conventions shared by the solver and the transcriber:
//   - fragments are the wrappings plus the weakly connected components of
//     the complement under attribute edges (and scope relations glued from a
//     non-hole source, which attach connective holes);
//   - a hole merged into a wrapping keeps its types on the wrapping; node
//     labels of such a hole are discarded (node labels cannot name a
//     wrapping);
//   - scope and var relations are solver machinery: they survive into the
//     solved model but are never emitted into transcribed formulas, and
//     relations with an argument that is neither inside the transcribed
//     wrapping nor bound by an enclosing quantifier are omitted as well.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wrapframe/fol.hpp"
#include "wrapframe/model.hpp"

namespace wrapframe {

// Horn rules applied to a complex before solving, plus the naming
// conventions the solver and the transcriber share.
struct ConstraintSet {
    // type implications, applied to nodes and wrappings until fixpoint
    std::vector<std::pair<std::string, std::string>> implications;
    // pairs of types that must not co-occur on one entity
    std::vector<std::pair<std::string, std::string>> incompatibilities;

    bool cascade_holes = true;        // quantifiers grow restr/nscope holes
    bool wrappingization = false;     // reject wrappings typed beyond hole
    bool scope_transitivity = false;  // close dominance edges transitively

    std::string scope_rel = "scope";
    std::string var_rel = "var";
    std::string hole_type = "hole";
    std::string quant_type = "quant";
    std::string restr_attr = "RESTR";
    std::string nscope_attr = "NSCOPE";
    std::string rvar_attr = "RVAR";
    std::string nsvar_attr = "NSVAR";
};

// the quantifier hierarchy (every <= univ-quant <= quant <= logical, some/a
// <= exist-quant, conj <= conn, hole <= logical, ...) plus the ext/logical
// incompatibility keeping instance nodes apart from logical nodes
ConstraintSet default_constraints();

// Fixpoint of the Horn rules: type-hierarchy closure, hole cascades for
// quantifier nodes (missing restr/nscope targets are created as fresh hole
// nodes), optional dominance transitivity. nullopt iff an incompatibility
// fires.
std::optional<Model> apply_constraints(const Model& m, const ConstraintSet& cs);

// ---------------------------------------------------------------- fragments

// A fragment is either a wrapping or an attribute-reachability-maximal
// subgraph of the complement, rooted at its unique source node.
struct Fragment {
    std::optional<int> wrapping;  // index, for wrapping fragments
    std::set<int> nodes;          // complement members (empty for wrappings)
    Entity root;
    std::vector<int> holes;       // hole-typed members, ascending
    std::string name;             // display name for provenance
};

std::vector<Fragment> fragments(const Model& m,
                                const ConstraintSet& cs = default_constraints());

// fragments with no ingoing dominance edge from another fragment
std::vector<Fragment> free_fragments(const Model& m,
                                     const ConstraintSet& cs = default_constraints());

// ----------------------------------------------------------------- readings

struct PlugTree {
    int fragment = -1;
    std::vector<std::pair<int, PlugTree>> plugs;  // hole node id -> subtree
};

struct Reading {
    Model model;      // solved form: every hole merged with its plug's root
    PlugTree tree;
    std::vector<Fragment> fragments;      // fragment table of the source
    std::shared_ptr<const Model> source;  // the complex that was solved
    std::map<int, Entity> resolution;     // hole node -> surviving entity
    std::vector<std::string> choices;     // fragment names, outermost first
};

// All readings of the complex up to isomorphism: recursively pick a free
// fragment, split the remainder into weakly connected components, and plug
// each component at the hole its dominance edges claim (components without a
// claim are tried at every open hole). Empty result iff some sub-problem has
// no free fragment or leaves a hole unfilled. max_readings = 0: unlimited.
std::vector<Reading> solve(const Model& complex,
                           const ConstraintSet& cs = default_constraints(),
                           int max_readings = 0);

// ------------------------------------------------------------ transcription

// Closed first-order formula of a solved reading. Quantifier fragments
// transcribe by their determiner type (some/a -> existential, every ->
// universal implication, no -> negated existential; anything else is
// rejected with "unsupported quantifier"). A wrapping transcribes to the
// existential closure of its fact set: member types, internal attribute
// edges, an attribute-existence witness for edges pointing at a wrapping,
// relations over resolvable arguments, and one equation per member bound by
// an enclosing quantifier variable.
FolPtr transcribe(const Reading& r,
                  const ConstraintSet& cs = default_constraints());

// generalized-quantifier rendering, e.g. every(u, dog(u), barks(e) & AGENT(e, u))
std::string to_gqt(const Reading& r,
                   const ConstraintSet& cs = default_constraints());

// finite model check of a closed formula against a plain instance frame;
// throws std::invalid_argument if the formula has free variables
bool check_instance(const FolPtr& formula, const Model& instance);

}  // namespace wrapframe
