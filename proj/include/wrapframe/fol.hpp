#pragma once

// First-order transcription: formulas and models of the attribute-value
// language translate into classical first-order logic over one domain that
// holds nodes and wrapping entities alike.  Labels, types, and wrapping-hood
// become unary predicates, attributes and membership binary ones.  A finite
// evaluator closes the loop: satisfaction in a model coincides with truth of
// the translation in the translated structure.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wrapframe/avl.hpp"
#include "wrapframe/model.hpp"

namespace wrapframe {

struct Fol;
using FolPtr = std::shared_ptr<const Fol>;

struct Fol {
    enum class Kind {
        truth,
        falsity,
        pred,
        eq,
        neg,
        conj,
        disj,
        impl,
        iff,
        exists,
        forall,
    };

    Kind kind = Kind::truth;
    std::string name;                // predicate name, or bound variable
    std::vector<std::string> args;   // predicate arguments (variables)
    std::vector<FolPtr> kids;
};

FolPtr fol_true();
FolPtr fol_false();
FolPtr fol_pred(std::string name, std::vector<std::string> args);
FolPtr fol_eq(std::string a, std::string b);
FolPtr fol_not(FolPtr kid);
FolPtr fol_and(std::vector<FolPtr> kids);   // flattens; empty = true
FolPtr fol_or(std::vector<FolPtr> kids);    // flattens; empty = false
FolPtr fol_impl(FolPtr a, FolPtr b);
FolPtr fol_iff(FolPtr a, FolPtr b);
FolPtr fol_exists(std::string var, FolPtr body);
FolPtr fol_forall(std::string var, FolPtr body);

std::string to_string(const FolPtr& f);
// variables renamed consistently; conjunct/disjunct order ignored
bool alpha_equal(const FolPtr& a, const FolPtr& b);
std::set<std::string> free_variables(const FolPtr& f);

// ------------------------------------------------------------- translation

// predicate names a label may carry sigils; these survive into the FOL
// signature and are sanitized only for SMT-LIB output

FolPtr translate_description(const Description& d, const std::string& var);
FolPtr translate_formula(const Formula& f);

// the background theory of wrapped feature structures over a signature:
// label existence/uniqueness/sorts, attribute functionality and sources,
// membership sanity, wrapping non-emptiness and disjointedness,
// non-escapability, and label-reachability with attribute paths up to
// `reach_depth`
std::vector<FolPtr> theory_axioms(const Signature& sig, int reach_depth = 3);

// ---------------------------------------------------- finite FOL structures

struct FolModel {
    std::vector<std::string> domain;
    std::map<std::string, std::set<std::vector<std::string>>> preds;
};

FolModel translate_model(const Model& m);

// evaluate a closed formula; throws std::invalid_argument on free variables
bool fol_eval(const FolModel& m, const FolPtr& f);

std::string to_smtlib(const std::vector<FolPtr>& formulas);

}  // namespace wrapframe
