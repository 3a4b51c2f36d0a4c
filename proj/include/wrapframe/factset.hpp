#pragma once

// A congruence-closed set of ground facts over label-path terms.  Terms that
// are forced equal share an equivalence class (a "cell"); the deduction
// schemata of the logic are maintained as invariants on every mutation:
//
//   - prefix definedness: every prefix of a defined term is defined
//   - equality is a congruence w.r.t. attribute successors
//   - wrapping membership propagates along attribute edges in both
//     directions (non-escapability), and two wrappings sharing a member
//     collapse into one (disjointedness)
//   - IN(k, T) entails INWR(k) and WR(T); a $-label entails WR
//   - contradictions: an entity that both wraps and is wrapped, a wrapping
//     with an outgoing attribute edge, a node-sort label on a wrapping
//
// A contradictory set stays usable but reports contradictory() with the
// first reason found.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wrapframe/avl.hpp"
#include "wrapframe/model.hpp"

namespace wrapframe {

class FactSet {
public:
    // safety cap on term creation; 0 means unlimited.  The caller derives it
    // from the input (see c0_bound); exceeding it indicates a logic error.
    void set_budget(int max_created) { budget_ = max_created; }

    void assert_atom(const Atom& a);
    bool contains(const Atom& a) const;

    bool contradictory() const { return contradictory_; }
    const std::string& reason() const { return reason_; }

    // merge another fact set in (shared labels identify classes)
    void absorb(const FactSet& other);
    // assert everything a concrete model presents
    void absorb_model(const Model& m);
    // re-run closure; idempotent
    void close();

    // atom-set inclusion: everything this set contains, `other` contains.
    // Both sets must be non-contradictory.
    bool subset_of(const FactSet& other) const;

    // equal keys <=> equal atom sets (canonical label-rooted traversal)
    std::string canonical_key() const;

    int cell_count() const;  // live equivalence classes
    std::set<std::string> labels() const;
    Signature signature() const;
    // terms with a defined walk, up to the given path length
    std::vector<Formula::Term> enumerate_terms(int max_len) const;

    struct Built {
        std::optional<Model> model;
        std::string error;  // set when no canonical model exists
    };
    Built build_model() const;

private:
    struct Cell {
        std::map<std::string, int> succ;  // attribute -> cell
        std::set<std::string> types;
        std::set<std::string> labels;
        bool inwr = false;   // wrapped node
        bool wr = false;     // wrapping entity
        int container = -1;  // cell of the wrapping this is a member of
    };

    int new_cell();
    int find(int i) const;
    int cell_for_label(const std::string& label);
    std::optional<int> lookup(const Formula::Term& t) const;
    int walk(const Formula::Term& t);
    void queue_merge(int a, int b);
    void do_merge(int a, int b);
    void normalize();
    void contradiction(const std::string& why);
    std::vector<int> bfs_order() const;  // canonical order of live cells

    mutable std::vector<int> parent_;
    std::vector<Cell> cells_;
    std::map<std::string, int> label_cell_;
    std::set<std::pair<std::string, std::vector<int>>> rels_;
    std::vector<std::pair<int, int>> pending_;
    bool contradictory_ = false;
    std::string reason_;
    int budget_ = 0;
    int created_ = 0;
};

}  // namespace wrapframe
