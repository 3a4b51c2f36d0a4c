// Regenerates the JSON half of the fixture corpus from hand-authored
// structures.  Build ad hoc, e.g.
//   g++ -std=c++20 -Iinclude -Ivendor tools/genfixtures.cpp build/libwrapframe.a -o genfix
//   ./genfix fixtures
// The .avl / .deriv fixtures are plain text and live in git directly.
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrapframe/json_io.hpp"
#include "wrapframe/model.hpp"

using namespace wrapframe;

namespace {

void node(Model& m, int id, std::set<std::string> labels,
          std::set<std::string> types) {
    m.nodes[id] = NodeInfo{std::move(labels), std::move(types)};
}

void attr(Model& m, int src, const std::string& a, Entity tgt) {
    m.attrs[{src, a}] = tgt;
}

void rel(Model& m, const std::string& name, std::vector<Entity> args) {
    m.rels.insert(Rel{name, std::move(args)});
}

int wrap(Model& m, const std::string& name, std::set<std::string> labels,
         std::set<int> members) {
    m.wrappings.push_back(
        Wrapping{name, std::move(labels), {}, std::move(members)});
    return static_cast<int>(m.wrappings.size()) - 1;
}

// somebody walking fast: person with a size, walking event with manner
Model walker() {
    Model m;
    node(m, 0, {"@b0"}, {"person"});
    node(m, 1, {"@b1"}, {"walking"});
    node(m, 2, {}, {"fast"});
    node(m, 3, {}, {"tall"});
    attr(m, 0, "SIZE", node_entity(3));
    attr(m, 1, "AGENT", node_entity(0));
    attr(m, 1, "MANNER", node_entity(2));
    return m;
}

// a cat seeing some animal (general) / a cat=animal seeing itself carefully
Model seeing_general() {
    Model m;
    node(m, 0, {"@b0"}, {"cat"});
    node(m, 1, {"@b1"}, {"seeing"});
    node(m, 2, {}, {"animal"});
    attr(m, 1, "AGENT", node_entity(0));
    attr(m, 1, "THEME", node_entity(2));
    return m;
}

Model seeing_specific() {
    Model m;
    node(m, 0, {"@b0"}, {"cat", "animal"});
    node(m, 1, {"@b1"}, {"seeing"});
    node(m, 2, {}, {"carefully"});
    attr(m, 1, "AGENT", node_entity(0));
    attr(m, 1, "THEME", node_entity(0));
    attr(m, 1, "MANNER", node_entity(2));
    return m;
}

// Mary sees John / John is tall / their unification
Model mary_sees_john() {
    Model m;
    node(m, 0, {"@b0"}, {"seeing"});
    node(m, 1, {"@b1"}, {"Mary"});
    node(m, 2, {"@b2"}, {"John"});
    attr(m, 0, "AGENT", node_entity(1));
    attr(m, 0, "THEME", node_entity(2));
    return m;
}

Model john_tall() {
    Model m;
    node(m, 0, {"@b2"}, {"John"});
    node(m, 1, {}, {"tall"});
    attr(m, 0, "SIZE", node_entity(1));
    return m;
}

Model mary_sees_tall_john() {
    Model m;
    node(m, 0, {"@b0"}, {"seeing"});
    node(m, 1, {"@b1"}, {"Mary"});
    node(m, 2, {"@b2"}, {"John"});
    node(m, 3, {}, {"tall"});
    attr(m, 0, "AGENT", node_entity(1));
    attr(m, 0, "THEME", node_entity(2));
    attr(m, 2, "SIZE", node_entity(3));
    return m;
}

// Mary walks fast, composed from three lexical entries (labels merge) ...
Model mary_walks_fast_merged() {
    Model m;
    node(m, 0, {"@b0", "@k0"}, {"walking"});
    node(m, 1, {"@b1", "@k1"}, {"Mary"});
    node(m, 2, {}, {"fast"});
    attr(m, 0, "AGENT", node_entity(1));
    attr(m, 0, "MANNER", node_entity(2));
    return m;
}

// ... and stated as one sentence formula (single labelling)
Model mary_walks_fast_minimal() {
    Model m;
    node(m, 0, {"@b0"}, {"walking"});
    node(m, 1, {}, {"Mary"});
    node(m, 2, {}, {"fast"});
    attr(m, 0, "AGENT", node_entity(1));
    attr(m, 0, "MANNER", node_entity(2));
    return m;
}

// The two minimal models of the disjunctive-path-equation formula:
// either y's p loops on y, or x and y close a two-cycle.
Model disjunctive_paths_loop() {
    Model m;
    node(m, 0, {"?x"}, {});
    node(m, 1, {"?y"}, {"t"});
    node(m, 2, {"?z"}, {});
    node(m, 3, {"@b"}, {});
    node(m, 4, {}, {});
    attr(m, 0, "P", node_entity(1));
    attr(m, 1, "P", node_entity(1));
    attr(m, 2, "Q", node_entity(4));
    int w0 = wrap(m, "W0", {"$T1", "$T2"}, {0, 1});
    int w1 = wrap(m, "W1", {"$T3"}, {2, 4});
    (void)w0;
    attr(m, 3, "Q", wrap_entity(w1));
    rel(m, "r", {node_entity(3), node_entity(1)});
    return m;
}

Model disjunctive_paths_cycle() {
    Model m = disjunctive_paths_loop();
    m.nodes.at(0).types = {"t"};
    m.nodes.at(1).types = {};
    m.attrs[{1, "P"}] = node_entity(0);
    return m;
}

// underspecified "every dog barks": one determiner, verb frame, top hole
Model every_dog_barks_complex() {
    Model m;
    node(m, 0, {"?x2"}, {"dog"});
    node(m, 1, {"?z0"}, {"barking"});
    node(m, 2, {"?x1"}, {});
    node(m, 3, {"@e"}, {"every"});
    node(m, 4, {"@b"}, {"hole"});
    node(m, 5, {}, {"hole"});
    node(m, 6, {}, {"hole"});
    attr(m, 1, "AGENT", node_entity(2));
    attr(m, 3, "RESTR", node_entity(5));
    attr(m, 3, "NSCOPE", node_entity(6));
    attr(m, 3, "RVAR", node_entity(0));
    attr(m, 3, "NSVAR", node_entity(2));
    int t2 = wrap(m, "T2", {"$T2"}, {0});
    int t0 = wrap(m, "T0", {"$T0"}, {1, 2});
    rel(m, "scope", {node_entity(5), wrap_entity(t2)});
    rel(m, "scope", {node_entity(4), node_entity(3)});
    rel(m, "scope", {node_entity(6), wrap_entity(t0)});
    return m;
}

// underspecified "a student stroked every cat": two determiners fight
Model stroking_complex() {
    Model m;
    node(m, 0, {"?x"}, {"student"});
    node(m, 1, {"?e"}, {"stroking"});
    node(m, 2, {"?y"}, {});
    node(m, 3, {"?z"}, {});
    node(m, 4, {"@a"}, {"a"});
    node(m, 5, {}, {"hole"});
    node(m, 6, {}, {"hole"});
    node(m, 7, {"@ev"}, {"every"});
    node(m, 8, {}, {"hole"});
    node(m, 9, {}, {"hole"});
    node(m, 10, {"?c"}, {"cat"});
    node(m, 11, {"@h0"}, {"hole"});
    attr(m, 1, "AGENT", node_entity(2));
    attr(m, 1, "THEME", node_entity(3));
    attr(m, 4, "RESTR", node_entity(5));
    attr(m, 4, "NSCOPE", node_entity(6));
    attr(m, 4, "RVAR", node_entity(0));
    attr(m, 4, "NSVAR", node_entity(2));
    attr(m, 7, "RESTR", node_entity(8));
    attr(m, 7, "NSCOPE", node_entity(9));
    attr(m, 7, "RVAR", node_entity(10));
    attr(m, 7, "NSVAR", node_entity(3));
    int ws = wrap(m, "S", {"$S"}, {0});
    int wv = wrap(m, "V", {"$V"}, {1, 2, 3});
    int wc = wrap(m, "C", {"$C"}, {10});
    rel(m, "scope", {node_entity(5), wrap_entity(ws)});
    rel(m, "scope", {node_entity(6), wrap_entity(wv)});
    rel(m, "scope", {node_entity(8), wrap_entity(wc)});
    rel(m, "scope", {node_entity(9), wrap_entity(wv)});
    rel(m, "scope", {node_entity(11), node_entity(4)});
    rel(m, "scope", {node_entity(11), node_entity(7)});
    return m;
}

// its wide-universal reading, fully plugged
Model stroking_every_over_a() {
    Model m;
    node(m, 0, {"?x"}, {"student"});
    node(m, 1, {"?e"}, {"stroking"});
    node(m, 2, {"?y"}, {});
    node(m, 3, {"?z"}, {});
    node(m, 4, {"@a"}, {"a", "hole"});
    node(m, 7, {"@ev", "@h0"}, {"every", "hole"});
    node(m, 10, {"?c"}, {"cat"});
    attr(m, 1, "AGENT", node_entity(2));
    attr(m, 1, "THEME", node_entity(3));
    int ws = wrap(m, "S", {"$S"}, {0});
    int wv = wrap(m, "V", {"$V"}, {1, 2, 3});
    int wc = wrap(m, "C", {"$C"}, {10});
    m.wrappings[ws].types.insert("hole");
    m.wrappings[wv].types.insert("hole");
    m.wrappings[wc].types.insert("hole");
    attr(m, 4, "RESTR", wrap_entity(ws));
    attr(m, 4, "NSCOPE", wrap_entity(wv));
    attr(m, 4, "RVAR", node_entity(0));
    attr(m, 4, "NSVAR", node_entity(2));
    attr(m, 7, "RESTR", wrap_entity(wc));
    attr(m, 7, "NSCOPE", node_entity(4));
    attr(m, 7, "RVAR", node_entity(10));
    attr(m, 7, "NSVAR", node_entity(3));
    rel(m, "scope", {wrap_entity(ws), wrap_entity(ws)});
    rel(m, "scope", {wrap_entity(wv), wrap_entity(wv)});
    rel(m, "scope", {wrap_entity(wc), wrap_entity(wc)});
    rel(m, "scope", {node_entity(4), wrap_entity(wv)});
    rel(m, "scope", {node_entity(7), node_entity(4)});
    rel(m, "scope", {node_entity(7), node_entity(7)});
    return m;
}

// "most farmers who own a donkey do not always beat it": the donkey
// anaphora complex whose dominance constraints admit no tree resolution
Model donkey_complex() {
    Model m;
    node(m, 0, {"?f"}, {"farmer"});
    node(m, 1, {"?e1"}, {"beating"});
    node(m, 2, {}, {});
    node(m, 3, {}, {});
    node(m, 4, {"?d"}, {"donkey"});
    node(m, 5, {"?e2"}, {"owning"});
    node(m, 6, {}, {});
    node(m, 7, {}, {});
    node(m, 8, {"@most"}, {"most"});
    node(m, 9, {}, {"hole"});
    node(m, 10, {}, {"hole"});
    node(m, 11, {"@the"}, {"the"});
    node(m, 12, {}, {"hole"});
    node(m, 13, {}, {"hole"});
    node(m, 14, {"@conj"}, {"conj"});
    node(m, 15, {"@co1"}, {"hole"});
    node(m, 16, {"@co2"}, {"hole"});
    node(m, 17, {"@a"}, {"a"});
    node(m, 18, {}, {"hole"});
    node(m, 19, {}, {"hole"});
    node(m, 20, {"@h0"}, {"hole"});
    node(m, 21, {"@neg"}, {"neg"});
    node(m, 22, {}, {"hole"});
    node(m, 23, {"@alw"}, {"always"});
    node(m, 24, {}, {"hole"});
    attr(m, 1, "AGENT", node_entity(2));
    attr(m, 1, "THEME", node_entity(3));
    attr(m, 5, "AGENT", node_entity(6));
    attr(m, 5, "THEME", node_entity(7));
    attr(m, 8, "RESTR", node_entity(9));
    attr(m, 8, "NSCOPE", node_entity(10));
    attr(m, 8, "RVAR", node_entity(0));
    attr(m, 8, "NSVAR", node_entity(2));
    attr(m, 11, "RESTR", node_entity(12));
    attr(m, 11, "NSCOPE", node_entity(13));
    attr(m, 11, "RVAR", node_entity(4));
    attr(m, 11, "NSVAR", node_entity(3));
    attr(m, 17, "RESTR", node_entity(18));
    attr(m, 17, "NSCOPE", node_entity(19));
    attr(m, 17, "RVAR", node_entity(4));
    attr(m, 17, "NSVAR", node_entity(7));
    attr(m, 21, "SCOPE", node_entity(22));
    attr(m, 23, "SCOPE", node_entity(24));
    attr(m, 23, "VAR", node_entity(1));
    int f1 = wrap(m, "F1", {"$F1"}, {0});
    int f0 = wrap(m, "F0", {"$F0"}, {1, 2, 3});
    int f2 = wrap(m, "F2", {"$F2"}, {4});
    int f3 = wrap(m, "F3", {"$F3"}, {5, 6, 7});
    rel(m, "scope", {node_entity(14), node_entity(15)});
    rel(m, "scope", {node_entity(14), node_entity(16)});
    rel(m, "var", {node_entity(14), node_entity(6)});
    rel(m, "var", {node_entity(14), node_entity(0)});
    rel(m, "scope", {node_entity(9), wrap_entity(f1)});
    rel(m, "scope", {node_entity(9), node_entity(14)});
    rel(m, "scope", {node_entity(10), wrap_entity(f0)});
    rel(m, "scope", {node_entity(10), node_entity(11)});
    rel(m, "scope", {node_entity(12), wrap_entity(f2)});
    rel(m, "scope", {node_entity(13), wrap_entity(f0)});
    rel(m, "scope", {node_entity(15), wrap_entity(f3)});
    rel(m, "scope", {node_entity(15), node_entity(17)});
    rel(m, "scope", {node_entity(16), wrap_entity(f1)});
    rel(m, "scope", {node_entity(18), wrap_entity(f2)});
    rel(m, "scope", {node_entity(19), wrap_entity(f3)});
    rel(m, "scope", {node_entity(20), node_entity(8)});
    rel(m, "scope", {node_entity(20), node_entity(21)});
    rel(m, "scope", {node_entity(22), node_entity(23)});
    rel(m, "scope", {node_entity(24), wrap_entity(f0)});
    return m;
}

// instance frames for checking the transcribed universal
Model instance_two_dogs() {
    Model m;
    node(m, 0, {"@d1"}, {"dog"});
    node(m, 1, {"@d2"}, {"dog"});
    node(m, 2, {"@e1"}, {"barking"});
    node(m, 3, {"@e2"}, {"barking"});
    attr(m, 2, "AGENT", node_entity(0));
    attr(m, 3, "AGENT", node_entity(1));
    return m;
}

Model instance_lazy_dog() {
    Model m;
    node(m, 0, {"@d1"}, {"dog"});
    node(m, 1, {"@d2"}, {"dog"});
    node(m, 2, {"@e1"}, {"barking"});
    attr(m, 2, "AGENT", node_entity(0));
    return m;
}

Model instance_no_dogs() {
    Model m;
    node(m, 0, {"@c1"}, {"cat"});
    return m;
}

void emit(const std::string& dir, const std::string& name, const Model& m) {
    auto errors = m.validate();
    if (!errors.empty())
        throw std::logic_error(name + ": " + errors.front());
    save_model(m, dir + "/" + name + ".json");
    std::cout << name << ".json\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::string dir = argc > 1 ? argv[1] : "fixtures";
    emit(dir, "walker", walker());
    emit(dir, "seeing_general", seeing_general());
    emit(dir, "seeing_specific", seeing_specific());
    emit(dir, "mary_sees_john", mary_sees_john());
    emit(dir, "john_tall", john_tall());
    emit(dir, "mary_sees_tall_john", mary_sees_tall_john());
    emit(dir, "mary_walks_fast", mary_walks_fast_merged());
    emit(dir, "mary_walks_fast_minimal", mary_walks_fast_minimal());
    emit(dir, "disjunctive_paths_loop", disjunctive_paths_loop());
    emit(dir, "disjunctive_paths_cycle", disjunctive_paths_cycle());
    emit(dir, "every_dog_barks_complex", every_dog_barks_complex());
    emit(dir, "stroking_complex", stroking_complex());
    emit(dir, "stroking_every_over_a", stroking_every_over_a());
    emit(dir, "donkey_complex", donkey_complex());
    emit(dir, "instance_two_dogs", instance_two_dogs());
    emit(dir, "instance_lazy_dog", instance_lazy_dog());
    emit(dir, "instance_no_dogs", instance_no_dogs());
    return 0;
}
