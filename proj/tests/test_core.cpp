// Model structure: labels, entities, validation rules, JSON round-trips,
// DOT rendering, juxtaposition.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "support/oracles.hpp"
#include "wrapframe/json_io.hpp"
#include "wrapframe/model.hpp"
#include "wrapframe/morphism.hpp"

using namespace wrapframe;
using support::fixture_path;
using support::load_fixture;

namespace {

Model two_node_chain() {
    Model m;
    m.nodes[0] = NodeInfo{{"@b0"}, {"person"}};
    m.nodes[1] = NodeInfo{{}, {"tall"}};
    m.attrs[{0, "SIZE"}] = node_entity(1);
    return m;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("labels carry their sigil") {
    CHECK(is_label("@b0"));
    CHECK(is_label("?x"));
    CHECK(is_label("$T1"));
    CHECK_FALSE(is_label("dog"));
    CHECK_FALSE(is_label("AGENT"));
    CHECK_FALSE(is_label(""));

    CHECK(label_sort("@b0") == LabelSort::base);
    CHECK(label_sort("?x") == LabelSort::node_var);
    CHECK(label_sort("$T1") == LabelSort::wrap_var);
    CHECK_THROWS_AS(label_sort("dog"), std::invalid_argument);
}

TEST_CASE("entities order nodes before wrappings") {
    CHECK(node_entity(3).is_node());
    CHECK(wrap_entity(0).is_wrapping());
    CHECK(node_entity(99) < wrap_entity(0));
    CHECK(node_entity(1) == node_entity(1));
    CHECK(node_entity(1) != wrap_entity(1));
}

TEST_CASE("paths print dot-separated") {
    CHECK(path_to_string({}) == "");
    CHECK(path_to_string({"P"}) == "P");
    CHECK(path_to_string({"P", "Q"}) == "P.Q");
}

TEST_CASE("lookup on a concrete frame") {
    Model m = load_fixture("walker.json");
    REQUIRE(m.validate().empty());

    auto walking = m.find_label("@b1");
    REQUIRE(walking.has_value());
    CHECK(m.has_type(*walking, "walking"));
    CHECK_FALSE(m.has_type(*walking, "person"));

    auto agent = m.attr_target(walking->id, "AGENT");
    REQUIRE(agent.has_value());
    CHECK(m.labels_of(*agent).count("@b0"));
    CHECK_FALSE(m.attr_target(walking->id, "THEME").has_value());

    auto size = m.follow(*walking, {"AGENT", "SIZE"});
    REQUIRE(size.has_value());
    CHECK(m.has_type(*size, "tall"));
    CHECK_FALSE(m.follow(*walking, {"AGENT", "AGENT"}).has_value());

    CHECK(m.interp("@b1", {"MANNER"}).has_value());
    CHECK_FALSE(m.interp("@zz", {}).has_value());

    Signature sig = m.signature();
    CHECK(sig.base_labels == std::set<std::string>{"@b0", "@b1"});
    CHECK(sig.attributes == std::set<std::string>{"AGENT", "MANNER", "SIZE"});
    CHECK(sig.types.count("fast"));
    CHECK(sig.check().empty());
}

TEST_CASE("w-set of a node is its wrapping or the complement") {
    Model m = load_fixture("disjunctive_paths_loop.json");
    REQUIRE(m.validate().empty());
    auto x = m.find_label("?x");
    auto b = m.find_label("@b");
    REQUIRE((x && b));
    CHECK(w_set_of(m, x->id).has_value());
    CHECK_FALSE(w_set_of(m, b->id).has_value());
    CHECK(m.wrap_of(x->id) == w_set_of(m, x->id));
    CHECK(m.has_entity(wrap_entity(0)));
    CHECK_FALSE(m.has_entity(wrap_entity(9)));
}

TEST_CASE("validation accepts every shipped fixture") {
    for (const char* name :
         {"walker.json", "seeing_general.json", "seeing_specific.json",
          "mary_sees_john.json", "john_tall.json", "mary_sees_tall_john.json",
          "mary_walks_fast.json", "mary_walks_fast_minimal.json",
          "disjunctive_paths_loop.json", "disjunctive_paths_cycle.json",
          "every_dog_barks_complex.json", "stroking_complex.json",
          "stroking_every_over_a.json", "donkey_complex.json",
          "instance_two_dogs.json", "instance_lazy_dog.json",
          "instance_no_dogs.json"}) {
        CAPTURE(name);
        CHECK(load_fixture(name).validate().empty());
    }
}

TEST_CASE("validation rejects malformed structures") {
    SUBCASE("empty node set") {
        Model m;
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("empty wrapping") {
        Model m = two_node_chain();
        m.wrappings.push_back(Wrapping{"W", {"$T"}, {}, {}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("overlapping wrappings") {
        Model m = two_node_chain();
        m.nodes[0].labels = {"@b0"};
        m.nodes[1].labels = {"?x"};
        m.attrs.clear();
        m.wrappings.push_back(Wrapping{"W1", {"$T1"}, {}, {1}});
        m.wrappings.push_back(Wrapping{"W2", {"$T2"}, {}, {1}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("duplicate wrapping name") {
        Model m = two_node_chain();
        m.nodes[1].labels = {"?x"};
        m.attrs.clear();
        m.wrappings.push_back(Wrapping{"W", {"$T1"}, {}, {0}});
        m.wrappings.push_back(Wrapping{"W", {"$T2"}, {}, {1}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("one label on two entities") {
        Model m = two_node_chain();
        m.nodes[1].labels.insert("@b0");
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("wrapping label on a node") {
        Model m = two_node_chain();
        m.nodes[0].labels.insert("$T");
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("node label on a wrapping") {
        Model m = two_node_chain();
        m.nodes[1].labels = {"?x"};
        m.attrs.clear();
        m.wrappings.push_back(Wrapping{"W", {"@b9"}, {}, {1}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("unreachable anonymous node") {
        Model m = two_node_chain();
        m.attrs.clear();
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("reachability does not cross into a wrapping") {
        // the anonymous node is wrapped; the only path to it comes from the
        // complement, which does not count
        Model m = two_node_chain();
        m.wrappings.push_back(Wrapping{"W", {"$T"}, {}, {1}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("attribute edges may not leave a wrapping") {
        Model m = two_node_chain();
        m.nodes[1].labels = {"?x"};
        m.wrappings.push_back(Wrapping{"W", {"$T"}, {}, {0}});
        CHECK_FALSE(m.validate().empty());
    }
    SUBCASE("attribute edges may point into a wrapping") {
        Model m = two_node_chain();
        m.nodes[1].labels = {"?x"};
        m.wrappings.push_back(Wrapping{"W", {"$T"}, {}, {1}});
        CHECK(m.validate().empty());
    }
    SUBCASE("attribute edges may target the wrapping entity itself") {
        Model m = two_node_chain();
        m.nodes[1].labels = {"?x"};
        m.wrappings.push_back(Wrapping{"W", {"$T"}, {}, {1}});
        m.attrs[{0, "SIZE"}] = wrap_entity(0);
        CHECK(m.validate().empty());
    }
}

TEST_CASE("json serialization restores the model exactly") {
    for (const char* name : {"walker.json", "mary_walks_fast.json",
                             "disjunctive_paths_loop.json",
                             "stroking_every_over_a.json",
                             "donkey_complex.json"}) {
        CAPTURE(name);
        Model m = load_fixture(name);
        auto doc = model_to_json(m);
        Model back = model_from_json(doc);
        CHECK(model_to_json(back) == doc);
        CHECK(is_isomorphic(m, back));
    }
}

TEST_CASE("json emission is deterministic") {
    Model m = load_fixture("donkey_complex.json");
    CHECK(model_to_json(m).dump(2) == model_to_json(m).dump(2));
    CHECK(model_to_json(m).dump(2) ==
          model_to_json(load_fixture("donkey_complex.json")).dump(2));
}

TEST_CASE("json schema violations are reported") {
    CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), SchemaError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), SchemaError);
    CHECK_THROWS_AS(
        model_from_json(nlohmann::json::parse(
            R"({"nodes":[{"id":0},{"id":0}]})")),
        SchemaError);
    CHECK_THROWS_AS(
        model_from_json(nlohmann::json::parse(
            R"({"nodes":[{"id":0}],"attrs":[{"from":0,"attr":"P","to":{"wrap":"nope"}}]})")),
        SchemaError);
    CHECK_THROWS_AS(
        model_from_json(nlohmann::json::parse(
            R"({"nodes":[{"id":0}],"attrs":[{"from":0,"attr":"P","to":0},{"from":0,"attr":"P","to":0}]})")),
        SchemaError);
    CHECK_THROWS_AS(load_model("/nonexistent/path.json"), SchemaError);
}

TEST_CASE("dot output clusters wrappings") {
    Model m = load_fixture("disjunctive_paths_loop.json");
    std::string dot = to_dot(m);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("subgraph cluster") != std::string::npos);
    CHECK(dot.find("$T3") != std::string::npos);
    CHECK(dot.find("P") != std::string::npos);

    std::string plain = to_dot(load_fixture("walker.json"));
    CHECK(plain.find("subgraph cluster") == std::string::npos);
    CHECK(plain.find("AGENT") != std::string::npos);
}

TEST_CASE("juxtaposition is a disjoint union") {
    Model a = load_fixture("walker.json");
    Model b = load_fixture("disjunctive_paths_loop.json");
    Model j = juxtapose({a, b});
    CHECK(j.validate().empty());
    CHECK(j.nodes.size() == a.nodes.size() + b.nodes.size());
    CHECK(j.attrs.size() == a.attrs.size() + b.attrs.size());
    CHECK(j.wrappings.size() == b.wrappings.size());
    CHECK(subsumes(a, j));
    CHECK(subsumes(b, j));
}

TEST_CASE("juxtaposition rejects a shared label") {
    Model a = load_fixture("walker.json");
    CHECK_THROWS_AS((void)juxtapose({a, a}), std::invalid_argument);
}

TEST_CASE("fresh node ids do not collide") {
    Model m = two_node_chain();
    CHECK(m.fresh_node_id() == 2);
    m.nodes[7] = NodeInfo{};
    CHECK(m.fresh_node_id() == 8);
}

}  // TEST_SUITE
