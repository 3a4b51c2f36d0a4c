#include "wrapframe/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace wrapframe {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_fail(const std::string& what) {
    throw SchemaError("model schema: " + what);
}

Entity entity_from_json(const json& j, const std::map<std::string, int>& wraps,
                        const char* where) {
    if (j.is_number_integer()) return node_entity(j.get<int>());
    if (j.is_object() && j.contains("wrap") && j["wrap"].is_string()) {
        auto it = wraps.find(j["wrap"].get<std::string>());
        if (it == wraps.end())
            schema_fail(std::string(where) + " references unknown wrapping '" +
                        j["wrap"].get<std::string>() + "'");
        return wrap_entity(it->second);
    }
    schema_fail(std::string(where) +
                " must be a node id or {\"wrap\": name}");
}

ordered_json entity_to_json(const Model& m, const Entity& e) {
    if (e.is_node()) return e.id;
    return ordered_json{{"wrap", m.wrappings.at(e.id).name}};
}

}  // namespace

Model model_from_json(const json& doc) {
    if (!doc.is_object()) schema_fail("document is not an object");
    if (!doc.contains("nodes") || !doc["nodes"].is_array())
        schema_fail("missing \"nodes\" array");

    Model m;

    // wrappings first so attribute/relation targets can resolve them
    std::map<std::string, int> wrap_index;
    if (doc.contains("wrappings")) {
        if (!doc["wrappings"].is_array()) schema_fail("\"wrappings\" not an array");
        for (const auto& jw : doc["wrappings"]) {
            Wrapping w;
            if (!jw.contains("id") || !jw["id"].is_string())
                schema_fail("wrapping without string \"id\"");
            w.name = jw["id"].get<std::string>();
            for (const auto& l : jw.value("labels", json::array()))
                w.labels.insert(l.get<std::string>());
            for (const auto& t : jw.value("types", json::array()))
                w.types.insert(t.get<std::string>());
            for (const auto& n : jw.value("members", json::array()))
                w.members.insert(n.get<int>());
            if (!wrap_index.emplace(w.name, static_cast<int>(m.wrappings.size()))
                     .second)
                schema_fail("duplicate wrapping id '" + w.name + "'");
            m.wrappings.push_back(std::move(w));
        }
    }

    for (const auto& jn : doc["nodes"]) {
        if (!jn.contains("id") || !jn["id"].is_number_integer())
            schema_fail("node without integer \"id\"");
        int id = jn["id"].get<int>();
        if (m.nodes.count(id))
            schema_fail("duplicate node id " + std::to_string(id));
        NodeInfo info;
        for (const auto& l : jn.value("labels", json::array()))
            info.labels.insert(l.get<std::string>());
        for (const auto& t : jn.value("types", json::array()))
            info.types.insert(t.get<std::string>());
        m.nodes.emplace(id, std::move(info));
    }

    for (const auto& ja : doc.value("attrs", json::array())) {
        if (!ja.contains("from") || !ja.contains("attr") || !ja.contains("to"))
            schema_fail("attr entry needs \"from\", \"attr\", \"to\"");
        int from = ja["from"].get<int>();
        std::string attr = ja["attr"].get<std::string>();
        Entity to = entity_from_json(ja["to"], wrap_index, "attr \"to\"");
        if (!m.attrs.emplace(std::make_pair(from, attr), to).second)
            schema_fail("two '" + attr + "' edges leave node " +
                        std::to_string(from));
    }

    for (const auto& jr : doc.value("rels", json::array())) {
        if (!jr.contains("name") || !jr.contains("args"))
            schema_fail("rel entry needs \"name\" and \"args\"");
        Rel r;
        r.name = jr["name"].get<std::string>();
        for (const auto& ja : jr["args"])
            r.args.push_back(entity_from_json(ja, wrap_index, "rel arg"));
        m.rels.insert(std::move(r));
    }

    return m;
}

ordered_json model_to_json(const Model& m) {
    ordered_json doc;

    doc["nodes"] = ordered_json::array();
    for (const auto& [id, info] : m.nodes) {
        ordered_json jn;
        jn["id"] = id;
        jn["labels"] = info.labels;
        jn["types"] = info.types;
        doc["nodes"].push_back(std::move(jn));
    }

    doc["attrs"] = ordered_json::array();
    for (const auto& [key, tgt] : m.attrs) {
        ordered_json ja;
        ja["from"] = key.first;
        ja["attr"] = key.second;
        ja["to"] = entity_to_json(m, tgt);
        doc["attrs"].push_back(std::move(ja));
    }

    doc["rels"] = ordered_json::array();
    for (const auto& r : m.rels) {
        ordered_json jr;
        jr["name"] = r.name;
        jr["args"] = ordered_json::array();
        for (const auto& a : r.args) jr["args"].push_back(entity_to_json(m, a));
        doc["rels"].push_back(std::move(jr));
    }

    // stable order: by wrapping name
    std::vector<int> order(m.wrappings.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return m.wrappings[a].name < m.wrappings[b].name;
    });
    doc["wrappings"] = ordered_json::array();
    for (int w : order) {
        const auto& wr = m.wrappings[w];
        ordered_json jw;
        jw["id"] = wr.name;
        jw["labels"] = wr.labels;
        if (!wr.types.empty()) jw["types"] = wr.types;
        jw["members"] = wr.members;
        doc["wrappings"].push_back(std::move(jw));
    }

    return doc;
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "': " + e.what());
    }
    return model_from_json(doc);
}

void save_model(const Model& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write '" + path + "'");
    out << model_to_json(m).dump(2) << '\n';
}

// --------------------------------------------------------------------- dot

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string join(const std::set<std::string>& items, const char* sep) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

}  // namespace

std::string to_dot(const Model& m) {
    std::ostringstream out;
    out << "digraph model {\n";
    out << "  compound=true;\n  rankdir=LR;\n";
    out << "  node [shape=ellipse, fontsize=10];\n";

    auto node_line = [&](int id) {
        const auto& info = m.nodes.at(id);
        std::string text = join(info.labels, ",");
        if (!info.types.empty()) {
            if (!text.empty()) text += " : ";
            text += join(info.types, ",");
        }
        std::ostringstream line;
        line << "    n" << id << " [label=\"" << dot_escape(text) << "\"];\n";
        return line.str();
    };

    std::set<int> wrapped;
    for (int w = 0; w < static_cast<int>(m.wrappings.size()); ++w) {
        const auto& wr = m.wrappings[w];
        out << "  subgraph cluster_" << w << " {\n";
        std::string title = join(wr.labels, ",");
        if (!wr.types.empty())
            title += (title.empty() ? "" : " ") + (": " + join(wr.types, ","));
        out << "    label=\"" << dot_escape(title) << "\";\n";
        for (int n : wr.members) {
            out << node_line(n);
            wrapped.insert(n);
        }
        out << "  }\n";
    }
    for (const auto& [id, info] : m.nodes) {
        (void)info;
        if (!wrapped.count(id)) out << node_line(id).substr(2);
    }

    // an edge pointing at a wrapping is drawn to one member, clipped to the
    // cluster border via lhead
    auto draw_to = [&](std::ostringstream& line, const Entity& tgt) {
        if (tgt.is_node()) {
            line << "n" << tgt.id;
            return std::string();
        }
        const auto& wr = m.wrappings.at(tgt.id);
        line << "n" << *wr.members.begin();
        return ", lhead=cluster_" + std::to_string(tgt.id);
    };

    for (const auto& [key, tgt] : m.attrs) {
        std::ostringstream line;
        line << "  n" << key.first << " -> ";
        std::string lhead = draw_to(line, tgt);
        line << " [label=\"" << dot_escape(key.second) << "\"" << lhead
             << "];\n";
        out << line.str();
    }

    int rel_no = 0;
    for (const auto& r : m.rels) {
        if (r.args.size() == 2) {
            std::ostringstream line;
            line << "  ";
            if (r.args[0].is_node())
                line << "n" << r.args[0].id;
            else
                line << "n" << *m.wrappings.at(r.args[0].id).members.begin();
            line << " -> ";
            std::string lhead = draw_to(line, r.args[1]);
            std::string ltail;
            if (r.args[0].is_wrapping())
                ltail = ", ltail=cluster_" + std::to_string(r.args[0].id);
            line << " [style=dashed, label=\"" << dot_escape(r.name) << "\""
                 << lhead << ltail << "];\n";
            out << line.str();
        } else {
            // m-ary relation: a small junction point with numbered arms
            std::string hub = "rel" + std::to_string(rel_no++);
            out << "  " << hub << " [shape=point, xlabel=\""
                << dot_escape(r.name) << "\"];\n";
            for (size_t i = 0; i < r.args.size(); ++i) {
                std::ostringstream line;
                line << "  " << hub << " -> ";
                std::string lhead = draw_to(line, r.args[i]);
                line << " [style=dashed, label=\"" << i << "\"" << lhead
                     << "];\n";
                out << line.str();
            }
        }
    }

    out << "}\n";
    return out.str();
}

}  // namespace wrapframe
