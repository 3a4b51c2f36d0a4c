// wrapframe: command-line front end for the library.  Builds minimal model
// sets from attribute-value formulas, unifies lexical models under
// derivation equations, resolves scope underspecification, transcribes
// readings to first-order formulas and checks them on instance frames.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wrapframe/avl.hpp"
#include "wrapframe/fol.hpp"
#include "wrapframe/json_io.hpp"
#include "wrapframe/minmodel.hpp"
#include "wrapframe/model.hpp"
#include "wrapframe/morphism.hpp"
#include "wrapframe/randmodel.hpp"
#include "wrapframe/scope.hpp"

namespace fs = std::filesystem;
using namespace wrapframe;

namespace {

// Exit codes: 0 success / true, 1 false / no model, 2 bad usage or input,
// 3 internal invariant breach.
constexpr int kOk = 0;
constexpr int kNoModel = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

bool use_color() {
    const char* c = std::getenv("WRAPFRAME_COLOR");
    if (!c) return false;
    std::string v = c;
    return !v.empty() && v != "0" && v != "off" && v != "never";
}

void diag(const std::string& msg) {
    if (use_color())
        std::cerr << "\033[1;31merror:\033[0m " << msg << "\n";
    else
        std::cerr << "error: " << msg << "\n";
}

void note(const std::string& msg) {
    if (use_color())
        std::cerr << "\033[1;33mnote:\033[0m " << msg << "\n";
    else
        std::cerr << "note: " << msg << "\n";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParsedFormula load_avl(const std::string& path) {
    try {
        return parse_source(slurp(path));
    } catch (const ParseError& e) {
        throw std::invalid_argument(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << text;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

Formula parse_equation(const std::string& text, const std::string& where) {
    Formula f;
    try {
        f = parse_formula(text);
    } catch (const ParseError& e) {
        throw std::invalid_argument(where + ": " + e.what());
    }
    if (f.kind != Formula::Kind::path_eq)
        throw std::invalid_argument(where + ": '" + text +
                                    "' is not a path equation");
    return f;
}

// ------------------------------------------------------------- derivation

// Text format, one `key = value` per line ('#' starts a comment):
//   entry    path of a lexicon formula (.avl), relative to this file
//   eq       derivation equation, e.g.  ?y2 == ?x2
//   top      label of the hole expected to stay on top (optional)
//   instance path of an instance model to check readings on (optional)
struct DerivationSpec {
    std::vector<std::pair<std::string, std::string>> entries;  // name, path
    std::vector<Formula> equations;
    std::string instance;
    std::string top_label;
};

DerivationSpec parse_derivation(const std::string& path) {
    DerivationSpec spec;
    std::istringstream in(slurp(path));
    fs::path base = fs::path(path).parent_path();
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string where = path + ":" + std::to_string(lineno);
        auto sep = line.find('=');
        if (sep == std::string::npos)
            throw std::invalid_argument(where + ": expected key = value");
        std::string key = trim(line.substr(0, sep));
        std::string value = trim(line.substr(sep + 1));
        if (value.empty())
            throw std::invalid_argument(where + ": empty value for '" + key +
                                        "'");
        if (key == "entry") {
            std::string name = fs::path(value).stem().string();
            spec.entries.emplace_back(name, (base / value).string());
        } else if (key == "eq") {
            spec.equations.push_back(parse_equation(value, where));
        } else if (key == "instance") {
            spec.instance = (base / value).string();
        } else if (key == "top") {
            spec.top_label = value;
        } else {
            throw std::invalid_argument(where + ": unknown key '" + key +
                                        "'");
        }
    }
    if (spec.entries.empty())
        throw std::invalid_argument(path + ": no lexicon entries");
    return spec;
}

// The fragment carrying the announced top label must be undominated.
void verify_top(const Model& m, const ConstraintSet& cs,
                const std::string& label) {
    auto all = fragments(m, cs);
    auto free = free_fragments(m, cs);
    auto carries = [&](const Fragment& f) {
        if (f.root.is_node()) {
            for (int v : f.nodes)
                if (m.nodes.at(v).labels.count(label)) return true;
            return false;
        }
        return m.wrappings[f.root.id].labels.count(label) != 0;
    };
    for (const auto& f : all)
        if (carries(f)) {
            for (const auto& g : free)
                if (g.name == f.name) return;
            throw std::invalid_argument("top hole '" + label +
                                        "' is dominated in the complex");
        }
    throw std::invalid_argument("top hole '" + label +
                                "' does not occur in the complex");
}

// ------------------------------------------------------------ subcommands

struct MinmodelArgs {
    std::string file;
    std::string emit = "json";
    std::string out;
};

int cmd_minmodel(const MinmodelArgs& a) {
    ParsedFormula pf = load_avl(a.file);
    if (pf.signature.all_labels().empty())
        throw std::invalid_argument(
            a.file +
            ": no labelled content (a frame needs at least one node, and "
            "nodes come from labels)");
    auto mms = minimal_model_set(pf.formula);
    if (mms.empty()) {
        diag("formula has no minimal models (unsatisfiable)");
        return kNoModel;
    }
    std::string stem = fs::path(a.file).stem().string();
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        for (std::size_t i = 0; i < mms.size(); ++i) {
            std::string base =
                (fs::path(a.out) / (stem + "-" + std::to_string(i))).string();
            save_model(mms[i], base + ".json");
            write_file(base + ".dot", to_dot(mms[i]));
        }
        std::cout << "wrote " << mms.size() << " model(s) to " << a.out
                  << "\n";
    } else if (a.emit == "dot") {
        for (const auto& m : mms) std::cout << to_dot(m);
    } else if (a.emit == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& m : mms) arr.push_back(model_to_json(m));
        std::cout << arr.dump(2) << "\n";
    } else {
        throw std::invalid_argument("minmodel supports --emit json|dot");
    }
    return kOk;
}

struct PipelineArgs {
    std::string spec;
    std::string emit = "text";
    std::string instance;
    int max_readings = 0;
};

int cmd_pipeline(const PipelineArgs& a) {
    DerivationSpec spec = parse_derivation(a.spec);

    std::vector<ParsedFormula> entries;
    std::set<std::string> seen;
    for (const auto& [name, path] : spec.entries) {
        ParsedFormula pf = load_avl(path);
        for (const auto& l : pf.signature.all_labels())
            if (!seen.insert(l).second)
                throw std::invalid_argument("lexicon entries share label '" +
                                            l + "'");
        if (minimal_model_set(pf.formula).empty())
            note("entry '" + name +
                 "' has no standalone minimal model (its interface "
                 "wrappings are filled at composition)");
        entries.push_back(std::move(pf));
    }
    for (const auto& eq : spec.equations)
        for (const auto& l : signature_of(eq).all_labels())
            if (!seen.count(l))
                throw std::invalid_argument(
                    "derivation equation mentions unknown label '" + l + "'");

    std::vector<Formula> parts;
    for (const auto& pf : entries) parts.push_back(pf.formula);
    for (const auto& eq : spec.equations) parts.push_back(eq);
    Formula sentence = parts.size() == 1 ? parts.front() : fand(parts);

    auto combos = minimal_model_set(sentence);
    if (combos.empty()) {
        diag("no models survive unification");
        return kNoModel;
    }

    std::string instance_path =
        a.instance.empty() ? spec.instance : a.instance;
    std::optional<Model> instance;
    if (!instance_path.empty()) instance = load_model(instance_path);

    ConstraintSet cs = default_constraints();
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    int total = 0;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        auto constrained = apply_constraints(combos[i], cs);
        if (!constrained) {
            std::cout << "combination " << i << ": pruned by constraints\n";
            continue;
        }
        if (!spec.top_label.empty())
            verify_top(*constrained, cs, spec.top_label);
        auto readings = solve(*constrained, cs, a.max_readings);
        if (readings.empty()) {
            std::cout << "combination " << i << ": no readings\n";
            continue;
        }
        for (std::size_t j = 0; j < readings.size(); ++j) {
            ++total;
            const Reading& r = readings[j];
            std::string order;
            for (const auto& c : r.choices)
                order += (order.empty() ? "" : " > ") + c;
            std::string gqt, folt, err;
            try {
                gqt = to_gqt(r, cs);
                folt = to_string(transcribe(r, cs));
            } catch (const std::runtime_error& e) {
                err = e.what();
            }
            if (a.emit == "json") {
                nlohmann::ordered_json rec;
                rec["combination"] = i;
                rec["reading"] = j;
                rec["order"] = order;
                if (err.empty()) {
                    rec["gqt"] = gqt;
                    rec["fol"] = folt;
                } else {
                    rec["error"] = err;
                }
                rec["model"] = model_to_json(r.model);
                if (instance && err.empty())
                    rec["instance"] =
                        check_instance(transcribe(r, cs), *instance);
                out.push_back(std::move(rec));
                continue;
            }
            std::cout << "combination " << i << " reading " << j << ": "
                      << order << "\n";
            if (a.emit == "dot") {
                std::cout << to_dot(r.model);
                continue;
            }
            if (!err.empty()) {
                std::cout << "  transcription failed: " << err << "\n";
                continue;
            }
            if (a.emit == "text" || a.emit == "gqt")
                std::cout << "  gqt: " << gqt << "\n";
            if (a.emit == "text" || a.emit == "fol")
                std::cout << "  fol: " << folt << "\n";
            if (a.emit == "smt")
                std::cout << to_smtlib({transcribe(r, cs)});
            if (instance)
                std::cout << "  instance " << instance_path << ": "
                          << (check_instance(transcribe(r, cs), *instance)
                                  ? "true"
                                  : "false")
                          << "\n";
        }
    }
    if (a.emit == "json") std::cout << out.dump(2) << "\n";
    return total > 0 ? kOk : kNoModel;
}

struct UnifyArgs {
    std::vector<std::string> files;
    std::vector<std::string> eqs;
    std::string emit = "json";
};

int cmd_unify(const UnifyArgs& a) {
    std::vector<Model> models;
    for (const auto& f : a.files) models.push_back(load_model(f));
    std::vector<Formula> eqs;
    for (const auto& e : a.eqs) eqs.push_back(parse_equation(e, "--eq"));
    UnifyResult res = unify(models, eqs);
    if (!res.model) {
        diag("models do not unify: " + res.reason);
        return kNoModel;
    }
    if (a.emit == "dot")
        std::cout << to_dot(*res.model);
    else
        std::cout << model_to_json(*res.model).dump(2) << "\n";
    return kOk;
}

int cmd_subsumes(const std::string& general, const std::string& specific) {
    bool ok = subsumes(load_model(general), load_model(specific));
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? kOk : kNoModel;
}

int cmd_iso(const std::string& a, const std::string& b) {
    bool ok = is_isomorphic(load_model(a), load_model(b));
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? kOk : kNoModel;
}

struct SolveArgs {
    std::string file;
    std::string emit = "text";
    int max_readings = 0;
};

std::vector<Reading> solved_readings(const SolveArgs& a,
                                     const ConstraintSet& cs) {
    Model complex = load_model(a.file);
    auto constrained = apply_constraints(complex, cs);
    if (!constrained)
        throw std::runtime_error("complex violates the scope constraints");
    return solve(*constrained, cs, a.max_readings);
}

int cmd_solve(const SolveArgs& a) {
    ConstraintSet cs = default_constraints();
    auto readings = solved_readings(a, cs);
    if (a.emit == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : readings) {
            nlohmann::ordered_json rec;
            std::string order;
            for (const auto& c : r.choices)
                order += (order.empty() ? "" : " > ") + c;
            rec["order"] = order;
            rec["model"] = model_to_json(r.model);
            arr.push_back(std::move(rec));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << readings.size() << " reading(s)\n";
        for (std::size_t j = 0; j < readings.size(); ++j) {
            std::string order;
            for (const auto& c : readings[j].choices)
                order += (order.empty() ? "" : " > ") + c;
            std::cout << "reading " << j << ": " << order << "\n";
            if (a.emit == "dot") std::cout << to_dot(readings[j].model);
            if (a.emit == "gqt")
                std::cout << "  gqt: " << to_gqt(readings[j], cs) << "\n";
            if (a.emit == "fol")
                std::cout << "  fol: " << to_string(transcribe(readings[j], cs))
                          << "\n";
        }
    }
    return readings.empty() ? kNoModel : kOk;
}

int cmd_transcribe(const SolveArgs& a) {
    ConstraintSet cs = default_constraints();
    auto readings = solved_readings(a, cs);
    std::vector<FolPtr> formulas;
    for (const auto& r : readings) formulas.push_back(transcribe(r, cs));
    if (a.emit == "smt") {
        std::cout << to_smtlib(formulas);
    } else {
        for (std::size_t j = 0; j < readings.size(); ++j) {
            if (a.emit == "gqt")
                std::cout << to_gqt(readings[j], cs) << "\n";
            else
                std::cout << to_string(formulas[j]) << "\n";
        }
    }
    return readings.empty() ? kNoModel : kOk;
}

int cmd_check(const std::string& formula_file, const std::string& model_file) {
    ParsedFormula pf = load_avl(formula_file);
    Model m = load_model(model_file);
    bool ok = satisfies(m, pf.formula);
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? kOk : kNoModel;
}

int cmd_dot(const std::string& file) {
    std::cout << to_dot(load_model(file));
    return kOk;
}

struct FolArgs {
    std::string file;
    std::string emit = "fol";
    bool theory = false;
};

int cmd_fol(const FolArgs& a) {
    ParsedFormula pf = load_avl(a.file);
    std::vector<FolPtr> formulas;
    if (a.theory)
        for (const auto& ax : theory_axioms(pf.signature))
            formulas.push_back(ax);
    formulas.push_back(translate_formula(pf.formula));
    if (a.emit == "smt") {
        std::cout << to_smtlib(formulas);
    } else if (a.emit == "fol") {
        for (const auto& f : formulas) std::cout << to_string(f) << "\n";
    } else {
        throw std::invalid_argument("fol supports --emit fol|smt");
    }
    return kOk;
}

struct CorpusArgs {
    std::string dir;
    int count = 100;
    unsigned seed = 0;
};

int cmd_seed_corpus(const CorpusArgs& a) {
    fs::create_directories(a.dir);
    std::mt19937 rng(a.seed);
    for (int i = 0; i < a.count; ++i) {
        Model m = random_model(rng);
        std::ostringstream name;
        name << "model-" << std::setw(4) << std::setfill('0') << i << ".json";
        save_model(m, (fs::path(a.dir) / name.str()).string());
    }
    std::cout << "wrote " << a.count << " models to " << a.dir << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "wrapframe: feature structures with wrappings — minimal models, "
        "unification, scope resolution, transcription"};
    app.require_subcommand(0, 1);

    CorpusArgs corpus;
    auto* corpus_opt = app.add_option(
        "--seed-corpus", corpus.dir,
        "write a corpus of random valid models into this directory");
    app.add_option("--count", corpus.count, "corpus size (default 100)");
    app.add_option("--seed", corpus.seed, "corpus random seed (default 0)");

    MinmodelArgs mm;
    auto* c_mm = app.add_subcommand(
        "minmodel", "canonical minimal model set of a formula file");
    c_mm->add_option("file", mm.file, "formula file (.avl)")->required();
    c_mm->add_option("--emit", mm.emit, "json|dot (default json)");
    c_mm->add_option("--out", mm.out, "write one .json + .dot per model");

    PipelineArgs pl;
    auto* c_pl = app.add_subcommand(
        "pipeline",
        "compose lexicon entries under derivation equations, then solve, "
        "transcribe and check");
    c_pl->add_option("spec", pl.spec, "derivation spec file")->required();
    c_pl->add_option("--emit", pl.emit, "text|gqt|fol|smt|json|dot");
    c_pl->add_option("--instance", pl.instance,
                     "instance model to check readings on");
    c_pl->add_option("--max-readings", pl.max_readings,
                     "stop after this many readings per combination");

    UnifyArgs un;
    auto* c_un = app.add_subcommand("unify",
                                    "unify models under path equations");
    c_un->add_option("files", un.files, "model files (.json)")
        ->required()
        ->expected(-2);
    c_un->add_option("--eq", un.eqs, "path equation, e.g. '@k0 == @b0'");
    c_un->add_option("--emit", un.emit, "json|dot (default json)");

    std::string sub_a, sub_b;
    auto* c_sub = app.add_subcommand(
        "subsumes", "does the first model subsume the second?");
    c_sub->add_option("general", sub_a, "model file")->required();
    c_sub->add_option("specific", sub_b, "model file")->required();

    std::string iso_a, iso_b;
    auto* c_iso = app.add_subcommand("iso", "are the two models isomorphic?");
    c_iso->add_option("a", iso_a, "model file")->required();
    c_iso->add_option("b", iso_b, "model file")->required();

    SolveArgs sv;
    auto* c_sv = app.add_subcommand(
        "solve", "enumerate the readings of a quantifier complex");
    c_sv->add_option("file", sv.file, "complex model file (.json)")
        ->required();
    c_sv->add_option("--emit", sv.emit, "text|json|dot|gqt|fol");
    c_sv->add_option("--max-readings", sv.max_readings,
                     "stop after this many readings");

    SolveArgs tr;
    auto* c_tr = app.add_subcommand(
        "transcribe", "solve a complex and print one formula per reading");
    c_tr->add_option("file", tr.file, "complex model file (.json)")
        ->required();
    c_tr->add_option("--emit", tr.emit, "fol|gqt|smt (default fol)");
    c_tr->add_option("--max-readings", tr.max_readings,
                     "stop after this many readings");
    tr.emit = "fol";

    std::string chk_formula, chk_model;
    auto* c_chk = app.add_subcommand(
        "check", "does a model satisfy a formula file?");
    c_chk->add_option("formula", chk_formula, "formula file (.avl)")
        ->required();
    c_chk->add_option("model", chk_model, "model file (.json)")->required();

    std::string dot_file;
    auto* c_dot = app.add_subcommand("dot", "render a model as graphviz DOT");
    c_dot->add_option("file", dot_file, "model file (.json)")->required();

    FolArgs fo;
    auto* c_fo = app.add_subcommand(
        "fol", "translate a formula file to first-order logic");
    c_fo->add_option("file", fo.file, "formula file (.avl)")->required();
    c_fo->add_option("--emit", fo.emit, "fol|smt (default fol)");
    c_fo->add_flag("--theory", fo.theory,
                   "prepend the frame theory axioms for the signature");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*c_mm) return cmd_minmodel(mm);
        if (*c_pl) return cmd_pipeline(pl);
        if (*c_un) return cmd_unify(un);
        if (*c_sub) return cmd_subsumes(sub_a, sub_b);
        if (*c_iso) return cmd_iso(iso_a, iso_b);
        if (*c_sv) return cmd_solve(sv);
        if (*c_tr) return cmd_transcribe(tr);
        if (*c_chk) return cmd_check(chk_formula, chk_model);
        if (*c_dot) return cmd_dot(dot_file);
        if (*c_fo) return cmd_fol(fo);
        if (*corpus_opt) return cmd_seed_corpus(corpus);
        std::cerr << app.help();
        return kUsage;
    } catch (const ParseError& e) {
        diag(e.what());
        return kUsage;
    } catch (const SchemaError& e) {
        diag(e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        diag(e.what());
        return kUsage;
    } catch (const std::logic_error& e) {
        diag(std::string("internal invariant breach: ") + e.what());
        return kInternal;
    } catch (const std::runtime_error& e) {
        diag(e.what());
        return kNoModel;
    } catch (const std::exception& e) {
        diag(std::string("internal: ") + e.what());
        return kInternal;
    }
}
