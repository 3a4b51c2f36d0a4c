#include "wrapframe/minmodel.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "wrapframe/morphism.hpp"

namespace wrapframe {

int c0_bound(const Cnf& cnf) { return cnf.label_count + cnf.attr_weight; }

FactSet deduce(FactSet facts, int budget) {
    facts.set_budget(budget);
    facts.close();
    return facts;
}

std::vector<FactSet> saturate(const Cnf& cnf) {
    const int budget = c0_bound(cnf);
    constexpr size_t kStepLimit = 200000;

    std::vector<FactSet> work;
    std::set<std::string> seen;
    std::map<std::string, FactSet> done;  // canonical key -> saturated set

    FactSet start;
    start.set_budget(budget);
    seen.insert(start.canonical_key());
    work.push_back(std::move(start));

    size_t steps = 0;
    while (!work.empty()) {
        if (++steps > kStepLimit)
            throw std::runtime_error("saturation exceeded its step limit");
        FactSet u = std::move(work.back());
        work.pop_back();

        const Clause* firing = nullptr;
        for (const auto& clause : cnf.clauses) {
            bool premises_hold =
                std::all_of(clause.premises.begin(), clause.premises.end(),
                            [&](const Atom& a) { return u.contains(a); });
            if (!premises_hold) continue;
            bool settled =
                std::any_of(clause.conclusions.begin(),
                            clause.conclusions.end(),
                            [&](const Atom& a) { return u.contains(a); });
            if (settled) continue;
            firing = &clause;
            break;
        }
        if (!firing) {
            done.emplace(u.canonical_key(), std::move(u));
            continue;
        }
        // an integrity constraint fired: the branch is inconsistent
        if (firing->conclusions.empty()) continue;
        for (const Atom& choice : firing->conclusions) {
            FactSet v = u;
            v.assert_atom(choice);
            if (v.contradictory()) continue;
            if (seen.insert(v.canonical_key()).second)
                work.push_back(std::move(v));
        }
    }

    std::vector<FactSet> out;
    out.reserve(done.size());
    for (auto& [key, fs] : done) {
        (void)key;
        out.push_back(std::move(fs));
    }
    return out;
}

std::vector<FactSet> antichain_reduce(std::vector<FactSet> sets) {
    std::map<std::string, FactSet> uniq;
    for (auto& s : sets) uniq.emplace(s.canonical_key(), std::move(s));

    std::vector<FactSet> candidates;
    candidates.reserve(uniq.size());
    for (auto& [key, fs] : uniq) {
        (void)key;
        candidates.push_back(std::move(fs));
    }
    std::vector<bool> keep(candidates.size(), true);
    for (size_t i = 0; i < candidates.size(); ++i)
        for (size_t j = 0; j < candidates.size(); ++j)
            if (j != i && candidates[j].subset_of(candidates[i])) {
                keep[i] = false;  // strict: keys are pairwise distinct
                break;
            }
    std::vector<FactSet> out;
    for (size_t i = 0; i < candidates.size(); ++i)
        if (keep[i]) out.push_back(std::move(candidates[i]));
    return out;
}

Construction model_from_factset(const FactSet& fs) {
    auto built = fs.build_model();
    return {std::move(built.model), std::move(built.error)};
}

std::vector<Model> minimal_model_set(const Formula& f) {
    std::vector<Model> models;
    for (const FactSet& fs : antichain_reduce(saturate(to_cnf(f)))) {
        auto built = model_from_factset(fs);
        // a branch that admits no least model contributes nothing
        if (built.model) models.push_back(std::move(*built.model));
    }
    // defensive minimality pass at the model level
    std::vector<bool> keep(models.size(), true);
    for (size_t i = 0; i < models.size(); ++i)
        for (size_t j = 0; j < models.size(); ++j) {
            if (j == i || !subsumes(models[j], models[i])) continue;
            if (!subsumes(models[i], models[j])) {
                keep[i] = false;  // strictly more specific than models[j]
                break;
            }
            if (j < i) {
                keep[i] = false;  // isomorphic duplicate
                break;
            }
        }
    std::vector<Model> out;
    for (size_t i = 0; i < models.size(); ++i)
        if (keep[i]) out.push_back(std::move(models[i]));
    return out;
}

}  // namespace wrapframe
