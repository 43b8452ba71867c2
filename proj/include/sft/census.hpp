#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sft/core.hpp"
#include "sft/criteria.hpp"
#include "sft/fingerprint.hpp"
#include "sft/pattern.hpp"
#include "sft/subgroups.hpp"

namespace sft {

inline int default_jobs() {
    if (const char* env = std::getenv("SFT_JOBS")) {
        int j = std::atoi(env);
        if (j >= 1) return j;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs f(i) for i in [0, count) on `jobs` worker threads. Results must be
/// written to preallocated slots; aggregation stays deterministic because it
/// happens index-by-index afterwards.
template <typename F>
void parallel_for(size_t count, int jobs, F&& f) {
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// All minimal pattern groups of the given depth over the binary alphabet:
/// enumerate the subgroups of Aut X^[d], minimize each, deduplicate.
/// Depth 4 is out of enumeration scope (32768 elements); use the catalog.
inline std::vector<PatternGroup> enumerate_minimal(int d, size_t* subgroup_count = nullptr) {
    require(d >= 1, ErrorKind::Domain, "depth must be >= 1");
    require(d <= 3, ErrorKind::Resource,
            "full subgroup enumeration of Aut X^[4] (order 32768) is out of scope; "
            "use the depth-4 catalog (catalog subcommand) or supply explicit pattern files");
    PatternGroup full = PatternGroup::full(2, d);
    auto subs = all_subgroups(full.leaf_group());
    if (subgroup_count) *subgroup_count = subs.size();
    std::map<std::string, PatternGroup> dedup;
    for (const auto& h : subs) {
        std::vector<TreeAutomorphism> els;
        for (const auto& p : h.elements())
            els.push_back(TreeAutomorphism::from_leaf_permutation(p, 2, d));
        PatternGroup minimized = PatternGroup::from_elements(2, d, std::move(els)).minimize();
        dedup.try_emplace(minimized.canonical_key(), std::move(minimized));
    }
    std::vector<PatternGroup> out;
    out.reserve(dedup.size());
    for (auto& [key, g] : dedup) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(), [](const PatternGroup& a, const PatternGroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.elements() < b.elements();
    });
    return out;
}

struct CensusReport {
    int alphabet = 2;
    int depth = 0;
    int max_n = 0;
    size_t subgroup_count = 0;
    size_t minimal_count = 0;
    size_t finite_count = 0;                        // includes the trivial group
    std::map<std::string, size_t> finite_types;     // certified isomorphism names
    size_t not_fg_count = 0;
    std::map<int, size_t> not_fg_levels;
    size_t fg_count = 0;
    std::map<int, size_t> fg_levels;
    size_t undecided_count = 0;
    std::vector<ClassificationRecord> groups;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["alphabet"] = alphabet;
        j["depth"] = depth;
        j["max_n"] = max_n;
        j["subgroup_count"] = subgroup_count;
        j["minimal_count"] = minimal_count;
        auto levels_json = [](const std::map<int, size_t>& m) {
            nlohmann::json out = nlohmann::json::object();
            for (const auto& [lvl, c] : m) out[std::to_string(lvl)] = c;
            return out;
        };
        j["verdicts"]["finite"] = {{"count", finite_count}, {"types", finite_types}};
        j["verdicts"]["not_finitely_generated"] = {{"count", not_fg_count},
                                                   {"witness_levels", levels_json(not_fg_levels)}};
        j["verdicts"]["finitely_generated"] = {{"count", fg_count},
                                               {"witness_levels", levels_json(fg_levels)}};
        j["verdicts"]["undecided"] = {{"count", undecided_count}};
        j["groups"] = nlohmann::json::array();
        for (const auto& r : groups) j["groups"].push_back(r.to_json());
        return j;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "index,pattern_order,stabilizer_order,verdict,witness_level,type,hausdorff\n";
        for (size_t i = 0; i < groups.size(); ++i) {
            const auto& r = groups[i];
            os << i << ',' << r.pattern_order.str() << ',' << r.stabilizer_order.str() << ','
               << to_string(r.verdict) << ',';
            if (r.witness_level) os << *r.witness_level;
            os << ',';
            if (r.finite_type) os << *r.finite_type;
            os << ',';
            if (r.hausdorff) os << r.hausdorff->to_string();
            os << '\n';
        }
        return os.str();
    }
};

/// Classifies every minimal pattern group of the given depth and aggregates
/// the verdict histogram (the trivial group counts as finite of order 1).
inline CensusReport census(int d, int max_n, int jobs = 1) {
    CensusReport rep;
    rep.depth = d;
    rep.max_n = max_n;
    auto minimal = enumerate_minimal(d, &rep.subgroup_count);
    rep.minimal_count = minimal.size();
    rep.groups.resize(minimal.size());
    parallel_for(minimal.size(), jobs,
                 [&](size_t i) { rep.groups[i] = classify(minimal[i], max_n); });
    for (const auto& r : rep.groups) {
        switch (r.verdict) {
            case VerdictTag::Trivial:
            case VerdictTag::Finite:
                ++rep.finite_count;
                ++rep.finite_types[r.finite_type ? *r.finite_type
                                                 : "fp:" + r.fingerprint->key()];
                break;
            case VerdictTag::NotFG:
                ++rep.not_fg_count;
                ++rep.not_fg_levels[*r.witness_level];
                break;
            case VerdictTag::FG:
                ++rep.fg_count;
                ++rep.fg_levels[*r.witness_level];
                break;
            case VerdictTag::Undecided:
                ++rep.undecided_count;
                break;
        }
    }
    return rep;
}

} // namespace sft
