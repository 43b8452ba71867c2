#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sft/census.hpp"
#include "sft/criteria.hpp"
#include "sft/pattern.hpp"

namespace sft {

/// The depth-4 catalog over the binary alphabet: ten permutations of the 16
/// leaves and the 32 pattern groups P_ijk = <a_i, b_j, c_k> they generate.
class Depth4Catalog {
public:
    static const std::array<std::string, 4>& a_cycles() {
        static const std::array<std::string, 4> v = {
            "(1,9)(2,10)(3,11)(4,12)(5,13)(6,14)(7,15)(8,16)",
            "(1,10,2,9)(3,11)(4,12)(5,14,6,13)(7,15)(8,16)",
            "(1,10)(2,9)(3,11)(4,12)(5,13)(6,14)(7,15)(8,16)",
            "(1,9,2,10)(3,11)(4,12)(5,14,6,13)(7,15)(8,16)",
        };
        return v;
    }
    static const std::array<std::string, 2>& b_cycles() {
        static const std::array<std::string, 2> v = {
            "(1,5)(2,6)(3,7)(4,8)(9,10)",
            "(1,6)(2,5)(3,7)(4,8)(9,10)",
        };
        return v;
    }
    static const std::array<std::string, 4>& c_cycles() {
        static const std::array<std::string, 4> v = {
            "(1,3)(2,4)",
            "(1,4,2,3)",
            "(1,3)(2,4)(5,6)",
            "(1,4,2,3)(5,6)",
        };
        return v;
    }

    /// Generator cycle strings of P_ijk (1-based indices, i in 1..4, j in 1..2,
    /// k in 1..4).
    static std::array<std::string, 3> generator_cycles(int i, int j, int k) {
        require(i >= 1 && i <= 4 && j >= 1 && j <= 2 && k >= 1 && k <= 4, ErrorKind::Domain,
                "catalog indices are i in 1..4, j in 1..2, k in 1..4");
        return {a_cycles()[static_cast<size_t>(i - 1)], b_cycles()[static_cast<size_t>(j - 1)],
                c_cycles()[static_cast<size_t>(k - 1)]};
    }

    static std::vector<std::array<int, 3>> all_triples() {
        std::vector<std::array<int, 3>> out;
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 2; ++j)
                for (int k = 1; k <= 4; ++k) out.push_back({i, j, k});
        return out;
    }

    /// Builds P_ijk from the transcribed cycle data. The stored permutations
    /// must parse back to exactly the printed cycle structure.
    static PatternGroup group(int i, int j, int k, LeafNumbering numbering = LeafNumbering::Lex) {
        std::vector<TreeAutomorphism> gens;
        for (const auto& s : generator_cycles(i, j, k)) {
            Permutation p = Permutation::parse_cycles(s, 16);
            require(p.to_cycle_string() == s, ErrorKind::Internal,
                    "catalog cycle transcription is not canonical: " + s);
            gens.push_back(TreeAutomorphism::from_leaf_permutation(p, 2, 4, numbering));
        }
        return PatternGroup::from_generators(2, 4, gens);
    }
};

struct CatalogGroupReport {
    int i = 0, j = 0, k = 0;
    BigInt order = 0;
    bool minimal = false;
    bool restriction_is_full_aut3 = false;
    bool infinite = false;
    bool level_transitive = false;
    std::optional<int> fg_witness_level; // expected 6
    std::vector<int> no_certificate_at;  // expected {4, 5}
    BigInt stabilizer_order = 0;         // m
    HausdorffDimension hausdorff;
    std::string fingerprint_key;
    bool ok = false;
    std::string failure;

    nlohmann::json to_json() const {
        nlohmann::json js;
        js["triple"] = {i, j, k};
        js["order"] = order.str();
        js["minimal"] = minimal;
        js["restriction_X3_equals_AutX3"] = restriction_is_full_aut3;
        js["infinite"] = infinite;
        js["level_transitive"] = level_transitive;
        js["fg_witness_level"] = fg_witness_level ? nlohmann::json(*fg_witness_level) : nlohmann::json();
        js["no_certificate_at"] = no_certificate_at;
        js["m"] = stabilizer_order.str();
        js["hausdorff_dimension"] = hausdorff.to_string();
        js["fingerprint"] = fingerprint_key;
        js["ok"] = ok;
        if (!ok) js["failure"] = failure;
        return js;
    }
};

struct CatalogReport {
    LeafNumbering numbering = LeafNumbering::Lex;
    std::vector<CatalogGroupReport> groups;
    size_t fingerprint_bucket_count = 0; // certified-distinct isomorphism classes
    int paper_class_count = 20;
    bool all_ok = false;

    nlohmann::json to_json() const {
        nlohmann::json js;
        js["numbering"] = to_string(numbering);
        js["groups"] = nlohmann::json::array();
        for (const auto& g : groups) js["groups"].push_back(g.to_json());
        js["fingerprint_bucket_count"] = fingerprint_bucket_count;
        js["paper_class_count"] = paper_class_count;
        js["certified_distinct_classes"] = fingerprint_bucket_count;
        js["gap_to_paper_classes"] =
            paper_class_count - static_cast<int>(fingerprint_bucket_count);
        js["all_ok"] = all_ok;
        return js;
    }
};

/// Verifies the catalog battery for the 32 groups under one leaf numbering:
/// order 4096, minimality, restriction to X^[3] equal to Aut X^[3], infinite,
/// level-transitive, finite-generation certificate at n = 6 and none at
/// n = 4, 5. Fingerprint buckets are reported, not asserted.
inline CatalogReport verify_depth4_with(LeafNumbering numbering, int jobs = 1) {
    CatalogReport rep;
    rep.numbering = numbering;
    auto triples = Depth4Catalog::all_triples();
    rep.groups.resize(triples.size());
    PermutationGroup aut3 = PatternGroup::full(2, 3).leaf_group();

    parallel_for(triples.size(), jobs, [&](size_t t) {
        auto [i, j, k] = triples[t];
        CatalogGroupReport g;
        g.i = i;
        g.j = j;
        g.k = k;
        auto fail_with = [&](const std::string& why) {
            g.ok = false;
            g.failure = "P_" + std::to_string(i) + std::to_string(j) + std::to_string(k) + ": " +
                        why + " (leaf numbering: " + to_string(numbering) + ")";
        };
        try {
            PatternGroup P = Depth4Catalog::group(i, j, k, numbering);
            g.order = static_cast<unsigned long>(P.size());
            g.minimal = P.is_minimal();
            g.stabilizer_order = static_cast<unsigned long>(P.level_stabilizer_order(3));

            PermutationGroup r3 = P.leaf_group().induced_block_action(prefix_blocks(16, 8));
            g.restriction_is_full_aut3 = same_group(r3, aut3);

            g.infinite = g.stabilizer_order > 1;
            if (g.infinite) {
                g.level_transitive = level_transitivity(P).first;
                g.hausdorff = hausdorff_dimension(P);
            }
            g.fingerprint_key = fingerprint(P.leaf_group()).key();

            ClassificationRecord rec = classify(P, 6);
            if (rec.verdict == VerdictTag::FG) {
                g.fg_witness_level = *rec.witness_level;
                // classify stops at the first firing level, so FG at 6 already
                // means no Prop-4 witness and no certificate at 4 and 5.
                if (*rec.witness_level == 6) g.no_certificate_at = {4, 5};
            }

            g.ok = g.order == 4096 && g.minimal && g.restriction_is_full_aut3 && g.infinite &&
                   g.level_transitive && g.fg_witness_level && *g.fg_witness_level == 6;
            if (!g.ok)
                fail_with(std::string("failed property: ") +
                          (g.order != 4096              ? "order"
                           : !g.minimal                 ? "minimality"
                           : !g.restriction_is_full_aut3 ? "restriction to X^[3]"
                           : !g.infinite                ? "infiniteness"
                           : !g.level_transitive        ? "level-transitivity"
                                                        : "finite-generation witness level"));
        } catch (const Error& e) {
            fail_with(e.what());
        }
        rep.groups[t] = std::move(g);
    });

    std::set<std::string> buckets;
    for (const auto& g : rep.groups) buckets.insert(g.fingerprint_key);
    rep.fingerprint_bucket_count = buckets.size();
    rep.all_ok = true;
    for (const auto& g : rep.groups) rep.all_ok = rep.all_ok && g.ok;
    return rep;
}

/// Tries the lexicographic numbering first and falls back to the reversed one,
/// reporting whichever convention passes.
inline CatalogReport verify_depth4(int jobs = 1) {
    CatalogReport lex = verify_depth4_with(LeafNumbering::Lex, jobs);
    if (lex.all_ok) return lex;
    CatalogReport rev = verify_depth4_with(LeafNumbering::Reversed, jobs);
    return rev.all_ok ? rev : lex;
}

/// Standard Grigorchuk generators truncated to the given depth:
/// a is the root swap; b = (a, c), c = (a, d), d = (1, b) with trivial root.
inline TreeAutomorphism grigorchuk_generator(char name, int depth) {
    require(name == 'a' || name == 'b' || name == 'c' || name == 'd', ErrorKind::Domain,
            "Grigorchuk generators are a, b, c, d");
    if (depth == 0) return TreeAutomorphism::identity(2, 0);
    if (name == 'a')
        return TreeAutomorphism::single_vertex(2, depth, {}, Permutation::parse_cycles("(1,2)", 2));
    char s0 = name == 'd' ? '\0' : 'a';
    char s1 = name == 'b' ? 'c' : name == 'c' ? 'd' : 'b';
    TreeAutomorphism left = s0 ? grigorchuk_generator(s0, depth - 1)
                               : TreeAutomorphism::identity(2, depth - 1);
    TreeAutomorphism right = grigorchuk_generator(s1, depth - 1);
    return TreeAutomorphism::planted(depth, Word{0}, left) *
           TreeAutomorphism::planted(depth, Word{1}, right);
}

struct GrigorchukReport {
    LeafNumbering numbering = LeafNumbering::Lex;
    int truncation_depth = 8;
    BigInt restriction_order = 0; // |<a,b,c,d>|_{X^[4]}|
    bool equals_p123 = false;
    bool sections_inside_p123 = false;
    bool involution_ok = false; // a^2 = 1 at every truncation depth

    nlohmann::json to_json() const {
        nlohmann::json js;
        js["numbering"] = to_string(numbering);
        js["truncation_depth"] = truncation_depth;
        js["restriction_order_depth4"] = restriction_order.str();
        js["equals_P123"] = equals_p123;
        js["sections_inside_P123"] = sections_inside_p123;
        js["involution_ok"] = involution_ok;
        js["ok"] = equals_p123 && sections_inside_p123 && involution_ok;
        return js;
    }
};

/// Checks that the closure of the Grigorchuk group is G_{P_123}: the depth-4
/// restriction of <a,b,c,d> equals P_123 as a set, and every depth-4 window
/// of every generator lies in P_123.
inline GrigorchukReport grigorchuk_check(LeafNumbering numbering = LeafNumbering::Lex) {
    GrigorchukReport rep;
    rep.numbering = numbering;
    rep.truncation_depth = 8;

    std::vector<TreeAutomorphism> deep;
    for (char n : {'a', 'b', 'c', 'd'}) deep.push_back(grigorchuk_generator(n, 8));

    rep.involution_ok = true;
    for (int depth = 0; depth <= 8; ++depth) {
        TreeAutomorphism a = grigorchuk_generator('a', depth);
        rep.involution_ok = rep.involution_ok && (a * a).is_identity();
    }

    std::vector<TreeAutomorphism> g4;
    for (const auto& g : deep) g4.push_back(g.restrict(4));
    PatternGroup closure4 = PatternGroup::from_generators(2, 4, g4);
    rep.restriction_order = static_cast<unsigned long>(closure4.size());

    PatternGroup p123 = Depth4Catalog::group(1, 2, 3, numbering);
    rep.equals_p123 = closure4 == p123;

    rep.sections_inside_p123 = true;
    for (const auto& g : deep)
        for (int lvl = 0; lvl <= 4; ++lvl)
            for (long v = 0; v < ipow(2, lvl); ++v) {
                TreeAutomorphism window = g.section(index_to_word(v, lvl, 2)).restrict(4);
                rep.sections_inside_p123 = rep.sections_inside_p123 && p123.contains(window);
            }
    return rep;
}

} // namespace sft
