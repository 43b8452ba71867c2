#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sft/core.hpp"
#include "sft/perm_group.hpp"
#include "sft/permutation.hpp"
#include "sft/tree.hpp"

namespace sft {

/// A pattern group of depth d: a subgroup of Aut X^[d] held as an explicit
/// element list (canonically sorted), defining the self-similar group of
/// finite type G_P. Immutable after construction.
class PatternGroup {
public:
    static PatternGroup from_generators(int k, int d, const std::vector<TreeAutomorphism>& gens,
                                        size_t element_bound = size_t{1} << 16) {
        require(d >= 1, ErrorKind::Domain, "pattern depth must be >= 1");
        for (const auto& g : gens) {
            require(g.alphabet() == k, ErrorKind::Domain, "generator alphabet mismatch");
            require(g.depth() == d, ErrorKind::Domain, "generator depth mismatch");
        }
        std::unordered_set<TreeAutomorphism, TreeAutomorphismHash> seen{TreeAutomorphism::identity(k, d)};
        std::vector<TreeAutomorphism> frontier(seen.begin(), seen.end());
        std::vector<TreeAutomorphism> gen_list;
        for (const auto& g : gens) {
            if (g.is_identity()) continue;
            if (seen.insert(g).second) {
                gen_list.push_back(g);
                frontier.push_back(g);
            }
        }
        for (size_t q = 0; q < frontier.size(); ++q) {
            for (const auto& g : gen_list) {
                TreeAutomorphism p = frontier[q] * g;
                if (seen.insert(p).second) {
                    require(seen.size() <= element_bound, ErrorKind::Resource,
                            "pattern group closure exceeds the element bound " +
                                std::to_string(element_bound));
                    frontier.push_back(std::move(p));
                }
            }
        }
        std::vector<TreeAutomorphism> els(seen.begin(), seen.end());
        return PatternGroup(k, d, std::move(els), gen_list);
    }

    static PatternGroup from_elements(int k, int d, std::vector<TreeAutomorphism> els,
                                      std::vector<TreeAutomorphism> gens = {}) {
        return PatternGroup(k, d, std::move(els), std::move(gens));
    }

    static PatternGroup trivial(int k, int d) { return from_generators(k, d, {}); }

    /// Aut X^[d]: generated by letter transpositions and cycles at every
    /// internal vertex.
    static PatternGroup full(int k, int d) {
        std::vector<TreeAutomorphism> gens;
        std::vector<Permutation> sym_gens;
        {
            std::vector<uint16_t> t(static_cast<size_t>(k));
            std::iota(t.begin(), t.end(), uint16_t{0});
            std::swap(t[0], t[1]);
            sym_gens.emplace_back(std::move(t));
            if (k > 2) {
                std::vector<uint16_t> c(static_cast<size_t>(k));
                for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = static_cast<uint16_t>((i + 1) % k);
                sym_gens.emplace_back(std::move(c));
            }
        }
        for (int l = 0; l < d; ++l)
            for (long i = 0; i < ipow(k, l); ++i)
                for (const auto& s : sym_gens)
                    gens.push_back(TreeAutomorphism::single_vertex(k, d, index_to_word(i, l, k), s));
        return from_generators(k, d, gens, size_t{1} << 20);
    }

    int alphabet() const { return k_; }
    int depth() const { return d_; }
    size_t size() const { return elements_.size(); }

    /// Elements in the canonical (portrait-lexicographic) order.
    const std::vector<TreeAutomorphism>& elements() const { return elements_; }
    const std::vector<TreeAutomorphism>& generators() const { return generators_; }

    bool contains(const TreeAutomorphism& g) const { return index_.count(g) > 0; }
    int index_of(const TreeAutomorphism& g) const {
        auto it = index_.find(g);
        return it == index_.end() ? -1 : it->second;
    }

    /// The same group as permutations of the k^d leaves (lex numbering).
    const PermutationGroup& leaf_group() const { return leaf_group_; }

    /// St_P(j): elements fixing every vertex of depth <= j.
    std::vector<int> level_stabilizer_indices(int j) const {
        require(j >= 0 && j <= d_, ErrorKind::Domain, "stabilizer level out of range");
        std::vector<int> out;
        for (size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i].restrict(j).is_identity()) out.push_back(static_cast<int>(i));
        return out;
    }

    size_t level_stabilizer_order(int j) const { return level_stabilizer_indices(j).size(); }

    /// Small generating set of St_P(j), in canonical element order.
    std::vector<TreeAutomorphism> level_stabilizer_generators(int j) const {
        std::vector<TreeAutomorphism> out;
        detail::StabilizerChain span(static_cast<int>(ipow(k_, d_)));
        for (int i : level_stabilizer_indices(j)) {
            Permutation p = elements_[static_cast<size_t>(i)].leaf_permutation();
            if (span.contains(p)) continue;
            span.add_generator(p);
            out.push_back(elements_[static_cast<size_t>(i)]);
        }
        return out;
    }

    bool is_minimal() const { return minimal_; }

    /// The unique minimal pattern group defining the same G_P: repeatedly
    /// discard patterns with no outgoing x-arc in the pattern graph for some
    /// letter x. Idempotent; the survivors always contain the identity.
    PatternGroup minimize() const {
        if (minimal_) return *this;
        std::vector<char> alive = survivors();
        std::vector<TreeAutomorphism> els;
        for (size_t i = 0; i < elements_.size(); ++i)
            if (alive[i]) els.push_back(elements_[i]);

        // The survivors must form a subgroup; anything else is a bug upstream.
        std::vector<Permutation> leaf;
        for (const auto& e : els) leaf.push_back(e.leaf_permutation());
        PermutationGroup check(static_cast<int>(ipow(k_, d_)), leaf);
        require(check.order() == els.size(), ErrorKind::Internal,
                "pattern-graph survivors do not form a subgroup");

        PatternGroup out(k_, d_, std::move(els), {});
        require(out.is_minimal(), ErrorKind::Internal, "minimize produced a non-minimal group");
        return out;
    }

    /// |G_P restricted to X^[n]| by the closed-form growth formula
    /// |P| * m^(k + k^2 + ... + k^(n-d)) with m = |St_P(d-1)|.
    BigInt restriction_order(int n) const {
        require(minimal_, ErrorKind::Domain, "restriction_order requires a minimal pattern group");
        require(n >= d_, ErrorKind::Domain, "restriction level below pattern depth");
        BigInt m = static_cast<unsigned long>(level_stabilizer_order(d_ - 1));
        BigInt exponent_sum = 0;
        for (int i = 1; i <= n - d_; ++i) exponent_sum += big_pow(k_, static_cast<unsigned long>(i));
        require(exponent_sum < std::numeric_limits<unsigned long>::max(), ErrorKind::Resource,
                "restriction level too deep");
        BigInt r = static_cast<unsigned long>(size());
        return r * big_pow(m, exponent_sum.convert_to<unsigned long>());
    }

    /// Canonical identity for deduplication: the sorted element portraits.
    std::string canonical_key() const {
        std::ostringstream os;
        os << k_ << ':' << d_ << ':';
        for (const auto& e : elements_) os << e.to_portrait_text() << ';';
        return os.str();
    }

    friend bool operator==(const PatternGroup& a, const PatternGroup& b) {
        return a.k_ == b.k_ && a.d_ == b.d_ && a.elements_ == b.elements_;
    }

    std::vector<TreeAutomorphism> greedy_generators() const {
        std::vector<TreeAutomorphism> out;
        detail::StabilizerChain span(static_cast<int>(ipow(k_, d_)));
        for (const auto& e : elements_) {
            Permutation p = e.leaf_permutation();
            if (span.contains(p)) continue;
            span.add_generator(p);
            out.push_back(e);
        }
        return out;
    }

private:
    PatternGroup(int k, int d, std::vector<TreeAutomorphism> els, std::vector<TreeAutomorphism> gens)
        : k_(k), d_(d), elements_(std::move(els)), generators_(std::move(gens)) {
        require(d_ >= 1, ErrorKind::Domain, "pattern depth must be >= 1");
        std::sort(elements_.begin(), elements_.end());
        elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
        require(!elements_.empty(), ErrorKind::Domain, "pattern group has no elements");
        for (size_t i = 0; i < elements_.size(); ++i) {
            require(elements_[i].alphabet() == k_ && elements_[i].depth() == d_, ErrorKind::Domain,
                    "pattern element shape mismatch");
            index_[elements_[i]] = static_cast<int>(i);
        }
        require(index_.count(TreeAutomorphism::identity(k_, d_)) == 1, ErrorKind::Structure,
                "pattern group must contain the identity");
        for (const auto& g : generators_)
            require(index_.count(g) == 1, ErrorKind::Domain, "generator outside the element list");
        std::vector<Permutation> leaf;
        for (const auto& e : elements_) leaf.push_back(e.leaf_permutation());
        leaf_group_ = PermutationGroup(static_cast<int>(ipow(k_, d_)), leaf);
        require(leaf_group_.order() == elements_.size(), ErrorKind::Structure,
                "pattern element list is not closed under the group operation");
        if (generators_.empty() && elements_.size() > 1) generators_ = greedy_generators();
        std::vector<char> alive = survivors();
        minimal_ = std::all_of(alive.begin(), alive.end(), [](char c) { return c != 0; });
    }

    /// Pattern-graph pruning: alive[i] = 1 iff element i survives the
    /// iterated removal of vertices missing an outgoing x-arc for some x.
    std::vector<char> survivors() const {
        size_t n = elements_.size();
        // Bucket elements by their depth-(d-1) restriction.
        std::unordered_map<TreeAutomorphism, int, TreeAutomorphismHash> bucket_id;
        std::vector<int> bucket_of(n);
        std::vector<int> bucket_alive;
        for (size_t i = 0; i < n; ++i) {
            TreeAutomorphism key = elements_[i].restrict(d_ - 1);
            auto [it, fresh] = bucket_id.try_emplace(std::move(key), static_cast<int>(bucket_alive.size()));
            if (fresh) bucket_alive.push_back(0);
            bucket_of[i] = it->second;
            ++bucket_alive[static_cast<size_t>(it->second)];
        }
        // Arc targets: (element, letter) -> bucket of its section, or -1.
        std::vector<int> target(n * static_cast<size_t>(k_), -1);
        std::vector<std::vector<int>> incoming(bucket_alive.size());
        for (size_t i = 0; i < n; ++i)
            for (int x = 0; x < k_; ++x) {
                TreeAutomorphism sec = elements_[i].section(Word{static_cast<uint8_t>(x)});
                auto it = bucket_id.find(sec);
                if (it == bucket_id.end()) continue;
                target[i * static_cast<size_t>(k_) + static_cast<size_t>(x)] = it->second;
                incoming[static_cast<size_t>(it->second)].push_back(static_cast<int>(i));
            }
        std::vector<char> alive(n, 1);
        std::vector<int> dead_queue;
        auto kill = [&](int i) {
            if (!alive[static_cast<size_t>(i)]) return;
            alive[static_cast<size_t>(i)] = 0;
            dead_queue.push_back(i);
        };
        for (size_t i = 0; i < n; ++i)
            for (int x = 0; x < k_; ++x)
                if (target[i * static_cast<size_t>(k_) + static_cast<size_t>(x)] < 0) kill(static_cast<int>(i));
        for (size_t q = 0; q < dead_queue.size(); ++q) {
            int dead = dead_queue[q];
            int b = bucket_of[static_cast<size_t>(dead)];
            if (--bucket_alive[static_cast<size_t>(b)] == 0)
                for (int a : incoming[static_cast<size_t>(b)]) kill(a);
        }
        return alive;
    }

    int k_;
    int d_;
    std::vector<TreeAutomorphism> elements_;
    std::vector<TreeAutomorphism> generators_;
    std::unordered_map<TreeAutomorphism, int, TreeAutomorphismHash> index_;
    PermutationGroup leaf_group_;
    bool minimal_ = false;
};

/// The pattern graph Gamma_P: vertices are the elements of P, with an
/// x-labeled arc a -> b whenever the section of a at x agrees with b on
/// X^[d-1].
struct PatternGraph {
    struct Arc {
        int from;
        int letter;
        int to;
    };
    size_t vertex_count = 0;
    std::vector<Arc> arcs;

    size_t out_degree(int vertex, int letter) const {
        size_t n = 0;
        for (const auto& a : arcs) n += (a.from == vertex && a.letter == letter);
        return n;
    }
};

inline PatternGraph pattern_graph(const PatternGroup& P) {
    PatternGraph g;
    g.vertex_count = P.size();
    int d = P.depth();
    std::unordered_map<TreeAutomorphism, std::vector<int>, TreeAutomorphismHash> bucket;
    for (size_t i = 0; i < P.size(); ++i)
        bucket[P.elements()[i].restrict(d - 1)].push_back(static_cast<int>(i));
    for (size_t i = 0; i < P.size(); ++i)
        for (int x = 0; x < P.alphabet(); ++x) {
            auto it = bucket.find(P.elements()[i].section(Word{static_cast<uint8_t>(x)}));
            if (it == bucket.end()) continue;
            for (int b : it->second)
                g.arcs.push_back({static_cast<int>(i), x, b});
        }
    return g;
}

/// DOT rendering with x-labeled arcs; vertex labels are canonical element
/// indices with a legend of leaf-permutation cycle strings.
inline std::string pattern_graph_dot(const PatternGroup& P, const PatternGraph& g) {
    std::ostringstream os;
    os << "digraph pattern_graph {\n";
    os << "  // pattern group: k=" << P.alphabet() << " d=" << P.depth() << " |P|=" << P.size()
       << "\n";
    for (size_t i = 0; i < P.size(); ++i)
        os << "  // " << i << ": " << P.elements()[i].leaf_permutation().to_cycle_string() << "\n";
    for (size_t i = 0; i < P.size(); ++i) os << "  n" << i << " [label=\"" << i << "\"];\n";
    for (const auto& a : g.arcs)
        os << "  n" << a.from << " -> n" << a.to << " [label=\"x=" << a.letter << "\"];\n";
    os << "}\n";
    return os.str();
}

/// Exact Hausdorff dimension of G_P (infinite, minimal):
/// log m / (k^(d-1) log k!), exact as a fraction e / k^(d-1) whenever
/// m = (k!)^e; for the binary alphabet that is log2(m) / 2^(d-1), always exact.
struct HausdorffDimension {
    bool exact = false;
    long num = 0;
    long den = 1;
    double value = 0.0;

    std::string to_string() const {
        if (exact) return std::to_string(num) + "/" + std::to_string(den);
        return std::to_string(value);
    }
};

inline HausdorffDimension hausdorff_dimension(const PatternGroup& P) {
    require(P.is_minimal(), ErrorKind::Domain, "hausdorff_dimension requires a minimal pattern group");
    size_t m = P.level_stabilizer_order(P.depth() - 1);
    require(m > 1, ErrorKind::Domain, "hausdorff_dimension is undefined for finite G_P");
    int k = P.alphabet();
    require(k <= 12, ErrorKind::Resource, "alphabet too large for factorial arithmetic");
    long kfact = 1;
    for (int i = 2; i <= k; ++i) kfact *= i;
    HausdorffDimension out;
    // is m an integer power of k! ?
    long e = 0;
    size_t t = m;
    while (t % static_cast<size_t>(kfact) == 0) {
        t /= static_cast<size_t>(kfact);
        ++e;
    }
    long den = ipow(k, P.depth() - 1);
    if (t == 1) {
        long g = std::gcd(e, den);
        out.exact = true;
        out.num = e / g;
        out.den = den / g;
        out.value = static_cast<double>(e) / static_cast<double>(den);
    } else {
        out.exact = false;
        out.value = std::log(static_cast<double>(m)) /
                    (static_cast<double>(den) * std::log(static_cast<double>(kfact)));
    }
    return out;
}

/// The restriction tower of a minimal pattern group: generators and leaf
/// groups of G_P|_{X^[n]} for n >= d, with cached level stabilizers.
/// Levels are built on demand by a single writer.
class RestrictionTower {
public:
    explicit RestrictionTower(PatternGroup P) : P_(std::move(P)) {
        require(P_.is_minimal(), ErrorKind::Domain, "restriction tower requires a minimal pattern group");
        stab_gens_ = P_.level_stabilizer_generators(P_.depth() - 1);
        // Minimal extension per depth-(d-1) restriction: the least element of
        // P (canonical order) whose restriction matches. Minimality of P
        // guarantees a match exists for every section that occurs.
        for (size_t i = 0; i < P_.size(); ++i)
            min_extension_.try_emplace(P_.elements()[i].restrict(P_.depth() - 1),
                                       static_cast<int>(i));
        Level base;
        base.gens = P_.generators();
        levels_.emplace(P_.depth(), std::move(base));
    }

    const PatternGroup& base() const { return P_; }
    int depth() const { return P_.depth(); }
    int alphabet() const { return P_.alphabet(); }

    const std::vector<TreeAutomorphism>& generator_automorphisms(int n) {
        return level(n).gens;
    }

    const PermutationGroup& group(int n) {
        Level& lv = level(n);
        if (!lv.group) {
            std::vector<Permutation> leaf;
            for (const auto& g : lv.gens) leaf.push_back(g.leaf_permutation());
            lv.group.emplace(static_cast<int>(ipow(P_.alphabet(), n)), leaf);
        }
        return *lv.group;
    }

    /// St_{G_P}(j) restricted to X^[n], as the kernel of the block action on
    /// depth-j prefixes. For j = n-1 the planted direct-product construction
    /// must agree, and that equality is asserted.
    const PermutationGroup& level_stabilizer(int j, int n) {
        require(j >= 0 && j < n, ErrorKind::Domain, "stabilizer level out of range");
        Level& lv = level(n);
        auto it = lv.stabs.find(j);
        if (it != lv.stabs.end()) return it->second;
        const PermutationGroup& g = group(n);
        PermutationGroup kernel =
            g.induced_action_kernel(prefix_blocks(g.degree(), static_cast<int>(ipow(P_.alphabet(), j))));
        if (j == n - 1 && n >= P_.depth()) {
            PermutationGroup planted(g.degree(), planted_stabilizer_gens(n));
            require(same_group(planted, kernel), ErrorKind::Internal,
                    "St(n-1) kernel disagrees with the planted direct product");
        }
        return lv.stabs.emplace(j, std::move(kernel)).first->second;
    }

    /// Generators of St_{G_P}(n-1)|_{X^[n]}: copies of St_P(d-1) planted at
    /// every vertex of depth n-d.
    std::vector<Permutation> planted_stabilizer_gens(int n) {
        require(n >= P_.depth(), ErrorKind::Domain, "level below pattern depth");
        std::vector<Permutation> out;
        int k = P_.alphabet();
        for (long v = 0; v < ipow(k, n - P_.depth()); ++v) {
            Word w = index_to_word(v, n - P_.depth(), k);
            for (const auto& c : stab_gens_)
                out.push_back(TreeAutomorphism::planted(n, w, c).leaf_permutation());
        }
        return out;
    }

    const std::vector<TreeAutomorphism>& pattern_stabilizer_generators() const { return stab_gens_; }

private:
    struct Level {
        std::vector<TreeAutomorphism> gens;
        std::optional<PermutationGroup> group;
        std::map<int, PermutationGroup> stabs;
    };

    Level& level(int n) {
        require(n >= P_.depth(), ErrorKind::Domain,
                "restriction level below pattern depth; use a block action instead");
        auto it = levels_.find(n);
        if (it != levels_.end()) return it->second;
        Level& prev = level(n - 1);
        Level next;
        for (const auto& g : prev.gens) next.gens.push_back(lift(g));
        int k = P_.alphabet();
        for (long v = 0; v < ipow(k, n - P_.depth()); ++v) {
            Word w = index_to_word(v, n - P_.depth(), k);
            for (const auto& c : stab_gens_) next.gens.push_back(TreeAutomorphism::planted(n, w, c));
        }
        return levels_.emplace(n, std::move(next)).first->second;
    }

    /// Extends a depth-n element of G_P|X^[n] to depth n+1: below every
    /// vertex u of depth n+1-d, complete the window with the least pattern
    /// whose restriction matches the current section at u.
    TreeAutomorphism lift(const TreeAutomorphism& g) const {
        int n = g.depth();
        int d = P_.depth();
        int k = P_.alphabet();
        TreeAutomorphism out = TreeAutomorphism::planted(n + 1, Word{}, g); // copy portrait, identity bottom
        for (long u = 0; u < ipow(k, n + 1 - d); ++u) {
            Word uw = index_to_word(u, n + 1 - d, k);
            auto it = min_extension_.find(g.section(uw));
            require(it != min_extension_.end(), ErrorKind::Internal,
                    "no pattern extends a section of a tower element");
            const TreeAutomorphism& b = P_.elements()[static_cast<size_t>(it->second)];
            // copy the bottom layer of b (level d-1) to tree level n below u
            out = out * TreeAutomorphism::planted(
                            n + 1, uw,
                            bottom_layer_only(b));
        }
        return out;
    }

    /// The element of Aut X^[d] with b's bottom layer and trivial action above.
    TreeAutomorphism bottom_layer_only(const TreeAutomorphism& b) const {
        int d = P_.depth();
        int k = P_.alphabet();
        TreeAutomorphism out = TreeAutomorphism::identity(k, d);
        for (long i = 0; i < ipow(k, d - 1); ++i) {
            Word v = index_to_word(i, d - 1, k);
            std::vector<uint16_t> im(static_cast<size_t>(k));
            for (int x = 0; x < k; ++x) im[static_cast<size_t>(x)] = b.letter_image(d - 1, i, x);
            out = out * TreeAutomorphism::single_vertex(k, d, v, Permutation(std::move(im)));
        }
        return out;
    }

    PatternGroup P_;
    std::vector<TreeAutomorphism> stab_gens_;
    std::unordered_map<TreeAutomorphism, int, TreeAutomorphismHash> min_extension_;
    std::map<int, Level> levels_;
};

} // namespace sft
