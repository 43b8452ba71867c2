#pragma once

#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sft/core.hpp"
#include "sft/perm_group.hpp"
#include "sft/permutation.hpp"

namespace sft {

namespace detail {

/// Element-indexed view of a small group, for lattice computations.
struct IndexedGroup {
    std::vector<Permutation> elements; // sorted canonically
    std::unordered_map<Permutation, int, PermutationHash> index;
    std::vector<int> inverse;
    std::vector<std::vector<uint16_t>> table; // Cayley table when small enough

    explicit IndexedGroup(const PermutationGroup& g, size_t table_limit = 2048) {
        elements = g.elements();
        std::sort(elements.begin(), elements.end());
        for (size_t i = 0; i < elements.size(); ++i) index[elements[i]] = static_cast<int>(i);
        inverse.resize(elements.size());
        for (size_t i = 0; i < elements.size(); ++i)
            inverse[i] = index.at(elements[i].inverse());
        if (elements.size() <= table_limit) {
            table.assign(elements.size(), std::vector<uint16_t>(elements.size()));
            for (size_t a = 0; a < elements.size(); ++a)
                for (size_t b = 0; b < elements.size(); ++b)
                    table[a][b] = static_cast<uint16_t>(index.at(elements[a] * elements[b]));
        }
    }

    size_t size() const { return elements.size(); }

    int mul(int a, int b) const {
        if (!table.empty()) return table[static_cast<size_t>(a)][static_cast<size_t>(b)];
        return index.at(elements[static_cast<size_t>(a)] * elements[static_cast<size_t>(b)]);
    }

    int power(int a, unsigned long e) const {
        int r = index.at(Permutation(elements[0].degree()));
        int base = a;
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
};

using ElementSet = std::vector<uint64_t>;

inline ElementSet empty_set(size_t n) { return ElementSet((n + 63) / 64, 0); }
inline void set_bit(ElementSet& s, int i) { s[static_cast<size_t>(i) / 64] |= uint64_t{1} << (i % 64); }
inline bool test_bit(const ElementSet& s, int i) {
    return (s[static_cast<size_t>(i) / 64] >> (i % 64)) & 1;
}

struct ElementSetHash {
    size_t operator()(const ElementSet& s) const {
        size_t h = 1469598103934665603ull;
        for (uint64_t w : s) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace detail

/// All subgroups of a solvable G (each exactly once, as subgroups rather than
/// up to conjugacy), by the cyclic-extension method layered by order: every
/// subgroup of a solvable group has a normal subgroup of prime index, so each
/// layer arises by extending the previous one with prime-order cyclic tops
/// taken inside the normalizer.
inline std::vector<PermutationGroup> all_subgroups(const PermutationGroup& G,
                                                   size_t order_bound = 8192) {
    require(G.order() <= order_bound, ErrorKind::Resource,
            "group order " + G.order().str() + " exceeds the subgroup-enumeration bound " +
                std::to_string(order_bound) + "; raise the bound to proceed");
    {
        PermutationGroup d = G;
        while (!d.is_trivial()) {
            PermutationGroup d2 = d.derived_subgroup();
            require(d2.order() < d.order(), ErrorKind::Domain,
                    "subgroup enumeration requires a solvable group");
            d = d2;
        }
    }

    detail::IndexedGroup ix(G);
    size_t n = ix.size();
    unsigned long order_ul = static_cast<unsigned long>(n);
    std::vector<unsigned long> primes;
    {
        unsigned long m = order_ul;
        for (unsigned long p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                primes.push_back(p);
                while (m % p == 0) m /= p;
            }
        if (m > 1) primes.push_back(m);
    }

    struct Rec {
        detail::ElementSet set;
        std::vector<int> members; // ascending element indices
        std::vector<int> gens;
    };

    int id_idx = ix.index.at(Permutation(G.degree()));
    Rec trivial;
    trivial.set = detail::empty_set(n);
    detail::set_bit(trivial.set, id_idx);
    trivial.members = {id_idx};

    std::unordered_set<detail::ElementSet, detail::ElementSetHash> seen{trivial.set};
    std::map<unsigned long, std::vector<Rec>> layers;
    layers[1].push_back(trivial);

    for (auto it = layers.begin(); it != layers.end(); ++it) {
        unsigned long m = it->first;
        for (size_t ri = 0; ri < it->second.size(); ++ri) {
            // Normalizer of K: conjugating the generators into K suffices.
            const Rec rec = it->second[ri]; // copy: the layer vector may reallocate
            std::vector<int> normalizer;
            for (int g = 0; g < static_cast<int>(n); ++g) {
                int gi = ix.inverse[static_cast<size_t>(g)];
                bool ok = true;
                for (int s : rec.gens.empty() ? rec.members : rec.gens) {
                    if (!detail::test_bit(rec.set, ix.mul(ix.mul(g, s), gi))) {
                        ok = false;
                        break;
                    }
                }
                if (ok) normalizer.push_back(g);
            }
            for (unsigned long p : primes) {
                if ((order_ul / m) % p != 0) continue;
                for (int g : normalizer) {
                    if (detail::test_bit(rec.set, g)) continue;
                    if (!detail::test_bit(rec.set, ix.power(g, p))) continue;
                    Rec h;
                    h.set = rec.set;
                    h.members = rec.members;
                    int gp = g;
                    for (unsigned long e = 1; e < p; ++e) {
                        for (int kmem : rec.members) {
                            int x = ix.mul(kmem, gp);
                            if (!detail::test_bit(h.set, x)) {
                                detail::set_bit(h.set, x);
                                h.members.push_back(x);
                            }
                        }
                        gp = ix.mul(gp, g);
                    }
                    if (!seen.insert(h.set).second) continue;
                    std::sort(h.members.begin(), h.members.end());
                    h.gens = rec.gens;
                    h.gens.push_back(g);
                    layers[m * p].push_back(std::move(h));
                }
            }
        }
    }

    std::vector<const Rec*> flat;
    for (const auto& [m, recs] : layers)
        for (const auto& r : recs) flat.push_back(&r);
    std::sort(flat.begin(), flat.end(), [](const Rec* a, const Rec* b) {
        if (a->members.size() != b->members.size()) return a->members.size() < b->members.size();
        return a->members < b->members;
    });

    std::vector<PermutationGroup> out;
    out.reserve(flat.size());
    for (const Rec* r : flat) {
        std::vector<Permutation> gens;
        for (int g : r->gens) gens.push_back(ix.elements[static_cast<size_t>(g)]);
        PermutationGroup h(G.degree(), gens);
        require(h.order() == r->members.size(), ErrorKind::Internal,
                "cyclic extension produced a non-subgroup");
        out.push_back(std::move(h));
    }
    return out;
}

} // namespace sft
