#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sft/core.hpp"
#include "sft/perm_group.hpp"
#include "sft/permutation.hpp"

namespace sft {

/// Isomorphism-invariant tuple. Distinct fingerprints certify non-isomorphism;
/// equal fingerprints certify nothing.
struct Fingerprint {
    BigInt order = 1;
    std::vector<uint64_t> abelian_invariants; // elementary divisors of G/[G,G], ascending
    uint64_t exponent = 1;
    int derived_length = 0; // -1 when the derived series stalls above the trivial group
    std::vector<std::pair<uint64_t, uint64_t>> element_orders; // (order, count), ascending
    std::vector<std::pair<uint64_t, uint64_t>> class_sizes;    // (size, count), ascending

    friend bool operator==(const Fingerprint& a, const Fingerprint& b) = default;
    friend auto operator<=>(const Fingerprint& a, const Fingerprint& b) = default;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["order"] = order.str();
        j["abelian_invariants"] = abelian_invariants;
        j["exponent"] = exponent;
        j["derived_length"] = derived_length;
        j["element_orders"] = element_orders;
        j["class_sizes"] = class_sizes;
        return j;
    }

    std::string key() const { return to_json().dump(); }
};

inline Fingerprint fingerprint(const PermutationGroup& G, size_t enumeration_limit = 65536) {
    Fingerprint fp;
    fp.order = G.order();
    require(G.order() <= enumeration_limit, ErrorKind::Resource,
            "fingerprint requires enumerating the group; order " + G.order().str() +
                " exceeds the limit " + std::to_string(enumeration_limit));
    std::vector<Permutation> els = G.elements(enumeration_limit);

    std::map<uint64_t, uint64_t> order_hist;
    fp.exponent = 1;
    for (const auto& e : els) {
        uint64_t o = e.order();
        ++order_hist[o];
        fp.exponent = std::lcm(fp.exponent, o);
    }
    fp.element_orders.assign(order_hist.begin(), order_hist.end());

    // Conjugacy classes: orbits under conjugation by a generating set.
    std::vector<Permutation> gens = G.small_generating_set();
    std::unordered_map<Permutation, int, PermutationHash> idx;
    for (size_t i = 0; i < els.size(); ++i) idx[els[i]] = static_cast<int>(i);
    std::vector<bool> done(els.size(), false);
    std::map<uint64_t, uint64_t> class_hist;
    for (size_t i = 0; i < els.size(); ++i) {
        if (done[i]) continue;
        std::vector<int> orbit{static_cast<int>(i)};
        done[i] = true;
        for (size_t q = 0; q < orbit.size(); ++q)
            for (const auto& g : gens) {
                int j = idx.at(els[static_cast<size_t>(orbit[q])].conjugated_by(g));
                if (!done[static_cast<size_t>(j)]) {
                    done[static_cast<size_t>(j)] = true;
                    orbit.push_back(j);
                }
            }
        ++class_hist[orbit.size()];
    }
    fp.class_sizes.assign(class_hist.begin(), class_hist.end());

    // Derived length.
    fp.derived_length = 0;
    PermutationGroup d = G;
    while (!d.is_trivial()) {
        PermutationGroup d2 = d.derived_subgroup();
        if (d2.order() == d.order()) {
            fp.derived_length = -1;
            break;
        }
        d = std::move(d2);
        ++fp.derived_length;
    }

    // Abelian invariants of G/[G,G]: for each prime p, counting cosets whose
    // order divides p^j determines the partition of the p-part.
    PermutationGroup der = G.derived_subgroup();
    std::unordered_set<Permutation, PermutationHash> dset;
    for (auto& e : der.elements(enumeration_limit)) dset.insert(std::move(e));
    std::vector<Permutation> reps;
    {
        std::unordered_set<Permutation, PermutationHash> assigned;
        for (const auto& e : els) {
            if (assigned.count(e)) continue;
            reps.push_back(e);
            for (const auto& d0 : dset) assigned.insert(e * d0);
        }
    }
    auto in_derived = [&](const Permutation& p) { return dset.count(p) > 0; };
    auto power = [](const Permutation& r, uint64_t e) {
        Permutation acc(r.degree());
        Permutation base = r;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    };
    std::vector<uint64_t> invariants;
    uint64_t m = reps.size();
    for (uint64_t p = 2; m > 1; ++p) {
        if (m % p != 0) continue;
        uint64_t ppart = 1;
        while (m % p == 0) {
            m /= p;
            ppart *= p;
        }
        // c[j] = #cosets whose order divides p^j; determines the p-part type.
        std::vector<uint64_t> c{1};
        uint64_t pj = 1;
        while (c.back() < ppart) {
            pj *= p;
            uint64_t count = 0;
            for (const auto& r : reps)
                if (in_derived(power(r, pj))) ++count;
            c.push_back(count);
            if (count == c[c.size() - 2]) break; // stabilized
        }
        // m[j] = log_p(c[j]/c[j-1]) = number of parts >= j
        std::vector<int> mj;
        for (size_t j = 1; j < c.size(); ++j) {
            uint64_t ratio = c[j] / c[j - 1];
            require(c[j] % c[j - 1] == 0, ErrorKind::Internal, "abelian invariant counting failed");
            int e = 0;
            while (ratio > 1) {
                require(ratio % p == 0, ErrorKind::Internal, "abelian invariant counting failed");
                ratio /= p;
                ++e;
            }
            if (e > 0) mj.push_back(e);
            if (mj.size() >= 2)
                require(mj[mj.size() - 1] <= mj[mj.size() - 2], ErrorKind::Internal,
                        "abelian invariant counts must be non-increasing");
        }
        if (!mj.empty())
            for (int i = 1; i <= mj[0]; ++i) {
                int lambda = 0;
                for (size_t j = 0; j < mj.size(); ++j)
                    if (mj[j] >= i) ++lambda;
                uint64_t divisor = 1;
                for (int t = 0; t < lambda; ++t) divisor *= p;
                invariants.push_back(divisor);
            }
    }
    std::sort(invariants.begin(), invariants.end());
    fp.abelian_invariants = std::move(invariants);
    return fp;
}

/// Backtracking isomorphism test for small groups (|G| = |H| <= bound).
/// Maps a greedy generating sequence of G onto order- and class-size-matching
/// elements of H, rebuilding the partial closure at every step.
inline bool brute_force_isomorphic(const PermutationGroup& G, const PermutationGroup& H,
                                   size_t order_bound = 256) {
    if (G.order() != H.order()) return false;
    require(G.order() <= order_bound, ErrorKind::Resource,
            "brute-force isomorphism bound exceeded (order " + G.order().str() + ")");
    std::vector<Permutation> gels = G.elements(order_bound);
    std::vector<Permutation> hels = H.elements(order_bound);
    std::sort(gels.begin(), gels.end());
    std::sort(hels.begin(), hels.end());

    auto order_hist = [](const std::vector<Permutation>& els) {
        std::map<uint64_t, uint64_t> h;
        for (const auto& e : els) ++h[e.order()];
        return h;
    };
    if (order_hist(gels) != order_hist(hels)) return false;

    auto class_size_of = [](const std::vector<Permutation>& els, const PermutationGroup& grp) {
        std::unordered_map<Permutation, uint32_t, PermutationHash> cs;
        std::vector<Permutation> gens = grp.small_generating_set();
        for (const auto& e : els) {
            if (cs.count(e)) continue;
            std::vector<Permutation> orbit{e};
            std::unordered_set<Permutation, PermutationHash> seen{e};
            for (size_t q = 0; q < orbit.size(); ++q)
                for (const auto& g : gens) {
                    Permutation c = orbit[q].conjugated_by(g);
                    if (seen.insert(c).second) orbit.push_back(std::move(c));
                }
            for (const auto& o : orbit) cs[o] = static_cast<uint32_t>(orbit.size());
        }
        return cs;
    };
    auto gcs = class_size_of(gels, G);
    auto hcs = class_size_of(hels, H);

    // Greedy generating sequence of G.
    std::vector<Permutation> gens;
    {
        std::unordered_set<Permutation, PermutationHash> span{Permutation(G.degree())};
        for (const auto& e : gels) {
            if (span.count(e)) continue;
            gens.push_back(e);
            // close span under the new generator set
            std::vector<Permutation> frontier(span.begin(), span.end());
            while (!frontier.empty()) {
                std::vector<Permutation> next;
                for (const auto& a : frontier)
                    for (const auto& g : gens) {
                        Permutation p = a * g;
                        if (span.insert(p).second) next.push_back(std::move(p));
                    }
                frontier = std::move(next);
            }
            if (span.size() == gels.size()) break;
        }
    }

    // Partial-map consistency: closure of <g_1..g_i> with proposed images.
    auto consistent = [&](const std::vector<Permutation>& imgs) -> bool {
        std::unordered_map<Permutation, Permutation, PermutationHash> phi;
        std::unordered_map<Permutation, Permutation, PermutationHash> phi_inv;
        Permutation eg(G.degree()), eh(H.degree());
        phi.emplace(eg, eh);
        phi_inv.emplace(eh, eg);
        std::vector<Permutation> queue{eg};
        for (size_t q = 0; q < queue.size(); ++q) {
            Permutation x = queue[q];
            Permutation fx = phi.at(x);
            for (size_t t = 0; t < imgs.size(); ++t) {
                Permutation y = x * gens[t];
                Permutation fy = fx * imgs[t];
                auto it = phi.find(y);
                if (it != phi.end()) {
                    if (!(it->second == fy)) return false;
                } else {
                    auto inv_it = phi_inv.find(fy);
                    if (inv_it != phi_inv.end()) return false; // not injective
                    phi.emplace(y, fy);
                    phi_inv.emplace(fy, y);
                    queue.push_back(std::move(y));
                }
            }
        }
        return true;
    };

    std::vector<Permutation> imgs;
    std::function<bool()> search = [&]() -> bool {
        if (imgs.size() == gens.size()) return true;
        const Permutation& g = gens[imgs.size()];
        uint64_t go = g.order();
        uint32_t gc = gcs.at(g);
        for (const auto& h : hels) {
            if (h.order() != go || hcs.at(h) != gc) continue;
            imgs.push_back(h);
            if (consistent(imgs) && search()) return true;
            imgs.pop_back();
        }
        return false;
    };
    return search();
}

/// Reference groups of order <= 8, for naming census fingerprint buckets.
inline const std::vector<std::pair<std::string, PermutationGroup>>& small_group_references() {
    static const std::vector<std::pair<std::string, PermutationGroup>> refs = [] {
        auto cyc = [](int n) {
            std::string s = "(";
            for (int i = 1; i <= n; ++i) s += std::to_string(i) + (i == n ? ")" : ",");
            return PermutationGroup(n, {Permutation::parse_cycles(s, n)});
        };
        std::vector<std::pair<std::string, PermutationGroup>> r;
        r.emplace_back("1", PermutationGroup(1));
        r.emplace_back("C2", cyc(2));
        r.emplace_back("C3", cyc(3));
        r.emplace_back("C4", cyc(4));
        r.emplace_back("C2xC2", PermutationGroup(4, {Permutation::parse_cycles("(1,2)", 4),
                                                     Permutation::parse_cycles("(3,4)", 4)}));
        r.emplace_back("C5", cyc(5));
        r.emplace_back("C6", cyc(6));
        r.emplace_back("S3", PermutationGroup(3, {Permutation::parse_cycles("(1,2)", 3),
                                                  Permutation::parse_cycles("(1,2,3)", 3)}));
        r.emplace_back("C7", cyc(7));
        r.emplace_back("C8", cyc(8));
        r.emplace_back("C4xC2", PermutationGroup(6, {Permutation::parse_cycles("(1,2,3,4)", 6),
                                                     Permutation::parse_cycles("(5,6)", 6)}));
        r.emplace_back("C2xC2xC2",
                       PermutationGroup(6, {Permutation::parse_cycles("(1,2)", 6),
                                            Permutation::parse_cycles("(3,4)", 6),
                                            Permutation::parse_cycles("(5,6)", 6)}));
        r.emplace_back("D8", PermutationGroup(4, {Permutation::parse_cycles("(1,2,3,4)", 4),
                                                  Permutation::parse_cycles("(1,3)", 4)}));
        r.emplace_back("Q8", PermutationGroup(8, {Permutation::parse_cycles("(1,3,2,4)(5,7,6,8)", 8),
                                                  Permutation::parse_cycles("(1,5,2,6)(3,8,4,7)", 8)}));
        return r;
    }();
    return refs;
}

/// Certified isomorphism-type name for groups of order <= 8; nullopt above.
inline std::optional<std::string> small_group_name(const PermutationGroup& G) {
    if (G.order() > 8) return std::nullopt;
    for (const auto& [name, ref] : small_group_references())
        if (G.order() == ref.order() && brute_force_isomorphic(G, ref))
            return name;
    return std::nullopt;
}

} // namespace sft
