#pragma once

#include <deque>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sft/core.hpp"
#include "sft/permutation.hpp"

namespace sft {

namespace detail {

/// Deterministic Schreier-Sims stabilizer chain.
///
/// Transversals are stable (append-only), so each Schreier pair
/// (orbit point, generator) is processed exactly once; per-level work
/// queues track what remains. Base points can be prescribed up front
/// (`base_hint`), which is how block-action kernels are extracted as a
/// chain suffix. New base points are the lowest moved point, which for
/// lexicographic leaf numbering follows tree-prefix order.
class StabilizerChain {
public:
    struct Level {
        int base = -1;
        std::vector<Permutation> gens;       // generators fixing all earlier base points
        std::vector<int> orbit;              // discovery order; orbit[0] == base
        std::vector<int> slot;               // point -> index in orbit, or -1
        std::vector<Permutation> trans;      // trans[i] maps base -> orbit[i]
        std::vector<Permutation> trans_inv;
        std::deque<std::pair<int, int>> pending; // (orbit index, gen index)
    };

    explicit StabilizerChain(int degree) : degree_(degree) {}

    StabilizerChain(int degree, const std::vector<Permutation>& gens, const std::vector<int>& base_hint)
        : degree_(degree) {
        for (int b : base_hint) append_level(b);
        for (const auto& g : gens) add_generator(g);
    }

    int degree() const { return degree_; }
    const std::vector<Level>& levels() const { return levels_; }

    /// Adds a generator, repairing the chain; afterwards the chain is verified.
    void add_generator(const Permutation& g) {
        require(g.degree() == degree_, ErrorKind::Domain, "generator degree mismatch");
        auto [h, lvl] = strip(g, 0);
        if (h.is_identity()) return;
        if (lvl == levels_.size()) append_level(first_moved(h));
        for (size_t l = 0; l <= lvl; ++l) add_gen_to_level(l, h);
        run();
    }

    bool contains(const Permutation& g) const {
        if (g.degree() != degree_) return false;
        auto [h, lvl] = strip(g, 0);
        return h.is_identity();
    }

    BigInt order() const {
        BigInt n = 1;
        for (const auto& lv : levels_) n *= static_cast<unsigned long>(lv.orbit.size());
        return n;
    }

    /// Residue of sifting g through levels [from, end); second = level reached.
    std::pair<Permutation, size_t> strip(Permutation g, size_t from) const {
        for (size_t l = from; l < levels_.size(); ++l) {
            const Level& lv = levels_[l];
            int p = g[lv.base];
            int s = lv.slot[p];
            if (s < 0) return {std::move(g), l};
            g = lv.trans_inv[s] * g;
        }
        return {std::move(g), levels_.size()};
    }

    void elements_into(std::vector<Permutation>& out, size_t limit) const {
        Permutation id(degree_);
        require(order() <= limit, ErrorKind::Resource,
                "group too large to enumerate (order " + order().str() + ", limit " +
                    std::to_string(limit) + ")");
        out.reserve(static_cast<size_t>(order()));
        enum_rec(0, id, out);
    }

    /// The sub-chain below `from_level`, restricted to the first `new_degree`
    /// points. Only valid when every permutation in that suffix fixes all
    /// points >= new_degree (as for block-action kernels).
    StabilizerChain suffix_restricted(size_t from_level, int new_degree) const {
        StabilizerChain out(new_degree);
        for (size_t l = from_level; l < levels_.size(); ++l) {
            const Level& lv = levels_[l];
            Level nl;
            require(lv.base < new_degree, ErrorKind::Internal, "suffix base outside restricted degree");
            nl.base = lv.base;
            nl.slot.assign(static_cast<size_t>(new_degree), -1);
            for (size_t i = 0; i < lv.orbit.size(); ++i) {
                require(lv.orbit[i] < new_degree, ErrorKind::Internal, "suffix orbit outside restricted degree");
                nl.orbit.push_back(lv.orbit[i]);
                nl.slot[static_cast<size_t>(lv.orbit[i])] = static_cast<int>(i);
                nl.trans.push_back(restricted(lv.trans[i], new_degree));
                nl.trans_inv.push_back(restricted(lv.trans_inv[i], new_degree));
            }
            for (const auto& g : lv.gens) nl.gens.push_back(restricted(g, new_degree));
            out.levels_.push_back(std::move(nl));
        }
        return out;
    }

    std::vector<Permutation> level_gens_restricted(size_t level, int new_degree) const {
        std::vector<Permutation> out;
        if (level >= levels_.size()) return out;
        for (const auto& g : levels_[level].gens) out.push_back(restricted(g, new_degree));
        return out;
    }

private:
    static Permutation restricted(const Permutation& p, int new_degree) {
        std::vector<uint16_t> im(static_cast<size_t>(new_degree));
        for (int x = 0; x < new_degree; ++x) {
            int y = p[x];
            require(y < new_degree, ErrorKind::Internal, "permutation does not restrict");
            im[static_cast<size_t>(x)] = static_cast<uint16_t>(y);
        }
        return Permutation(std::move(im));
    }

    int first_moved(const Permutation& g) const {
        for (int x = 0; x < degree_; ++x)
            if (g[x] != x) return x;
        fail(ErrorKind::Internal, "identity has no moved point");
    }

    void append_level(int base_point) {
        Level lv;
        lv.base = base_point;
        lv.slot.assign(static_cast<size_t>(degree_), -1);
        lv.slot[static_cast<size_t>(base_point)] = 0;
        lv.orbit.push_back(base_point);
        lv.trans.push_back(Permutation(degree_));
        lv.trans_inv.push_back(Permutation(degree_));
        levels_.push_back(std::move(lv));
    }

    void add_gen_to_level(size_t l, const Permutation& h) {
        Level& lv = levels_[l];
        int gi = static_cast<int>(lv.gens.size());
        lv.gens.push_back(h);
        for (size_t i = 0; i < lv.orbit.size(); ++i) lv.pending.emplace_back(static_cast<int>(i), gi);
        extend_orbit(l);
    }

    void extend_orbit(size_t l) {
        Level& lv = levels_[l];
        for (size_t i = 0; i < lv.orbit.size(); ++i) { // orbit grows while we scan
            for (const auto& g : lv.gens) {
                int p = g[lv.orbit[i]];
                if (lv.slot[static_cast<size_t>(p)] >= 0) continue;
                lv.slot[static_cast<size_t>(p)] = static_cast<int>(lv.orbit.size());
                lv.orbit.push_back(p);
                Permutation t = g * lv.trans[i];
                lv.trans_inv.push_back(t.inverse());
                lv.trans.push_back(std::move(t));
                int idx = static_cast<int>(lv.orbit.size()) - 1;
                for (int gi = 0; gi < static_cast<int>(lv.gens.size()); ++gi)
                    lv.pending.emplace_back(idx, gi);
            }
        }
    }

    /// Drains the Schreier queue of level i. Returns the level where a new
    /// strong generator was inserted, or -1 once the queue is empty.
    int process_level(size_t i) {
        Level& lv = levels_[i];
        while (!lv.pending.empty()) {
            auto [idx, gi] = lv.pending.front();
            lv.pending.pop_front();
            const Permutation& s = lv.gens[static_cast<size_t>(gi)];
            int p = lv.orbit[static_cast<size_t>(idx)];
            int sp = s[p];
            Permutation y = lv.trans_inv[static_cast<size_t>(lv.slot[static_cast<size_t>(sp)])] *
                            (s * lv.trans[static_cast<size_t>(idx)]);
            if (y.is_identity()) continue;
            auto [h, j] = strip(std::move(y), i + 1);
            if (h.is_identity()) continue;
            if (j == levels_.size()) append_level(first_moved(h));
            for (size_t l = i + 1; l <= j; ++l) add_gen_to_level(l, h);
            return static_cast<int>(j);
        }
        return -1;
    }

    void run() {
        long i = static_cast<long>(levels_.size()) - 1;
        while (i >= 0) {
            int j = process_level(static_cast<size_t>(i));
            if (j >= 0)
                i = j;
            else
                --i;
        }
    }

    void enum_rec(size_t level, const Permutation& prefix, std::vector<Permutation>& out) const {
        if (level == levels_.size()) {
            out.push_back(prefix);
            return;
        }
        for (const auto& t : levels_[level].trans) enum_rec(level + 1, prefix * t, out);
    }

    int degree_;
    std::vector<Level> levels_;
};

} // namespace detail

/// A finite permutation group with a verified stabilizer chain.
/// Immutable after construction; safe to share across threads.
class PermutationGroup {
public:
    PermutationGroup() : PermutationGroup(1) {}

    explicit PermutationGroup(int degree)
        : degree_(degree), chain_(std::make_shared<detail::StabilizerChain>(degree)), order_(1) {
        require(degree >= 1, ErrorKind::Domain, "degree must be >= 1");
    }

    PermutationGroup(int degree, const std::vector<Permutation>& generators,
                     const std::vector<int>& base_hint = {})
        : degree_(degree) {
        require(degree >= 1, ErrorKind::Domain, "degree must be >= 1");
        std::unordered_set<Permutation, PermutationHash> seen;
        for (const auto& g : generators) {
            require(g.degree() == degree, ErrorKind::Domain, "generator degree mismatch");
            if (!g.is_identity() && seen.insert(g).second) gens_.push_back(g);
        }
        chain_ = std::make_shared<detail::StabilizerChain>(degree, gens_, base_hint);
        order_ = chain_->order();
    }

    int degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return gens_; }
    const BigInt& order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    bool contains(const Permutation& p) const {
        require(p.degree() == degree_, ErrorKind::Domain, "degree mismatch in membership test");
        return chain_->contains(p);
    }

    bool is_abelian() const {
        for (size_t i = 0; i < gens_.size(); ++i)
            for (size_t j = i + 1; j < gens_.size(); ++j)
                if (!commutator(gens_[i], gens_[j]).is_identity()) return false;
        return true;
    }

    std::vector<Permutation> elements(size_t limit = size_t{1} << 22) const {
        std::vector<Permutation> out;
        chain_->elements_into(out, limit);
        return out;
    }

    std::vector<int> orbit(int point) const {
        require(point >= 0 && point < degree_, ErrorKind::Domain, "point out of range");
        std::vector<int> orb{point};
        std::vector<bool> in(static_cast<size_t>(degree_), false);
        in[static_cast<size_t>(point)] = true;
        for (size_t i = 0; i < orb.size(); ++i)
            for (const auto& g : gens_) {
                int q = g[orb[i]];
                if (!in[static_cast<size_t>(q)]) {
                    in[static_cast<size_t>(q)] = true;
                    orb.push_back(q);
                }
            }
        return orb;
    }

    bool is_transitive_on(const std::vector<int>& points) const {
        if (points.empty()) return true;
        auto orb = orbit(points[0]);
        std::vector<bool> in(static_cast<size_t>(degree_), false);
        for (int p : orb) in[static_cast<size_t>(p)] = true;
        for (int p : points)
            if (!in[static_cast<size_t>(p)]) return false;
        return true;
    }

    /// Greedy generating subset: keeps a generator only if it enlarges the
    /// group generated so far. At most log2(order) survivors.
    std::vector<Permutation> small_generating_set() const {
        detail::StabilizerChain k(degree_);
        std::vector<Permutation> out;
        for (const auto& g : gens_) {
            if (k.contains(g)) continue;
            k.add_generator(g);
            out.push_back(g);
        }
        return out;
    }

    /// Smallest subgroup containing `seeds` that is normal in *this.
    PermutationGroup normal_closure(const std::vector<Permutation>& seeds) const {
        for (const auto& s : seeds)
            require(contains(s), ErrorKind::Domain, "normal_closure seed lies outside the group");
        auto k = std::make_shared<detail::StabilizerChain>(degree_);
        std::vector<Permutation> kgens;
        std::deque<Permutation> todo(seeds.begin(), seeds.end());
        while (!todo.empty()) {
            Permutation g = std::move(todo.front());
            todo.pop_front();
            if (g.is_identity() || k->contains(g)) continue;
            k->add_generator(g);
            kgens.push_back(g);
            for (const auto& c : gens_) todo.push_back(kgens.back().conjugated_by(c));
        }
        return PermutationGroup(degree_, std::move(kgens), std::move(k));
    }

    /// [G,G] as the normal closure of the commutators of generator pairs.
    PermutationGroup derived_subgroup() const {
        std::vector<Permutation> gens = gens_.size() > 24 ? small_generating_set() : gens_;
        std::vector<Permutation> seeds;
        std::unordered_set<Permutation, PermutationHash> seen;
        for (size_t i = 0; i < gens.size(); ++i)
            for (size_t j = i + 1; j < gens.size(); ++j) {
                Permutation c = commutator(gens[i], gens[j]);
                if (!c.is_identity() && seen.insert(c).second) seeds.push_back(std::move(c));
            }
        return normal_closure(seeds);
    }

    /// Image of the action on a G-invariant partition (degree = #blocks).
    PermutationGroup induced_block_action(const std::vector<std::vector<int>>& blocks) const {
        auto block_of = validate_blocks(blocks);
        std::vector<Permutation> img;
        for (const auto& g : gens_) img.push_back(block_image(g, blocks, block_of));
        return PermutationGroup(static_cast<int>(blocks.size()), img);
    }

    /// Kernel of the action on a G-invariant partition:
    /// {g in G : g fixes every block setwise}.
    PermutationGroup induced_action_kernel(const std::vector<std::vector<int>>& blocks) const {
        auto block_of = validate_blocks(blocks);
        int nb = static_cast<int>(blocks.size());
        int ext_degree = degree_ + nb;
        std::vector<Permutation> ext_gens;
        for (const auto& g : gens_) {
            Permutation bi = block_image(g, blocks, block_of);
            std::vector<uint16_t> im(static_cast<size_t>(ext_degree));
            for (int x = 0; x < degree_; ++x) im[static_cast<size_t>(x)] = g[x];
            for (int b = 0; b < nb; ++b)
                im[static_cast<size_t>(degree_ + b)] = static_cast<uint16_t>(degree_ + bi[b]);
            ext_gens.emplace_back(std::move(im));
        }
        std::vector<int> hint;
        for (int b = 0; b < nb; ++b) hint.push_back(degree_ + b);
        detail::StabilizerChain ext(ext_degree, ext_gens, hint);
        auto kchain = std::make_shared<detail::StabilizerChain>(
            ext.suffix_restricted(static_cast<size_t>(nb), degree_));
        std::vector<Permutation> kgens = ext.level_gens_restricted(static_cast<size_t>(nb), degree_);
        return PermutationGroup(degree_, std::move(kgens), std::move(kchain));
    }

    friend bool is_subgroup(const PermutationGroup& H, const PermutationGroup& G) {
        require(H.degree() == G.degree(), ErrorKind::Domain, "degree mismatch in subgroup test");
        for (const auto& g : H.generators())
            if (!G.contains(g)) return false;
        return true;
    }

    friend bool same_group(const PermutationGroup& A, const PermutationGroup& B) {
        return A.order() == B.order() && is_subgroup(A, B);
    }

private:
    PermutationGroup(int degree, std::vector<Permutation> gens,
                     std::shared_ptr<detail::StabilizerChain> chain)
        : degree_(degree), gens_(std::move(gens)), chain_(std::move(chain)), order_(chain_->order()) {}

    std::vector<int> validate_blocks(const std::vector<std::vector<int>>& blocks) const {
        std::vector<int> block_of(static_cast<size_t>(degree_), -1);
        for (size_t b = 0; b < blocks.size(); ++b) {
            require(!blocks[b].empty(), ErrorKind::Domain, "empty block");
            for (int p : blocks[b]) {
                require(p >= 0 && p < degree_, ErrorKind::Domain, "block point out of range");
                require(block_of[static_cast<size_t>(p)] < 0, ErrorKind::Domain, "blocks overlap");
                block_of[static_cast<size_t>(p)] = static_cast<int>(b);
            }
        }
        for (int p = 0; p < degree_; ++p)
            require(block_of[static_cast<size_t>(p)] >= 0, ErrorKind::Domain,
                    "blocks do not cover all points");
        return block_of;
    }

    Permutation block_image(const Permutation& g, const std::vector<std::vector<int>>& blocks,
                            const std::vector<int>& block_of) const {
        std::vector<uint16_t> im(blocks.size());
        for (size_t b = 0; b < blocks.size(); ++b) {
            int target = block_of[static_cast<size_t>(g[blocks[b][0]])];
            for (int p : blocks[b])
                require(block_of[static_cast<size_t>(g[p])] == target, ErrorKind::Structure,
                        "generator splits block " + std::to_string(b));
            im[b] = static_cast<uint16_t>(target);
        }
        return Permutation(std::move(im));
    }

    int degree_;
    std::vector<Permutation> gens_;
    std::shared_ptr<detail::StabilizerChain> chain_;
    BigInt order_;
};

/// Prefix blocks for the lexicographic leaf numbering: k^n points cut into
/// k^j contiguous blocks of k^(n-j) leaves each.
inline std::vector<std::vector<int>> prefix_blocks(int degree, int block_count) {
    require(block_count >= 1 && degree % block_count == 0, ErrorKind::Domain, "bad block count");
    int bs = degree / block_count;
    std::vector<std::vector<int>> blocks(static_cast<size_t>(block_count));
    for (int b = 0; b < block_count; ++b)
        for (int i = 0; i < bs; ++i) blocks[static_cast<size_t>(b)].push_back(b * bs + i);
    return blocks;
}

} // namespace sft
