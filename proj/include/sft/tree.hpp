#pragma once

#include <cstdint>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "sft/core.hpp"
#include "sft/permutation.hpp"

namespace sft {

/// A word over the alphabet {0..k-1}; the empty word is the root.
using Word = std::vector<uint8_t>;

enum class LeafNumbering {
    Lex,      // leaf x1..xn <-> 1 + sum x_i k^(n-i)  (1-based in text I/O)
    Reversed, // leaf x1..xn <-> 1 + sum x_i k^(i-1)
};

inline const char* to_string(LeafNumbering n) { return n == LeafNumbering::Lex ? "lex" : "reversed"; }

inline long ipow(int base, int exp) {
    long r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

/// Lexicographic index of a word within its level.
inline long word_index(const Word& w, int k) {
    long i = 0;
    for (uint8_t x : w) i = i * k + x;
    return i;
}

inline Word index_to_word(long idx, int length, int k) {
    Word w(static_cast<size_t>(length));
    for (int i = length - 1; i >= 0; --i) {
        w[static_cast<size_t>(i)] = static_cast<uint8_t>(idx % k);
        idx /= k;
    }
    return w;
}

/// Automorphism of the depth-n truncation of the regular k-ary rooted tree,
/// stored as its portrait: one letter permutation per internal vertex, in
/// breadth-first lexicographic order. Immutable value type; all operations
/// are pure.
class TreeAutomorphism {
public:
    TreeAutomorphism(int k, int depth) : k_(k), depth_(depth) {
        require(k >= 2 && k <= 255, ErrorKind::Domain, "alphabet size must be in 2..255");
        require(depth >= 0, ErrorKind::Domain, "depth must be >= 0");
        perms_.resize(static_cast<size_t>(internal_vertex_count(k, depth)) * static_cast<size_t>(k));
        long nv = internal_vertex_count(k, depth);
        for (long v = 0; v < nv; ++v)
            for (int x = 0; x < k; ++x) perms_[static_cast<size_t>(v * k + x)] = static_cast<uint8_t>(x);
    }

    static TreeAutomorphism identity(int k, int depth) { return TreeAutomorphism(k, depth); }

    /// Identity portrait except the letter permutation `p` at internal vertex `v`.
    static TreeAutomorphism single_vertex(int k, int depth, const Word& v, const Permutation& p) {
        require(static_cast<int>(v.size()) < depth, ErrorKind::Domain, "vertex must be internal");
        require(p.degree() == k, ErrorKind::Domain, "letter permutation degree mismatch");
        TreeAutomorphism g(k, depth);
        uint8_t* q = g.perm_at(static_cast<int>(v.size()), word_index(v, k));
        for (int x = 0; x < k; ++x) q[x] = static_cast<uint8_t>(p[x]);
        return g;
    }

    /// Acts as `c` on the subtree rooted at `v`, trivially elsewhere.
    static TreeAutomorphism planted(int depth, const Word& v, const TreeAutomorphism& c) {
        require(static_cast<int>(v.size()) + c.depth() <= depth, ErrorKind::Domain,
                "planted subtree does not fit");
        TreeAutomorphism g(c.alphabet(), depth);
        int k = c.alphabet();
        long vidx = word_index(v, k);
        for (int l = 0; l < c.depth(); ++l) {
            long width = ipow(k, l);
            for (long i = 0; i < width; ++i) {
                const uint8_t* src = c.perm_at(l, i);
                uint8_t* dst = g.perm_at(static_cast<int>(v.size()) + l, vidx * width + i);
                std::memcpy(dst, src, static_cast<size_t>(k));
            }
        }
        return g;
    }

    int alphabet() const { return k_; }
    int depth() const { return depth_; }

    static long internal_vertex_count(int k, int depth) {
        long n = 0, w = 1;
        for (int l = 0; l < depth; ++l, w *= k) n += w;
        return n;
    }

    /// Letter permutation at internal vertex (level, lex index): image of letter x.
    uint8_t letter_image(int level, long vertex_idx, int x) const {
        return perm_at(level, vertex_idx)[x];
    }

    bool is_identity() const {
        long nv = internal_vertex_count(k_, depth_);
        for (long v = 0; v < nv; ++v)
            for (int x = 0; x < k_; ++x)
                if (perms_[static_cast<size_t>(v * k_ + x)] != x) return false;
        return true;
    }

    /// Image of a vertex; requires depth(v) <= depth(g).
    Word apply(const Word& v) const {
        require(static_cast<int>(v.size()) <= depth_, ErrorKind::Domain,
                "vertex deeper than the automorphism");
        Word out(v.size());
        long prefix = 0; // lex index of the input prefix
        for (size_t i = 0; i < v.size(); ++i) {
            out[i] = perm_at(static_cast<int>(i), prefix)[v[i]];
            prefix = prefix * k_ + v[i];
        }
        return out;
    }

    /// Lex indices of vertex images at every level, computed in one sweep.
    /// result[l][i] = lex index of the image of the level-l vertex with index i.
    std::vector<std::vector<long>> vertex_images(int max_level) const {
        require(max_level <= depth_, ErrorKind::Domain, "level out of range");
        std::vector<std::vector<long>> img(static_cast<size_t>(max_level) + 1);
        img[0] = {0};
        for (int l = 0; l < max_level; ++l) {
            long width = ipow(k_, l);
            img[static_cast<size_t>(l) + 1].resize(static_cast<size_t>(width * k_));
            for (long i = 0; i < width; ++i) {
                const uint8_t* p = perm_at(l, i);
                long base = img[static_cast<size_t>(l)][static_cast<size_t>(i)] * k_;
                for (int x = 0; x < k_; ++x)
                    img[static_cast<size_t>(l) + 1][static_cast<size_t>(i * k_ + x)] = base + p[x];
            }
        }
        return img;
    }

    /// Left action: (g*h)(v) = g(h(v)); portrait rule (gh)_(v) = g_(h(v)) h_(v).
    friend TreeAutomorphism operator*(const TreeAutomorphism& g, const TreeAutomorphism& h) {
        require(g.k_ == h.k_, ErrorKind::Domain, "alphabet mismatch in product");
        require(g.depth_ == h.depth_, ErrorKind::Domain, "depth mismatch in product");
        TreeAutomorphism r(g.k_, g.depth_);
        int k = g.k_;
        auto himg = h.vertex_images(g.depth_ > 0 ? g.depth_ - 1 : 0);
        for (int l = 0; l < g.depth_; ++l) {
            long width = ipow(k, l);
            for (long i = 0; i < width; ++i) {
                const uint8_t* ph = h.perm_at(l, i);
                const uint8_t* pg = g.perm_at(l, himg[static_cast<size_t>(l)][static_cast<size_t>(i)]);
                uint8_t* pr = r.perm_at(l, i);
                for (int x = 0; x < k; ++x) pr[x] = pg[ph[x]];
            }
        }
        return r;
    }

    /// Portrait rule (g^-1)_(v) = (g_(g^-1(v)))^-1.
    TreeAutomorphism inverse() const {
        TreeAutomorphism r(k_, depth_);
        auto img = vertex_images(depth_ > 0 ? depth_ - 1 : 0);
        for (int l = 0; l < depth_; ++l) {
            long width = ipow(k_, l);
            for (long i = 0; i < width; ++i) {
                const uint8_t* p = perm_at(l, i);
                uint8_t* q = r.perm_at(l, img[static_cast<size_t>(l)][static_cast<size_t>(i)]);
                for (int x = 0; x < k_; ++x) q[p[x]] = static_cast<uint8_t>(x);
            }
        }
        return r;
    }

    /// Section at v: the action on the subtree below v, transported to the
    /// standard subtree. Depth drops by |v|; satisfies g_(vu) = (g_(v))_(u).
    TreeAutomorphism section(const Word& v) const {
        require(static_cast<int>(v.size()) <= depth_, ErrorKind::Domain,
                "section vertex deeper than the automorphism");
        TreeAutomorphism r(k_, depth_ - static_cast<int>(v.size()));
        long vidx = word_index(v, k_);
        for (int l = 0; l < r.depth_; ++l) {
            long width = ipow(k_, l);
            std::memcpy(r.perm_at(l, 0), perm_at(static_cast<int>(v.size()) + l, vidx * width),
                        static_cast<size_t>(width * k_));
        }
        return r;
    }

    /// Truncation to depth m (0 <= m <= depth).
    TreeAutomorphism restrict(int m) const {
        require(m >= 0 && m <= depth_, ErrorKind::Domain, "restriction depth out of range");
        TreeAutomorphism r(k_, m);
        std::memcpy(r.perms_.data(), perms_.data(), r.perms_.size());
        return r;
    }

    /// The induced permutation of the k^depth leaves.
    Permutation leaf_permutation(LeafNumbering numbering = LeafNumbering::Lex) const {
        long n = ipow(k_, depth_);
        std::vector<uint16_t> im(static_cast<size_t>(n));
        if (depth_ == 0) {
            im[0] = 0;
            return Permutation(std::move(im));
        }
        auto img = vertex_images(depth_ - 1);
        long width = ipow(k_, depth_ - 1);
        for (long i = 0; i < width; ++i) {
            const uint8_t* p = perm_at(depth_ - 1, i);
            long base = img[static_cast<size_t>(depth_) - 1][static_cast<size_t>(i)] * k_;
            for (int x = 0; x < k_; ++x)
                im[static_cast<size_t>(i * k_ + x)] = static_cast<uint16_t>(base + p[x]);
        }
        Permutation lex(std::move(im));
        if (numbering == LeafNumbering::Lex) return lex;
        return relabel(lex, k_, depth_);
    }

    /// Rebuilds the portrait from a leaf permutation. Fails with the violated
    /// level if p does not preserve the prefix partition of the leaves.
    static TreeAutomorphism from_leaf_permutation(const Permutation& p, int k, int depth,
                                                  LeafNumbering numbering = LeafNumbering::Lex) {
        require(p.degree() == ipow(k, depth), ErrorKind::Domain,
                "leaf permutation degree is not k^depth");
        Permutation q = numbering == LeafNumbering::Lex ? p : relabel(p, k, depth);
        for (int t = 1; t < depth; ++t) {
            long bs = ipow(k, depth - t);
            for (long b = 0; b < ipow(k, t); ++b) {
                long pref = q[b * bs] / bs;
                for (long z = 1; z < bs; ++z)
                    require(q[b * bs + z] / bs == pref, ErrorKind::Structure,
                            "leaf permutation violates the prefix partition at level " +
                                std::to_string(t));
            }
        }
        TreeAutomorphism g(k, depth);
        for (int l = 0; l < depth; ++l) {
            long bs = ipow(k, depth - l);     // leaves under a level-l vertex
            long sub = ipow(k, depth - l - 1); // leaves under a level-(l+1) vertex
            long width = ipow(k, l);
            for (long i = 0; i < width; ++i) {
                uint8_t* perm = g.perm_at(l, i);
                for (int x = 0; x < k; ++x)
                    perm[x] = static_cast<uint8_t>((q[i * bs + x * sub] / sub) % k);
            }
        }
        return g;
    }

    friend bool operator==(const TreeAutomorphism& a, const TreeAutomorphism& b) {
        return a.k_ == b.k_ && a.depth_ == b.depth_ && a.perms_ == b.perms_;
    }
    friend bool operator!=(const TreeAutomorphism& a, const TreeAutomorphism& b) { return !(a == b); }

    /// Canonical total order: by (k, depth), then portrait bytes level by level.
    /// The identity is minimal among automorphisms of equal shape.
    friend bool operator<(const TreeAutomorphism& a, const TreeAutomorphism& b) {
        if (a.k_ != b.k_) return a.k_ < b.k_;
        if (a.depth_ != b.depth_) return a.depth_ < b.depth_;
        return a.perms_ < b.perms_;
    }

    size_t hash() const {
        size_t h = 1469598103934665603ull;
        h = (h ^ static_cast<size_t>(k_)) * 1099511628211ull;
        h = (h ^ static_cast<size_t>(depth_)) * 1099511628211ull;
        for (uint8_t b : perms_) h = (h ^ b) * 1099511628211ull;
        return h;
    }

    /// Text portrait: "k n" then one line per internal vertex (breadth-first
    /// lexicographic order) with the letter permutation in one-line notation.
    std::string to_portrait_text() const {
        std::ostringstream os;
        os << k_ << ' ' << depth_ << '\n';
        long nv = internal_vertex_count(k_, depth_);
        for (long v = 0; v < nv; ++v) {
            for (int x = 0; x < k_; ++x) {
                if (x) os << ' ';
                os << static_cast<int>(perms_[static_cast<size_t>(v * k_ + x)]);
            }
            os << '\n';
        }
        return os.str();
    }

    static TreeAutomorphism parse_portrait(const std::string& text) {
        std::istringstream is(text);
        int k = 0, n = -1;
        require(static_cast<bool>(is >> k >> n), ErrorKind::Parse, "portrait header must be \"k n\"");
        TreeAutomorphism g(k, n);
        long nv = internal_vertex_count(k, n);
        for (long v = 0; v < nv; ++v) {
            std::vector<bool> seen(static_cast<size_t>(k), false);
            for (int x = 0; x < k; ++x) {
                int im = -1;
                require(static_cast<bool>(is >> im), ErrorKind::Parse,
                        "portrait truncated: expected " + std::to_string(nv) + " vertex lines");
                require(im >= 0 && im < k && !seen[static_cast<size_t>(im)], ErrorKind::Parse,
                        "letter permutation at vertex " + std::to_string(v) + " is not a bijection");
                seen[static_cast<size_t>(im)] = true;
                g.perm_at_flat(v)[x] = static_cast<uint8_t>(im);
            }
        }
        std::string rest;
        if (is >> rest)
            fail(ErrorKind::Parse, "trailing tokens after portrait: \"" + rest + "\"");
        return g;
    }

private:
    /// Conjugates a leaf permutation by the digit-reversal relabeling.
    static Permutation relabel(const Permutation& p, int k, int depth) {
        long n = ipow(k, depth);
        std::vector<long> rev(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            long x = i, r = 0;
            for (int t = 0; t < depth; ++t) {
                r = r * k + x % k;
                x /= k;
            }
            rev[static_cast<size_t>(i)] = r;
        }
        std::vector<uint16_t> im(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i)
            im[static_cast<size_t>(rev[static_cast<size_t>(i)])] =
                static_cast<uint16_t>(rev[static_cast<size_t>(p[static_cast<int>(i)])]);
        return Permutation(std::move(im));
    }

    uint8_t* perm_at(int level, long idx) {
        return perms_.data() + static_cast<size_t>((level_offset(level) + idx) * k_);
    }
    const uint8_t* perm_at(int level, long idx) const {
        return perms_.data() + static_cast<size_t>((level_offset(level) + idx) * k_);
    }
    uint8_t* perm_at_flat(long vertex) { return perms_.data() + static_cast<size_t>(vertex * k_); }
    long level_offset(int level) const { return internal_vertex_count(k_, level); }

    int k_;
    int depth_;
    std::vector<uint8_t> perms_;
};

struct TreeAutomorphismHash {
    size_t operator()(const TreeAutomorphism& g) const { return g.hash(); }
};

} // namespace sft
