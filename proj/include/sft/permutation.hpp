#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <vector>

#include "sft/core.hpp"

namespace sft {

/// A permutation of {0, ..., degree-1}, stored as its image array.
/// Text I/O (cycle notation) is 1-based; everything in memory is 0-based.
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(int degree) : images_(static_cast<size_t>(degree)) {
        std::iota(images_.begin(), images_.end(), uint16_t{0});
    }

    explicit Permutation(std::vector<uint16_t> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (uint16_t im : images_) {
            require(im < images_.size() && !seen[im], ErrorKind::Structure,
                    "image array is not a bijection");
            seen[im] = true;
        }
    }

    static Permutation identity(int degree) { return Permutation(degree); }

    int degree() const { return static_cast<int>(images_.size()); }
    uint16_t operator[](int point) const { return images_[static_cast<size_t>(point)]; }
    const std::vector<uint16_t>& images() const { return images_; }

    bool is_identity() const {
        for (size_t i = 0; i < images_.size(); ++i)
            if (images_[i] != i) return false;
        return true;
    }

    /// Left action: (g*h)(x) = g(h(x)).
    friend Permutation operator*(const Permutation& g, const Permutation& h) {
        require(g.degree() == h.degree(), ErrorKind::Domain, "degree mismatch in product");
        Permutation r;
        r.images_.resize(g.images_.size());
        for (size_t x = 0; x < g.images_.size(); ++x) r.images_[x] = g.images_[h.images_[x]];
        return r;
    }

    Permutation inverse() const {
        Permutation r;
        r.images_.resize(images_.size());
        for (size_t x = 0; x < images_.size(); ++x) r.images_[images_[x]] = static_cast<uint16_t>(x);
        return r;
    }

    /// h^-1 * g * h
    Permutation conjugated_by(const Permutation& h) const { return h.inverse() * (*this * h); }

    std::vector<std::vector<int>> cycles(bool include_fixed = false) const {
        std::vector<std::vector<int>> out;
        std::vector<bool> seen(images_.size(), false);
        for (size_t s = 0; s < images_.size(); ++s) {
            if (seen[s]) continue;
            std::vector<int> cyc;
            size_t x = s;
            while (!seen[x]) {
                seen[x] = true;
                cyc.push_back(static_cast<int>(x));
                x = images_[x];
            }
            if (cyc.size() > 1 || include_fixed) out.push_back(std::move(cyc));
        }
        return out;
    }

    /// Order = lcm of cycle lengths.
    uint64_t order() const {
        uint64_t r = 1;
        for (const auto& c : cycles()) r = std::lcm(r, static_cast<uint64_t>(c.size()));
        return r;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }
    friend bool operator!=(const Permutation& a, const Permutation& b) { return !(a == b); }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.images_ < b.images_; }

    size_t hash() const {
        size_t h = 1469598103934665603ull;
        for (uint16_t v : images_) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }

    /// Cycle notation, 1-based, fixed points omitted; identity prints as "()".
    std::string to_cycle_string() const {
        auto cs = cycles();
        if (cs.empty()) return "()";
        std::ostringstream os;
        for (const auto& c : cs) {
            os << '(';
            for (size_t i = 0; i < c.size(); ++i) {
                if (i) os << ',';
                os << c[i] + 1;
            }
            os << ')';
        }
        return os.str();
    }

    /// Parses 1-based cycle notation, e.g. "(1,9)(2,10)"; "()" is the identity.
    static Permutation parse_cycles(const std::string& text, int degree) {
        Permutation p(degree);
        size_t i = 0;
        auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
        skip_ws();
        require(i < text.size(), ErrorKind::Parse, "empty permutation text");
        std::vector<bool> used(static_cast<size_t>(degree), false);
        while (i < text.size()) {
            skip_ws();
            if (i == text.size()) break;
            require(text[i] == '(', ErrorKind::Parse,
                    "expected '(' at position " + std::to_string(i) + " in \"" + text + "\"");
            ++i;
            std::vector<int> cyc;
            skip_ws();
            while (i < text.size() && text[i] != ')') {
                size_t j = i;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                require(j > i, ErrorKind::Parse, "expected point number at position " + std::to_string(i));
                int pt = std::stoi(text.substr(i, j - i));
                require(pt >= 1 && pt <= degree, ErrorKind::Parse,
                        "point " + std::to_string(pt) + " out of range 1.." + std::to_string(degree));
                require(!used[static_cast<size_t>(pt - 1)], ErrorKind::Parse,
                        "point " + std::to_string(pt) + " appears twice");
                used[static_cast<size_t>(pt - 1)] = true;
                cyc.push_back(pt - 1);
                i = j;
                skip_ws();
                if (i < text.size() && text[i] == ',') {
                    ++i;
                    skip_ws();
                }
            }
            require(i < text.size(), ErrorKind::Parse, "unterminated cycle in \"" + text + "\"");
            ++i; // ')'
            require(cyc.size() != 1, ErrorKind::Parse, "cycle of length 1 is not allowed");
            for (size_t t = 0; t < cyc.size(); ++t)
                p.images_[static_cast<size_t>(cyc[t])] = static_cast<uint16_t>(cyc[(t + 1) % cyc.size()]);
            skip_ws();
        }
        return p;
    }

private:
    std::vector<uint16_t> images_;
};

/// [a,b] = a^-1 b^-1 a b
inline Permutation commutator(const Permutation& a, const Permutation& b) {
    return a.inverse() * (b.inverse() * (a * b));
}

struct PermutationHash {
    size_t operator()(const Permutation& p) const { return p.hash(); }
};

} // namespace sft
