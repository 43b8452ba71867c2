#pragma once

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sft/core.hpp"
#include "sft/pattern.hpp"
#include "sft/tree.hpp"

namespace sft {

// Pattern-group file format:
//   header line:  k d
//   section line: "generators:" followed by portrait blocks in the tree
//                 portrait format ("k n" + one line per internal vertex), or
//                 "leafperms:" followed by one cycle-notation line per
//                 generator (1-based points on the k^d leaves).
// Blank lines and lines starting with '#' are ignored. Generators are closed
// to the full element list on load.

namespace detail {

struct LineReader {
    std::vector<std::string> lines;
    size_t pos = 0;

    explicit LineReader(std::istream& in) {
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }

    static bool blank(const std::string& s) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) return c == '#';
        return true;
    }

    /// Next meaningful line and its 1-based number.
    std::optional<std::pair<int, std::string>> next() {
        while (pos < lines.size()) {
            size_t i = pos++;
            if (!blank(lines[i])) return std::make_pair(static_cast<int>(i) + 1, lines[i]);
        }
        return std::nullopt;
    }
};

inline std::string trimmed(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

} // namespace detail

inline PatternGroup parse_pattern_group(std::istream& in,
                                        LeafNumbering numbering = LeafNumbering::Lex,
                                        size_t element_bound = size_t{1} << 16) {
    detail::LineReader r(in);
    auto header = r.next();
    require(header.has_value(), ErrorKind::Parse, "line 1: missing \"k d\" header");
    int k = 0, d = 0;
    {
        std::istringstream hs(header->second);
        std::string extra;
        require(static_cast<bool>(hs >> k >> d) && !(hs >> extra), ErrorKind::Parse,
                "line " + std::to_string(header->first) + ": header must be \"k d\"");
        require(k >= 2, ErrorKind::Parse,
                "line " + std::to_string(header->first) + ": alphabet size must be >= 2");
        require(d >= 1, ErrorKind::Parse,
                "line " + std::to_string(header->first) + ": depth must be >= 1");
    }
    auto section = r.next();
    require(section.has_value(), ErrorKind::Parse,
            "missing \"generators:\" or \"leafperms:\" section");
    std::string kind = detail::trimmed(section->second);
    std::vector<TreeAutomorphism> gens;
    if (kind == "leafperms:") {
        long degree = ipow(k, d);
        while (auto line = r.next()) {
            Permutation p;
            try {
                p = Permutation::parse_cycles(detail::trimmed(line->second), static_cast<int>(degree));
            } catch (const Error& e) {
                fail(ErrorKind::Parse, "line " + std::to_string(line->first) + ": " + e.what());
            }
            try {
                gens.push_back(TreeAutomorphism::from_leaf_permutation(p, k, d, numbering));
            } catch (const Error& e) {
                fail(ErrorKind::Structure, "line " + std::to_string(line->first) + ": " + e.what());
            }
        }
    } else if (kind == "generators:") {
        while (auto first = r.next()) {
            int bk = 0, bd = 0;
            std::istringstream bs(first->second);
            require(static_cast<bool>(bs >> bk >> bd), ErrorKind::Parse,
                    "line " + std::to_string(first->first) + ": portrait block must start with \"k n\"");
            require(bk == k && bd == d, ErrorKind::Parse,
                    "line " + std::to_string(first->first) +
                        ": portrait block shape disagrees with the file header");
            std::ostringstream block;
            block << bk << ' ' << bd << '\n';
            long nv = TreeAutomorphism::internal_vertex_count(k, d);
            for (long v = 0; v < nv; ++v) {
                auto line = r.next();
                require(line.has_value(), ErrorKind::Parse,
                        "portrait block starting at line " + std::to_string(first->first) +
                            " is truncated (needs " + std::to_string(nv) + " vertex lines)");
                block << line->second << '\n';
            }
            try {
                gens.push_back(TreeAutomorphism::parse_portrait(block.str()));
            } catch (const Error& e) {
                fail(ErrorKind::Parse,
                     "portrait block starting at line " + std::to_string(first->first) + ": " + e.what());
            }
        }
    } else {
        fail(ErrorKind::Parse, "line " + std::to_string(section->first) +
                                   ": expected \"generators:\" or \"leafperms:\", got \"" + kind + "\"");
    }
    return PatternGroup::from_generators(k, d, gens, element_bound);
}

inline PatternGroup parse_pattern_group_text(const std::string& text,
                                             LeafNumbering numbering = LeafNumbering::Lex,
                                             size_t element_bound = size_t{1} << 16) {
    std::istringstream is(text);
    return parse_pattern_group(is, numbering, element_bound);
}

enum class PatternFileStyle { LeafPerms, Portraits };

inline std::string serialize_pattern_group(const PatternGroup& P,
                                           LeafNumbering numbering = LeafNumbering::Lex,
                                           PatternFileStyle style = PatternFileStyle::LeafPerms) {
    std::ostringstream os;
    os << P.alphabet() << ' ' << P.depth() << '\n';
    if (style == PatternFileStyle::LeafPerms) {
        os << "leafperms:\n";
        for (const auto& g : P.generators())
            os << g.leaf_permutation(numbering).to_cycle_string() << '\n';
    } else {
        os << "generators:\n";
        for (const auto& g : P.generators()) os << g.to_portrait_text();
    }
    return os.str();
}

} // namespace sft
