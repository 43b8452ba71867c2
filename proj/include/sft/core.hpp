#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace sft {

// Exact group orders: |Aut X^[8]| = 2^255 already exceeds machine words.
using BigInt = boost::multiprecision::cpp_int;

enum class ErrorKind {
    Domain,    // argument outside an operation's domain (depth mismatch, bad level)
    Structure, // data fails a structural invariant (non-bijection, split block, bad file)
    Parse,     // unreadable input text
    Resource,  // configured bound exceeded; raising the bound may help
    Internal,  // invariant the library itself guarantees was violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

inline BigInt big_pow(BigInt base, unsigned long exp) {
    BigInt r = 1;
    while (exp > 0) {
        if (exp & 1) r *= base;
        base *= base;
        exp >>= 1;
    }
    return r;
}

} // namespace sft
