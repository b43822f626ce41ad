#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace masmc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad protocol parameters (counts, sizes, modulus).
struct ConfigError : Error {
    using Error::Error;
};

// Argument outside an operation's mathematical domain.
struct DomainError : Error {
    using Error::Error;
};

// Scenario file rejected; message carries "path:line: what".
struct ParseError : Error {
    using Error::Error;
};

struct InvalidFragmentCount : Error {
    using Error::Error;
};

struct EmptyShareVector : Error {
    using Error::Error;
};

struct NonceReuse : Error {
    using Error::Error;
};

struct AuthFailure : Error {
    using Error::Error;
};

struct DuplicateFragment : Error {
    using Error::Error;
};

struct MissingFragments : Error {
    // (party_index, fragment_index) pairs the decision maker still expects
    std::vector<std::pair<uint32_t, uint32_t>> missing;

    MissingFragments(std::string what, std::vector<std::pair<uint32_t, uint32_t>> m)
        : Error(std::move(what)), missing(std::move(m)) {}
};

struct InsufficientAgents : Error {
    using Error::Error;
};

struct EmptyTally : Error {
    using Error::Error;
};

} // namespace masmc
