#pragma once

#include <stdexcept>
#include <string>

namespace hgr {

// Base for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken data invariant (bad graph, bad hierarchy, bad input values).
struct ValidationError : Error {
    using Error::Error;
};

// Filesystem / serialization failures, including checksum mismatches.
struct IoError : Error {
    using Error::Error;
};

// Model-backend failures: transport errors after retries, malformed or
// unparsable responses. The raw payload is included where available.
struct ProviderError : Error {
    using Error::Error;
};

// Bad configuration values or unsatisfiable parameter combinations.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace hgr
