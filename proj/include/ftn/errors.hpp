#pragma once

#include <stdexcept>
#include <string>

namespace ftn {

// Invalid parameter combinations (unsupported QAM order, bad band split, ...).
// The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Length/alignment mismatch between producer and consumer of a block.
struct FramingError : std::runtime_error {
    explicit FramingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data violates a structural promise (e.g. non-Hermitian spectrum fed to the
// real-valued modulator).
struct IntegrityError : std::runtime_error {
    explicit IntegrityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Channel estimate unusable (gain magnitude below threshold on some bin).
struct DegenerateChannelError : std::runtime_error {
    explicit DegenerateChannelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bit-loading target cannot be met under the per-bin caps.
struct AllocationError : std::runtime_error {
    explicit AllocationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file (config, CSV, channel table).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ftn
