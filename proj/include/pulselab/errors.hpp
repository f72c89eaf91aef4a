#pragma once

#include <stdexcept>
#include <string>

namespace pulselab {

// Elliptic solves and primitives require (numerically) mean-zero input.
struct NonZeroMean : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Time step refused: advective guard failed or non-finite values appeared.
struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void ensure(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}
} // namespace detail

} // namespace pulselab
