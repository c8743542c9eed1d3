#pragma once

#include <stdexcept>
#include <string>

namespace oel {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotReadyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace oel
