#pragma once

#include <stdexcept>
#include <string>

namespace psik {

// Raised when a request exceeds a hard capability limit: the simulator qubit
// cap, the discrete-log table cap, or an exhausted search budget. The CLI
// maps this to its own exit code so callers can tell "too big" from "wrong".
class cap_error : public std::runtime_error {
  public:
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace psik
