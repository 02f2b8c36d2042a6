#pragma once

#include <stdexcept>

namespace coev {

/// An operation was invoked on an object whose state does not permit it
/// (unevaluated individuals, a bandit with no arms, ...).
class IllegalState : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace coev
