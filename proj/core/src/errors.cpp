#include "phasebound/errors.hpp"

namespace phasebound {

int exit_code(const Error& e) noexcept {
    return e.category() == ErrorCategory::precondition ? 2 : 1;
}

} // namespace phasebound
