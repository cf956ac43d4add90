#pragma once

#include <stdexcept>
#include <string>

namespace qmse {

// All recoverable failures surface as Error. `kind` is a stable slug
// (e.g. "unbalanced-parentheses", "qubit-limit") that callers and the
// CLI error reporter can branch on without parsing prose.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(std::string kind, const std::string& message) {
    throw Error(std::move(kind), message);
}

} // namespace qmse
