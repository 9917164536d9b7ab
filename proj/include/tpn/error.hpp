#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tpn {

// Library error carrying a stable machine-readable name ("domain-error",
// "infeasible-skewness", ...) in front of the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void raise(std::string name, const std::string& detail) {
    throw Error(std::move(name), detail);
}

} // namespace tpn
