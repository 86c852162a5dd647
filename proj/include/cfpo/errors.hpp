#pragma once

#include <stdexcept>
#include <string>

namespace cfpo {

/// Invalid input data or precondition violation. CLI exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured size/search budget was exceeded. CLI exit code 3.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cfpo
