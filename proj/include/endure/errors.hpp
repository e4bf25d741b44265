#ifndef ENDURE_ERRORS_HPP
#define ENDURE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace endure {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleBounds : std::runtime_error {
    explicit InfeasibleBounds(const std::string& msg) : std::runtime_error(msg) {}
};

struct SolverFailed : std::runtime_error {
    explicit SolverFailed(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidRegion : std::runtime_error {
    explicit InvalidRegion(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergenceInfinite : std::runtime_error {
    explicit DivergenceInfinite(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyHistory : std::runtime_error {
    explicit EmptyHistory(const std::string& msg) : std::runtime_error(msg) {}
};

struct ZeroCost : std::runtime_error {
    explicit ZeroCost(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidRange : std::runtime_error {
    explicit InvalidRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct CategoryUnsatisfiable : std::runtime_error {
    explicit CategoryUnsatisfiable(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace endure

#endif
