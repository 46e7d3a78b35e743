// errors.hpp - exception taxonomy shared by all modules

#ifndef KSEP_ERRORS_HPP
#define KSEP_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace ksep {

// Malformed input text (graph files, solution files, red files).
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A size/parameter guard on an exact or exponential routine was violated.
struct guard_error : std::runtime_error {
    explicit guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver exhausted its round budget. Carries the last iterate.
struct convergence_error : std::runtime_error {
    convergence_error(const std::string& msg, std::vector<double> iterate)
        : std::runtime_error(msg), last_iterate(std::move(iterate)) {}
    std::vector<double> last_iterate;
};

// An internal invariant failed; indicates a bug, not bad input.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace ksep

#endif  // KSEP_ERRORS_HPP
