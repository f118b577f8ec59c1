#pragma once

#include <stdexcept>
#include <string>

namespace insp {

// Belief handed to an operation that requires a different category
// (e.g. filtering a failed/closed/inspected belief).
struct CategoryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The no-report observation has probability zero from the current belief,
// so the filtered posterior is undefined.
struct DegenerateUpdateError : std::domain_error {
    using std::domain_error::domain_error;
};

// Expected absorption time is infinite (some operational state cannot
// reach {D, C}).
struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

// Literal path enumeration requested beyond the supported depth.
struct EnumerationCapError : std::length_error {
    using std::length_error::length_error;
};

// Conditional plan outside its admissible domain (wait_j > T - start_t).
struct PlanDomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A simulated chain failed to absorb within the configured step cap.
struct StepCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration document could not be parsed or validated.
struct ConfigError : std::runtime_error {
    ConfigError(std::string msg, int line = 0, int column = 0)
        : std::runtime_error(std::move(msg)), line(line), column(column) {}
    int line;
    int column;
};

} // namespace insp
