#pragma once

#include <stdexcept>
#include <string>

namespace sumidx {

/// Invalid argument domain (m < 1, p <= 0, mismatched shapes). Caller bug;
/// the CLI maps these to usage errors.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A hypothesis of the formula being evaluated does not hold for the
/// requested parameters. The message names the violated condition.
class region_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No exactness result covers the parameters; callers fall back to bounds.
class no_exact_result_error : public region_error {
public:
    using region_error::region_error;
};

/// No lower-bound formula covers the parameters.
class no_known_lower_error : public region_error {
public:
    using region_error::region_error;
};

/// The formula does not apply for a structural reason (odd degree where an
/// even one is required, complex field where a real one is required).
class inapplicable_error : public region_error {
public:
    using region_error::region_error;
};

/// Tensor or enumeration size exceeds the configured budget.
class size_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unusable runtime data: nonpositive ratios, zero norms, empty input.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Artifact or form file does not match the expected schema. The message
/// names the offending field.
class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency check failed. Always an implementation bug, never a
/// user error.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace sumidx
