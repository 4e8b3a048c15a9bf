#pragma once

#include <stdexcept>

namespace dav {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed group presentation (a factor <= 1, ...).
struct invalid_group_error : error { using error::error; };

// A set claimed to be a subgroup is not closed or misses the identity.
struct invalid_subgroup_error : error { using error::error; };

// An element does not belong to the group it is used with.
struct element_domain_error : error { using error::error; };

// Bad argument value (empty subset, non-divisor modulus, ...).
struct invalid_argument_error : error { using error::error; };

// Inputs fall outside the region the implemented formulas cover.
struct unsupported_case_error : error { using error::error; };

// A stated precondition was checked and found false.
struct precondition_error : error { using error::error; };

// An internal consistency check failed; indicates a bug or bad data.
struct invariant_violation_error : error { using error::error; };

// Group order exceeds the exhaustive-search guard.
struct size_guard_error : error { using error::error; };

// A bounded search (class representative hunt, ...) ran out of budget.
struct search_budget_error : error { using error::error; };

// Malformed JSON input, cache line or table file.
struct parse_error : error { using error::error; };

} // namespace dav
