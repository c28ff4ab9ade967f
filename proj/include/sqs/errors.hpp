#pragma once

#include <stdexcept>
#include <string>

namespace sqs {

/// Newton inversion of the transform ran out of iterations. Indicates a
/// kernel configuration bug, not a data problem.
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// A problem spec violates one of the standing hypotheses; the message
/// names the violated hypothesis.
struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};

/// An operation that requires v > 0 on interior nodes received a field
/// with a non-positive nodal value.
struct NonPositiveField : std::runtime_error {
    explicit NonPositiveField(const std::string& what) : std::runtime_error(what) {}
};

/// Fiber scans require t > 0.
struct NonPositiveT : std::runtime_error {
    explicit NonPositiveT(const std::string& what) : std::runtime_error(what) {}
};

/// The fiber scan found its minimum on the boundary of the scan range,
/// which should be impossible for an admissible field.
struct NoInteriorMinimum : std::runtime_error {
    explicit NoInteriorMinimum(const std::string& what) : std::runtime_error(what) {}
};

/// The compatibility integral diverges for this spec; no solution exists.
struct NoCompatibility : std::runtime_error {
    explicit NoCompatibility(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sqs
