#pragma once

#include <stdexcept>
#include <string>

namespace boa {

// Error taxonomy shared by every module. All conditions that violate an
// operation precondition throw one of these; callers that cross a process
// boundary (the CLI) translate them into machine-readable error lines.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Vector/matrix length disagreement between arguments.
struct DimensionError : Error {
    using Error::Error;
};

// Value outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Malformed, truncated or version-incompatible file.
struct FormatError : Error {
    using Error::Error;
};

// Arguments that are individually valid but mutually inconsistent.
struct ConsistencyError : Error {
    using Error::Error;
};

// API misuse, e.g. stepping a terminated environment.
struct UsageError : Error {
    using Error::Error;
};

// Invalid EnvSpec or unknown task/agent/mode name.
struct SpecError : Error {
    using Error::Error;
};

// Index construction failure.
struct BuildError : Error {
    using Error::Error;
};

// Query with arguments the index cannot serve (e.g. k > size).
struct QueryError : Error {
    using Error::Error;
};

// Policy fitting failure (empty dataset, shape mismatch).
struct FitError : Error {
    using Error::Error;
};

// Scripted demonstrator cannot reach its objective.
struct ExpertError : Error {
    using Error::Error;
};

// Demonstration recording exhausted its retry budget.
struct RecordError : Error {
    using Error::Error;
};

}  // namespace boa
