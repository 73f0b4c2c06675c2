#pragma once

#include <stdexcept>
#include <string>

namespace sigkit {

// Malformed arguments: bad shapes, zero dim/depth, mismatched operands.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Recoverable capacity failure, e.g. the parallel kernel refusing a grid
// point whose intermediates would exceed its memory cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Training diverged (non-finite loss). Carries the epoch that failed.
class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& what, int epoch)
        : std::runtime_error(what), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

// Input file could not be parsed. Message includes the offending line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sigkit
