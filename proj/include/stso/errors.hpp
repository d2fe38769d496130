#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stso {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed expression source. Carries the byte offset of the failure and
// the set of tokens that would have been accepted there.
class ParseError : public Error {
public:
    ParseError(std::string msg, std::size_t position, std::vector<std::string> expected)
        : Error(format(msg, position, expected)),
          position_(position),
          expected_(std::move(expected)),
          brief_(std::move(msg)) {}

    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& brief() const noexcept { return brief_; }

private:
    static std::string format(const std::string& msg, std::size_t pos,
                              const std::vector<std::string>& expected) {
        std::string out = msg + " at offset " + std::to_string(pos);
        if (!expected.empty()) {
            out += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) out += expected.size() == 2 ? " or " : (i + 1 == expected.size() ? ", or " : ", ");
                out += expected[i];
            }
            out += ")";
        }
        return out;
    }

    std::size_t position_;
    std::vector<std::string> expected_;
    std::string brief_;
};

// Expression evaluation hit a division by zero (or an equally fatal
// arithmetic condition) at a concrete index.
class EvalError : public Error {
public:
    using Error::Error;
};

// Operator description violates a model invariant (non-finite eigenvalue,
// inconsistent limit points, bad interval, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

// A matrix was detected as non-diagonalizable.
class DefectiveMatrixError : public ModelError {
public:
    using ModelError::ModelError;
};

// A similarity transform was rejected as (numerically) singular.
class SingularMatrixError : public ModelError {
public:
    using ModelError::ModelError;
};

// A decision procedure could not certify its answer at the working
// truncation. Deliberately distinct from a wrong answer.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

// Point classification landed inside the undecidable band around an atom
// at the working truncation: reported, never guessed.
class UndeterminedClassification : public InconclusiveError {
public:
    using InconclusiveError::InconclusiveError;
};

// An operation's stated precondition does not hold for the given operator.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Some eigenvalue lies in the punctured disk 0 < |lambda| < gamma, so the
// gap-inverse construction is not applicable.
class AnnulusViolationError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Operator spec file could not be parsed or fails schema validation.
class SpecParseError : public Error {
public:
    using Error::Error;
};

}  // namespace stso
