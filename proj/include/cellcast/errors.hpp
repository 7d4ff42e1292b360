#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cellcast {

// Input that does not satisfy a documented file or value contract.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax error while reading a text file; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ImputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A row whose history (or target) mean is zero cannot be scaled.
class DegenerateRowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cellcast
