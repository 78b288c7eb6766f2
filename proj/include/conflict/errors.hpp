#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conflict {

// Malformed graph structure (self-loops, out-of-range vertices).
class StructuralError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Generator or operation called with parameters outside its domain.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition of an algorithm does not hold.
class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

// A configured budget (colourings, constraints, swaps) was exceeded.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Randomised generator gave up after its retry budget.
class GenerationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string & what) :
        std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace conflict
