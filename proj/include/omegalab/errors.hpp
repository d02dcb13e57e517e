#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omegalab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a value was violated (n = 0 for gamma, d = 1 for an
/// expansion, subtraction below zero, a real outside [0,1), ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class LoadError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A candidate program needed for an answer has not been decided yet
/// (budget-limited, or below an unexplored part of the tree).
class UnresolvedCandidate : public Error {
public:
  UnresolvedCandidate(std::size_t index, const std::string& candidate)
      : Error("candidate " + std::to_string(index) + " (\"" + candidate +
              "\") is unresolved"),
        index_(index),
        candidate_(candidate) {}

  std::size_t index() const noexcept { return index_; }
  const std::string& candidate() const noexcept { return candidate_; }

private:
  std::size_t index_;
  std::string candidate_;
};

/// A dovetailing search ran out of budget before its stopping condition.
class Inconclusive : public Error {
public:
  using Error::Error;
};

/// More candidates halted than the count the caller asserted.
class ContradictionError : public Error {
public:
  using Error::Error;
};

class NotAProgram : public Error {
public:
  using Error::Error;
};

class EvaluatorError : public Error {
public:
  EvaluatorError(std::size_t index, const std::string& what)
      : Error("evaluator failed at index " + std::to_string(index) + ": " + what),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

}  // namespace omegalab
