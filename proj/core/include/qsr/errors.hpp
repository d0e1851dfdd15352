#pragma once

#include <stdexcept>
#include <string>

namespace qsr {

// Label text that does not name an atomic relation.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(std::string token, std::string why)
      : std::runtime_error("cannot parse label '" + token + "': " + why),
        token_(std::move(token)) {}
  const std::string& token() const { return token_; }

private:
  std::string token_;
};

// Mixing relation sets from different calculi, malformed networks, etc.
class ContractViolation : public std::logic_error {
public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Query inference produced more than one candidate relation.
class NonUniqueAnswer : public std::runtime_error {
public:
  explicit NonUniqueAnswer(const std::string& what) : std::runtime_error(what) {}
};

// Query inference produced the empty set.
class Inconsistent : public std::runtime_error {
public:
  explicit Inconsistent(const std::string& what) : std::runtime_error(what) {}
};

// Rejection sampling gave up.
class BudgetExhausted : public std::runtime_error {
public:
  BudgetExhausted(const std::string& what, int attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

private:
  int attempts_;
};

// A record references an instance id that is not in the dataset.
class JoinError : public std::runtime_error {
public:
  explicit JoinError(const std::string& what) : std::runtime_error(what) {}
};

// Trend fitting needs at least two populated buckets.
class InsufficientBuckets : public std::runtime_error {
public:
  explicit InsufficientBuckets(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsr
