#pragma once

#include <stdexcept>
#include <string>

namespace erwalk {

/// Argument outside the domain of a function (n < 2, p outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A closed form could not be evaluated to working precision.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The evaluator handed to a monotone inverter is not decreasing on its bracket.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data carries no information about p.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance too large for exhaustive enumeration.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A replication failed; the message names the (p, rep) cell.
class ReplicationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CSV / config input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace erwalk
