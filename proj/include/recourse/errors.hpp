#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recourse {

// State or index outside its declared domain.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Invalid problem instance: graph, tables, classifier or model file.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Instance too large for the configured budget or the platform integer.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditioning on a factual configuration with zero probability.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller used an operation outside its precondition (e.g. bounding a sink action).
class MisuseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Observational distribution incompatible with the graph / confounding structure.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Short tag for reports: "domain", "model", ..., "unknown".
inline std::string_view error_kind(const std::exception& e) {
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const ModelError*>(&e)) return "model";
  if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
  if (dynamic_cast<const ConditioningError*>(&e)) return "conditioning";
  if (dynamic_cast<const MisuseError*>(&e)) return "misuse";
  if (dynamic_cast<const InfeasibleError*>(&e)) return "infeasible";
  if (dynamic_cast<const TimeoutError*>(&e)) return "timeout";
  if (dynamic_cast<const InternalError*>(&e)) return "internal";
  return "unknown";
}

}  // namespace recourse
