#include "qit/errors.hpp"

#include <utility>

namespace qit {

Error::Error(const std::string& message) : std::runtime_error(message), message_(message) {}

void Error::prepend(const std::string& context) { message_ = context + ": " + message_; }

SamplingError::SamplingError(const std::string& message, std::size_t required_n)
    : PhysicsError(message + " (need N >= " + std::to_string(required_n) + ")"),
      required_n_(required_n) {}

AliasingError::AliasingError(const std::string& message, double max_safe_distance)
    : PhysicsError(message + " (max safe distance " + std::to_string(max_safe_distance) + " m)"),
      max_safe_distance_(max_safe_distance) {}

InfeasibleError::InfeasibleError(const std::string& message, std::string closest_candidate)
    : PhysicsError(message + "; closest candidate: " + closest_candidate),
      closest_(std::move(closest_candidate)) {}

ScenarioError::ScenarioError(const std::string& path, const std::string& message)
    : ValidationError((path.empty() ? std::string("/") : path) + ": " + message), path_(path) {}

}  // namespace qit
