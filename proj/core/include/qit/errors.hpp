#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qit {

// Root of every error raised by the library. The message can be extended
// with context while the exception keeps its dynamic type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message);
  const char* what() const noexcept override { return message_.c_str(); }
  void prepend(const std::string& context);

 private:
  std::string message_;
};

// Bad input: malformed configuration, violated preconditions. CLI exit 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but the requested physics cannot be computed. CLI exit 3.
class PhysicsError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public PhysicsError {
 public:
  SamplingError(const std::string& message, std::size_t required_n);
  std::size_t required_n() const { return required_n_; }

 private:
  std::size_t required_n_;
};

class ResolutionError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class AliasingError : public PhysicsError {
 public:
  AliasingError(const std::string& message, double max_safe_distance);
  double max_safe_distance() const { return max_safe_distance_; }

 private:
  double max_safe_distance_;
};

class OutOfWindowError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class InfeasibleError : public PhysicsError {
 public:
  InfeasibleError(const std::string& message, std::string closest_candidate);
  const std::string& closest_candidate() const { return closest_; }

 private:
  std::string closest_;
};

class UndefinedSnrError : public PhysicsError {
 public:
  using PhysicsError::PhysicsError;
};

class CostError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AsymmetryError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Scenario document problems; path is a JSON-pointer-like location ("/pump/waist_m").
class ScenarioError : public ValidationError {
 public:
  ScenarioError(const std::string& path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace qit
