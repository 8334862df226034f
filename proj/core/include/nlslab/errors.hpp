#pragma once

#include <stdexcept>
#include <string>

namespace nlslab {

// Exit status categories used by the command line tool.
enum class ErrorKind { invalid_argument, config, numerical, assertion };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::invalid_argument, what) {}
};

class ConfigError : public Error {
public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(ErrorKind::config, path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

// Non-finite state during time stepping.
class BlowUp : public NumericalError {
public:
  explicit BlowUp(double t)
      : NumericalError("non-finite state at t = " + std::to_string(t)), time_(t) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

class ConvergenceFailure : public NumericalError {
public:
  ConvergenceFailure(const std::string& what, double residual)
      : NumericalError(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

// W-map spin-up certificate failed: the window still depends on the start time.
class NotConverged : public NumericalError {
public:
  explicit NotConverged(double distance)
      : NumericalError("spin-up certificate failed, windows differ by " + std::to_string(distance)),
        distance_(distance) {}
  double distance() const noexcept { return distance_; }

private:
  double distance_;
};

class Overflow : public NumericalError {
public:
  explicit Overflow(const std::string& name)
      : NumericalError("non-finite value in " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

}  // namespace nlslab
