#pragma once

#include <stdexcept>
#include <string>

namespace tdt {

// Base for every failure raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error("invalid argument: " + msg) {}
};

// Parameters outside the region where a formula or branch is defined.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

class NumericalInstability : public Error {
 public:
  explicit NumericalInstability(const std::string& msg)
      : Error("numerical instability: " + msg) {}
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& msg) : Error("bracket error: " + msg) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error("no convergence: " + msg) {}
};

// The normal phase is not a stable ground state: some Bogoliubov branch is imaginary or negative.
class UnstableSpectrum : public Error {
 public:
  UnstableSpectrum(const std::string& msg, double q)
      : Error("unstable normal-phase spectrum: " + msg), q_(q) {}
  double q() const noexcept { return q_; }

 private:
  double q_;
};

}  // namespace tdt
