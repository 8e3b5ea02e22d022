#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fj {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

class SingularMatrixError : public Error {
 public:
  explicit SingularMatrixError(const std::string& what) : Error(what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

// Thrown when a steady state is requested but the dynamics do not settle,
// e.g. oblivious agents sitting on a periodic independent strongly
// connected component.
class NoSteadyStateError : public Error {
 public:
  explicit NoSteadyStateError(const std::string& what) : Error(what) {}
};

class InfeasibleDesignError : public InvalidArgument {
 public:
  explicit InfeasibleDesignError(const std::string& what)
      : InvalidArgument(what) {}
};

}  // namespace fj
