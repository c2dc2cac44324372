#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lcsamp {

/// Base class for all errors thrown by this library.
class error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad dimensions, out-of-range
/// parameters, matrix not symmetric positive definite, ...).
class domain_error : public error {
  using error::error;
};

/// A model lacks a capability the operation requires (e.g. no Hessian).
class capability_error : public domain_error {
  using domain_error::domain_error;
};

/// A requested plan cannot satisfy its own guarantee with the given inputs.
class infeasible_error : public error {
  using error::error;
};

/// File or serialization failure (malformed CSV/JSON, unreadable path).
class io_error : public error {
  using error::error;
};

/// A chain produced a non-finite state; carries where it happened.
class divergence_error : public error {
 public:
  divergence_error(const std::string& what, long long chain, long long step)
      : error(what), chain(chain), step(step) {}
  long long chain = -1;  ///< chain index within the ensemble, -1 for single runs
  long long step = -1;   ///< step index at which the state became non-finite
};

/// An iterative solver hit its iteration cap; carries the last iterate.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, Eigen::VectorXd last)
      : error(what), last_iterate(std::move(last)) {}
  Eigen::VectorXd last_iterate;
};

}  // namespace lcsamp
