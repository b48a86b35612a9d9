#pragma once

#include <stdexcept>
#include <string>

namespace vcz {

/// Malformed or contract-violating input (bad dimensions, non-PD Hessian, t out of range).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The CBF-QP has an empty feasible set at some (c, t).
class QpInfeasible : public std::runtime_error {
 public:
  QpInfeasible(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// The true state left the confinement zone: ||x - c|| >= r_c.
class ConfinementBreach : public std::runtime_error {
 public:
  ConfinementBreach(const std::string& what, double e_hat)
      : std::runtime_error(what), e_hat_(e_hat) {}
  double e_hat() const { return e_hat_; }

 private:
  double e_hat_;
};

/// Scenario file syntax/semantic error; names the offending key and line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, std::string key, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + (key.empty() ? "" : " [" + key + "]") +
                           ": " + msg),
        line_(line),
        key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

}  // namespace vcz
