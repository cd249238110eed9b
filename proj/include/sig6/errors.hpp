#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace sig6 {

/// Argument outside the domain of an operation (x ∉ [0,1), κ ∉ (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iteration ran past its cap: series terms, Newton steps, quadrature
/// panels or integrator steps.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuation stopped short of its target.
class FlowBreakdownError : public std::runtime_error {
 public:
  FlowBreakdownError(const std::string& what, std::complex<double> where,
                     double abs_p)
      : std::runtime_error(what), where_(where), abs_p_(abs_p) {}

  std::complex<double> where() const { return where_; }
  double abs_p() const { return abs_p_; }

 private:
  std::complex<double> where_;
  double abs_p_;
};

/// The signature-6 flow reached the singular set |∂| <= 1e-8.
class SingularityError : public FlowBreakdownError {
 public:
  using FlowBreakdownError::FlowBreakdownError;
};

/// The adaptive step fell below 1e-13 times the segment length. Near a
/// zero of ∂ the solution behaves like a square root and the step control
/// gives up here before |∂| reaches 1e-8.
class StepUnderflowError : public FlowBreakdownError {
 public:
  using FlowBreakdownError::FlowBreakdownError;
};

}  // namespace sig6
