#pragma once

#include <stdexcept>
#include <string>

namespace capflow {

// Argument outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

// Base of the two ways a special-function kernel can refuse to answer.
class SpecialFunctionError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Parameters hit a pole (non-positive integer denominator, gamma pole in a
// connection coefficient, logarithmic case of a linear transformation).
class DegenerateParametersError : public SpecialFunctionError
{
public:
  using SpecialFunctionError::SpecialFunctionError;
};

// Iteration cap reached. Carries the last estimate; callers must not trust it.
class ConvergenceError : public SpecialFunctionError
{
public:
  ConvergenceError(const std::string& what, double best_estimate, int iterations)
    : SpecialFunctionError(what), best_estimate_(best_estimate), iterations_(iterations)
  {
  }

  double best_estimate() const noexcept { return best_estimate_; }
  int iterations() const noexcept { return iterations_; }

private:
  double best_estimate_;
  int iterations_;
};

// Neither the analytic route nor the quadrature fallback produced a value.
class EvaluationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace capflow
