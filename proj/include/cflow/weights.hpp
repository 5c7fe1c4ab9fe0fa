#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cflow {

/// Raised when an input (file, instance description, solver argument)
/// is rejected. Carries a human-readable reason.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-edge concave objective f on [0, cap] with f(0) = 0.
///
/// The gradient w(x) = f'(x) is non-increasing.  At kinks the gradient()
/// query returns the right-derivative (the left segment at x == cap), so
/// gradient(x) is the marginal value of the next unit of flow, while
/// gradient_before(x) is the marginal value of the unit just below x.
class WeightFunction {
public:
  virtual ~WeightFunction() = default;

  double cap() const { return cap_; }

  virtual double value(double x) const = 0;
  virtual double gradient(double x) const = 0;

  /// Marginal gradient of the mass just below x. Equals gradient(x) for
  /// smooth families; the previous segment at piecewise breakpoints.
  virtual double gradient_before(double x) const { return gradient(x); }

  /// Largest d in [0, cap-x] such that every unit added in (x, x+d] has
  /// marginal gradient >= theta. Returns 0 when the next unit is already
  /// below theta.
  virtual double forward_headroom(double x, double theta) const = 0;

  /// Largest d in [0, x] such that every unit removed from (x-d, x] has
  /// marginal gradient <= theta. Returns 0 when the unit below x is
  /// already above theta.
  virtual double backward_headroom(double x, double theta) const = 0;

  virtual double min_gradient() const = 0;
  virtual double max_gradient() const = 0;

  virtual bool is_linear() const { return false; }
  virtual double linear_weight() const {
    throw std::logic_error("weight function is not linear");
  }

  /// Weight-spec text form ("lin 4", "quad 9 1", ...). Families that exist
  /// only behind the API have none.
  virtual std::string spec() const {
    throw std::logic_error("weight function has no text form");
  }

protected:
  explicit WeightFunction(double cap);
  void check_domain(double x) const;

  double cap_;
};

using WeightPtr = std::shared_ptr<const WeightFunction>;

/// f(x) = w * x.
WeightPtr make_linear(double w, double cap);

/// f(x) = a*x - b*x^2 with b >= 0; gradient a - 2bx.
WeightPtr make_quadratic(double a, double b, double cap);

/// Step-gradient family: gradient g[i] on [x[i-1], x[i]) with x[0] = 0
/// implied, breakpoints strictly increasing and ending at cap, gradients
/// strictly decreasing. f is the integral of the step.
WeightPtr make_piecewise(std::vector<double> breakpoints,
                         std::vector<double> gradients, double cap);

/// Caller-supplied non-increasing gradient with declared bounds. value()
/// integrates the gradient by adaptive quadrature (relative tolerance
/// 1e-10); headrooms solve by bisection to absolute tolerance `flow_tol`.
WeightPtr make_generic(std::function<double(double)> gradient,
                       double grad_lower, double grad_upper, double cap,
                       double flow_tol = -1.0);

/// base(x) + bump*x above `knee`, linear ramp of matching value below.
/// Used by the gradient-padding preprocessor for families that cannot
/// absorb the ramp exactly.
WeightPtr make_padded(WeightPtr base, double bump, double knee);

}  // namespace cflow
