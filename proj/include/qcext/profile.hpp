#pragma once

#include <string>
#include <vector>

namespace qcext {

// Convex function g : R -> R describing the lower boundary of an epigraph body.
class Profile {
 public:
  enum class Kind { Parabola, ExpHypograph, Cosh, CustomPoly };

  // a*u^2 + c, a > 0.
  static Profile parabola(double a = 1.0, double c = -1.0);
  // scale*exp(-u) + shift, scale > 0.
  static Profile exp_hypograph(double scale = 1.0, double shift = -1.0);
  // a*cosh(u) + c, a > 0.
  static Profile cosh(double a = 1.0, double c = -2.0);
  // sum_i coeffs[i] u^i; must be convex.
  static Profile custom_poly(std::vector<double> coeffs);

  Kind kind() const { return kind_; }
  std::string name() const;
  // Named parameters, in a stable order, as written to JSON.
  std::vector<std::pair<std::string, double>> params() const;
  const std::vector<double>& coeffs() const { return coeffs_; }

  double value(double u) const;
  double slope(double u) const;
  double curvature(double u) const;
  // lim g'(u) as u -> -inf and u -> +inf (possibly infinite).
  double slope_at_minus_inf() const;
  double slope_at_plus_inf() const;

 private:
  Profile(Kind k, double a, double b, std::vector<double> coeffs);
  void validate() const;

  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> coeffs_;
};

}  // namespace qcext
