#include "qcext/profile.hpp"

#include <cmath>

#include "qcext/vec2.hpp"

namespace qcext {

Profile::Profile(Kind k, double a, double b, std::vector<double> coeffs)
    : kind_(k), a_(a), b_(b), coeffs_(std::move(coeffs)) {
  validate();
}

Profile Profile::parabola(double a, double c) { return Profile(Kind::Parabola, a, c, {}); }
Profile Profile::exp_hypograph(double scale, double shift) { return Profile(Kind::ExpHypograph, scale, shift, {}); }
Profile Profile::cosh(double a, double c) { return Profile(Kind::Cosh, a, c, {}); }
Profile Profile::custom_poly(std::vector<double> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(0.0);
  return Profile(Kind::CustomPoly, 0.0, 0.0, std::move(coeffs));
}

void Profile::validate() const {
  switch (kind_) {
    case Kind::Parabola:
    case Kind::ExpHypograph:
    case Kind::Cosh:
      if (!(a_ > 0.0) || !std::isfinite(a_) || !std::isfinite(b_))
        throw Error("profile " + name() + " needs a positive leading parameter");
      return;
    case Kind::CustomPoly: {
      for (double c : coeffs_)
        if (!std::isfinite(c)) throw Error("custom_poly coefficients must be finite");
      const std::size_t deg = coeffs_.size() - 1;
      if (deg >= 2 && (deg % 2 != 0 || coeffs_.back() <= 0.0))
        throw Error("custom_poly must have even degree with positive leading coefficient");
      for (int i = 0; i <= 400; ++i) {
        const double u = -20.0 + 0.1 * i;
        const double h = 1e-3;
        const double scale = 1.0 + std::abs(value(u));
        if (value(u - h) + value(u + h) - 2.0 * value(u) < -1e-9 * scale)
          throw Error("custom_poly profile is not convex near u = " + std::to_string(u));
      }
      return;
    }
  }
}

std::string Profile::name() const {
  switch (kind_) {
    case Kind::Parabola: return "parabola";
    case Kind::ExpHypograph: return "exp_hypograph";
    case Kind::Cosh: return "cosh";
    case Kind::CustomPoly: return "custom_poly";
  }
  return "?";
}

std::vector<std::pair<std::string, double>> Profile::params() const {
  switch (kind_) {
    case Kind::Parabola: return {{"a", a_}, {"c", b_}};
    case Kind::ExpHypograph: return {{"scale", a_}, {"shift", b_}};
    case Kind::Cosh: return {{"a", a_}, {"c", b_}};
    case Kind::CustomPoly: return {};
  }
  return {};
}

double Profile::value(double u) const {
  switch (kind_) {
    case Kind::Parabola: return a_ * u * u + b_;
    case Kind::ExpHypograph: return a_ * std::exp(-u) + b_;
    case Kind::Cosh: return a_ * std::cosh(u) + b_;
    case Kind::CustomPoly: {
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
      return acc;
    }
  }
  return 0.0;
}

double Profile::slope(double u) const {
  switch (kind_) {
    case Kind::Parabola: return 2.0 * a_ * u;
    case Kind::ExpHypograph: return -a_ * std::exp(-u);
    case Kind::Cosh: return a_ * std::sinh(u);
    case Kind::CustomPoly: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * u + static_cast<double>(i) * coeffs_[i];
      return acc;
    }
  }
  return 0.0;
}

double Profile::curvature(double u) const {
  switch (kind_) {
    case Kind::Parabola: return 2.0 * a_;
    case Kind::ExpHypograph: return a_ * std::exp(-u);
    case Kind::Cosh: return a_ * std::cosh(u);
    case Kind::CustomPoly: {
      double acc = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 2;)
        acc = acc * u + static_cast<double>(i * (i - 1)) * coeffs_[i];
      return acc;
    }
  }
  return 0.0;
}

double Profile::slope_at_minus_inf() const {
  switch (kind_) {
    case Kind::Parabola:
    case Kind::ExpHypograph:
    case Kind::Cosh: return -kInf;
    case Kind::CustomPoly:
      if (coeffs_.size() == 1) return 0.0;
      if (coeffs_.size() == 2) return coeffs_[1];
      return -kInf;
  }
  return -kInf;
}

double Profile::slope_at_plus_inf() const {
  switch (kind_) {
    case Kind::Parabola:
    case Kind::Cosh: return kInf;
    case Kind::ExpHypograph: return 0.0;
    case Kind::CustomPoly:
      if (coeffs_.size() == 1) return 0.0;
      if (coeffs_.size() == 2) return coeffs_[1];
      return kInf;
  }
  return kInf;
}

}  // namespace qcext
