#include "oligo/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <string>

#include "oligo/errors.hpp"

namespace oligo {

double Ratio::get(const char* what) const {
  if (!defined()) throw UndefinedRatio(std::string(what) + ": zero or non-finite denominator");
  return value;
}

Ratio ratio(double num, double den) {
  if (!std::isfinite(num) || !std::isfinite(den) || std::abs(den) <= kZeroDenominator) return Ratio{};
  return Ratio{num / den};
}

double central_difference(const ScalarFn& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

double richardson_difference(const ScalarFn& f, double x, double h) {
  double d1 = central_difference(f, x, h);
  double d2 = central_difference(f, x, h / 2);
  return (4 * d2 - d1) / 3;
}

double central_second_difference(const ScalarFn& f, double x, double h) {
  return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
}

double integrate(const ScalarFn& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0, l1 = 0, v = 0;
  if (std::isfinite(a) && std::isfinite(b)) {
    // Map onto [-1, 1] so the library's error estimate is in the same units as
    // the integral; on short intervals it otherwise drives recursion to the limit.
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto g = [&](double x) { return f(mid + half * x); };
    v = GK::integrate(g, -1.0, 1.0, 15, 1e-12, &err, &l1);
    v *= half;
    err *= std::abs(half);
    l1 *= std::abs(half);
  } else {
    v = GK::integrate(f, a, b, 15, 1e-12, &err, &l1);
  }
  if (!std::isfinite(v)) throw OracleError("quadrature produced a non-finite value");
  if (err > std::max(abs_tol, 1e-9 * l1)) {
    throw OracleError("quadrature error estimate " + std::to_string(err) + " above tolerance");
  }
  return v;
}

double rel_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace oligo
