#pragma once

#include <cmath>
#include <functional>
#include <limits>

namespace oligo {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Denominators at or below this magnitude make a ratio undefined.
inline constexpr double kZeroDenominator = 1e-12;

// A quotient that may be undefined. Batch code keeps the flag; single-point
// callers use get(), which throws UndefinedRatio.
struct Ratio {
  double value = kNaN;

  bool defined() const { return std::isfinite(value); }
  double get(const char* what) const;
};

Ratio ratio(double num, double den);

using ScalarFn = std::function<double(double)>;

double central_difference(const ScalarFn& f, double x, double h);
// Two central differences at h and h/2 combined to cancel the h^2 term.
double richardson_difference(const ScalarFn& f, double x, double h);
double central_second_difference(const ScalarFn& f, double x, double h);

// Adaptive Gauss-Kronrod quadrature; b may be +inf.
double integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-10);

// |a - b| / max(|b|, floor).
double rel_error(double a, double b, double floor = 1e-300);

}  // namespace oligo
