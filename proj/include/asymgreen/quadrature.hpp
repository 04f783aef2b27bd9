#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace asymgreen {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;
  int panels = 0;
};

// Adaptive bisection with 21-point Gauss-Kronrod panels.  `breaks` are
// interior points where the integrand may be non-smooth; the integrand is
// then only sampled strictly inside each smooth segment.
QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           const std::vector<double>& breaks = {}, const QuadratureOptions& opt = {});

}  // namespace asymgreen
