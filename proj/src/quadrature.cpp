#include "asymgreen/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>

namespace asymgreen {

namespace {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel make_panel(const std::function<double(double)>& fn, double a, double b) {
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(fn, a, b, 0, 0, &err);
  return {a, b, v, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           const std::vector<double>& breaks, const QuadratureOptions& opt) {
  QuadratureResult res;
  if (a == b) return res;
  double sign = 1;
  if (a > b) {
    std::swap(a, b);
    sign = -1;
  }
  std::vector<double> pts{a};
  std::vector<double> sorted = breaks;
  std::sort(sorted.begin(), sorted.end());
  for (double p : sorted)
    if (p > a && p < b) pts.push_back(p);
  pts.push_back(b);

  std::priority_queue<Panel> heap;
  double total = 0, total_err = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Panel p = make_panel(fn, pts[i], pts[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int panels = static_cast<int>(heap.size());
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (panels >= opt.max_panels)
      throw QuadratureError("quadrature did not converge: estimated error " + std::to_string(total_err));
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw QuadratureError("quadrature panel width underflow near " + std::to_string(worst.a));
    Panel l = make_panel(fn, worst.a, mid), r = make_panel(fn, mid, worst.b);
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
    if (!std::isfinite(total)) throw QuadratureError("non-finite integrand value");
  }
  // re-sum to shed accumulated cancellation from the running updates
  double sum = 0, err = 0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sign * sum;
  res.error = err;
  res.panels = panels;
  return res;
}

}  // namespace asymgreen
