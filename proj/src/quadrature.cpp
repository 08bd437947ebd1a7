#include "sdw/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>
#include <sstream>

#include "sdw/errors.hpp"

namespace sdw::quad {

namespace {

struct Panel {
  double a, b, value, error, l1;
  unsigned depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk31(const std::function<double(double)>& f, double a, double b, unsigned depth) {
  Panel p{a, b, 0.0, 0.0, 0.0, depth};
  // max_depth 0 gives a single rule; Boost leaves that error estimate in
  // the [-1, 1] variable, so rescale it here.
  p.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
  p.error *= 0.5 * (b - a);
  return p;
}

Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                unsigned max_depth) {
  Result r;
  if (a == b) return r;
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("quadrature: limits must be finite");
  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  heap.push(gk31(f, a, b, 0));
  r.value = heap.top().value;
  r.error = heap.top().error;
  r.l1 = heap.top().l1;
  // Global bisection of the worst panel.
  for (int evals = 1; !heap.empty() && evals < 5000; ++evals) {
    if (r.error <= std::max(abs_tol, rel_tol * r.l1) || !std::isfinite(r.value)) break;
    Panel worst = heap.top();
    heap.pop();
    if (worst.depth >= max_depth) {
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gk31(f, worst.a, mid, worst.depth + 1);
    const Panel right = gk31(f, mid, worst.b, worst.depth + 1);
    r.value += left.value + right.value - worst.value;
    r.error += left.error + right.error - worst.error;
    r.l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  r = Result{};
  for (; !heap.empty(); heap.pop()) done.push_back(heap.top());
  for (const Panel& p : done) {
    r.value += p.value;
    r.error += p.error;
    r.l1 += p.l1;
  }
  return r;
}

}  // namespace

Result integrate_nothrow(const std::function<double(double)>& f, double a, double b, double rel_tol,
                         unsigned max_depth) {
  return adaptive(f, a, b, rel_tol, 0.0, max_depth);
}

Result integrate_endpoint_nothrow(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  Result r;
  if (a == b) return r;
  // Map to [0, 1]: Boost's tanh-sinh misjudges convergence on very short
  // intervals.
  const double len = b - a;
  boost::math::quadrature::tanh_sinh<double> ts;
  r.value = len * ts.integrate([&](double u) { return f(a + len * u); }, 0.0, 1.0, rel_tol, &r.error, &r.l1);
  r.error *= std::abs(len);
  r.l1 *= std::abs(len);
  return r;
}

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol, unsigned max_depth) {
  Result r = adaptive(f, a, b, rel_tol, abs_tol, max_depth);
  const double target = std::max(abs_tol, rel_tol * r.l1);
  if (!(r.error <= target)) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge: error " << r.error
        << " > target " << target;
    throw NumericalFailure(msg.str(), r.error);
  }
  return r;
}

}  // namespace sdw::quad
