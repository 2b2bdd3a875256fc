#include "neuronland/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace neuronland {
namespace {

// Gauss-Legendre 8-point nodes/weights on [-1, 1].
const double kNodes8[] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                          0.7966664774136267,  0.9602898564975363};
const double kWts8[] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

double rule_1d(const std::function<double(double)>& f, double a, double b,
               std::size_t* evals) {
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += kWts8[i] * f(m + h * kNodes8[i]);
  *evals += 8;
  return h * s;
}

struct Panel1 {
  double a, b, val, err;
};

void eval_panel_1d(const std::function<double(double)>& f, Panel1& p, std::size_t* evals) {
  const double self = rule_1d(f, p.a, p.b, evals);
  const double m = 0.5 * (p.a + p.b);
  const double kids = rule_1d(f, p.a, m, evals) + rule_1d(f, m, p.b, evals);
  p.val = kids;
  p.err = std::fabs(self - kids);
}

QuadResult adapt_1d(const std::function<double(double)>& f, std::vector<Panel1> seeds,
                    double abs_tol, std::size_t max_panels) {
  QuadResult res;
  auto cmp = [](const Panel1& l, const Panel1& r) { return l.err < r.err; };
  std::priority_queue<Panel1, std::vector<Panel1>, decltype(cmp)> heap(cmp);
  double total = 0.0, toterr = 0.0;
  for (auto& p : seeds) {
    eval_panel_1d(f, p, &res.evals);
    total += p.val;
    toterr += p.err;
    heap.push(p);
  }
  std::size_t n_panels = seeds.size();
  while (toterr > abs_tol && n_panels < max_panels && !heap.empty()) {
    Panel1 worst = heap.top();
    heap.pop();
    total -= worst.val;
    toterr -= worst.err;
    const double m = 0.5 * (worst.a + worst.b);
    for (Panel1 child : {Panel1{worst.a, m, 0, 0}, Panel1{m, worst.b, 0, 0}}) {
      eval_panel_1d(f, child, &res.evals);
      total += child.val;
      toterr += child.err;
      heap.push(child);
    }
    ++n_panels;
  }
  res.value = total;
  res.err_estimate = toterr;
  res.converged = toterr <= abs_tol;
  return res;
}

std::vector<Panel1> seed_panels(double a, double b, std::vector<double> breaks,
                                int per_piece) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  std::vector<double> cuts;
  for (double c : breaks) {
    if (c < a || c > b) continue;
    if (!cuts.empty() && c - cuts.back() < 1e-14 * (b - a)) continue;
    cuts.push_back(c);
  }
  std::vector<Panel1> seeds;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    for (int k = 0; k < per_piece; ++k)
      seeds.push_back({lo + (hi - lo) * k / per_piece,
                       lo + (hi - lo) * (k + 1) / per_piece, 0, 0});
  }
  if (seeds.empty()) seeds.push_back({a, b, 0, 0});
  return seeds;
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, std::size_t max_panels) {
  return adapt_1d(f, seed_panels(a, b, {}, 16), abs_tol, max_panels);
}

QuadResult integrate_1d_pieces(const std::function<double(double)>& f, double a, double b,
                               std::vector<double> breaks, double abs_tol,
                               std::size_t max_panels) {
  return adapt_1d(f, seed_panels(a, b, std::move(breaks), 4), abs_tol, max_panels);
}

QuadResult integrate_2d_nested(const std::function<double(double, double)>& f, double ax,
                               double bx, double ay, double by,
                               const std::vector<double>& outer_breaks,
                               const std::function<std::vector<double>(double)>& inner_breaks,
                               double abs_tol, std::size_t max_panels) {
  // Inner tolerance: evaluations of the outer integrand g(x) carry inner
  // error that integrates against the outer width.
  const double inner_tol = 0.05 * abs_tol / std::max(1.0, bx - ax);
  std::size_t inner_evals = 0;
  bool inner_ok = true;

  auto g = [&](double x) {
    auto fy = [&](double y) { return f(x, y); };
    const QuadResult r =
        integrate_1d_pieces(fy, ay, by, inner_breaks ? inner_breaks(x) : std::vector<double>{},
                            inner_tol, max_panels);
    inner_evals += r.evals;
    inner_ok = inner_ok && r.converged;
    return r.value;
  };

  QuadResult res = adapt_1d(g, seed_panels(ax, bx, outer_breaks, 4), 0.5 * abs_tol,
                            max_panels);
  res.evals = inner_evals;
  res.converged = res.converged && inner_ok;
  res.err_estimate += inner_tol * (bx - ax);
  return res;
}

}  // namespace neuronland
