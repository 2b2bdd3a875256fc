#include "neuronland/activations.hpp"

#include <cmath>
#include <stdexcept>

#include "neuronland/common.hpp"

namespace neuronland {

double ramp(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("ramp: non-finite input");
  if (t < -1.0) return -1.0;
  if (t > 1.0) return 1.0;
  return t;
}

double hat_ramp(double t) {
  if (t <= -2.0) return -1.0;
  if (t <= -1.0) return 1.0;
  if (t <= 1.0) return -t;
  if (t <= 2.0) return -1.0;
  return 1.0;
}

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logistic_deriv(double t) {
  const double s = logistic(t);
  return s * (1.0 - s);
}

double tanh_deriv(double t) {
  const double c = std::cosh(t);
  if (!std::isfinite(c)) return 0.0;
  return 1.0 / (c * c);
}

double ramp_deriv(double t) { return (t >= -1.0 && t < 1.0) ? 1.0 : 0.0; }

const double kTwoOverSqrtPi = 1.1283791670955125739;

}  // namespace

SigmoidalActivation builtin_sigmoidal(const std::string& name) {
  SigmoidalActivation s;
  if (name == "logistic") {
    s.act = {"logistic", logistic, logistic_deriv, {}};
    s.tau = 0.19;
    s.mu = 1.0;
    s.xi = 1.0;
    s.tail_note =
        "logistic'(t) = s(1-s) <= exp(-|t|) since s(1-s) <= min(s, 1-s) <= exp(-|t|); "
        "the ratio logistic'(t)*exp(|t|) is decreasing in |t| beyond the grid";
  } else if (name == "tanh") {
    s.act = {"tanh", [](double t) { return std::tanh(t); }, tanh_deriv, {}};
    s.tau = 0.4;
    s.mu = 1.0;
    s.xi = 1.4;
    s.tail_note =
        "tanh'(t) = sech^2(t) <= 4 exp(-2|t|) <= 1.4 exp(-|t|) for |t| >= log(4/1.4); "
        "grid covers the crossover region";
  } else if (name == "ramp") {
    // Figure-of-merit certified at (1, 1, 3); the derivative vanishes outside
    // [-1, 1] so any positive envelope works there.
    s.act = {"ramp", ramp, ramp_deriv, {-1.0, 1.0}};
    s.tau = 1.0;
    s.mu = 1.0;
    s.xi = 3.0;
    s.tail_note = "ramp'(t) = 0 for |t| > 1; envelope is trivially satisfied off the grid";
  } else if (name == "erf") {
    s.act = {"erf", [](double t) { return std::erf(t); },
             [](double t) { return kTwoOverSqrtPi * std::exp(-t * t); }, {}};
    s.tau = 0.41;
    s.mu = 1.0;
    s.xi = 1.5;
    s.tail_note =
        "erf'(t)*exp(|t|) = (2/sqrt(pi)) exp(|t| - t^2) peaks at |t| = 1/2 and decays "
        "monotonically beyond; grid covers the peak";
  } else {
    throw std::invalid_argument("builtin_sigmoidal: unknown activation '" + name + "'");
  }
  return s;
}

UnboundedActivation builtin_unbounded(const std::string& name, std::optional<double> shape) {
  UnboundedActivation u;
  if (name == "relu") {
    u.act = {"relu", [](double t) { return t > 0.0 ? t : 0.0; },
             [](double t) { return t >= 0.0 ? 1.0 : 0.0; }, {0.0}};
    u.alpha = 1.0;
    u.lambda = 1.0;
  } else if (name == "leaky_relu") {
    require(shape.has_value(), "leaky_relu requires a slope");
    const double slope = *shape;
    require(slope > 0.0 && slope <= 1.0, "leaky_relu slope must lie in (0, 1]");
    u.act = {"leaky_relu",
             [slope](double t) { return t > 0.0 ? t : slope * t; },
             [slope](double t) { return t >= 0.0 ? 1.0 : slope; },
             {0.0}};
    u.alpha = 1.0;
    u.lambda = 1.0;  // both pieces have slope <= 1
  } else if (name == "elu") {
    require(shape.has_value(), "elu requires a scale");
    const double scale = *shape;
    require(scale > 0.0, "elu scale must be positive");
    u.act = {"elu",
             [scale](double t) { return t > 0.0 ? t : scale * (std::exp(t) - 1.0); },
             [scale](double t) { return t >= 0.0 ? 1.0 : scale * std::exp(t); },
             {0.0}};
    u.alpha = 1.0;
    u.lambda = std::max(1.0, scale);
  } else if (name == "softplus") {
    u.act = {"softplus",
             [](double t) { return t > 30.0 ? t : std::log1p(std::exp(t)); },
             logistic, {}};
    u.alpha = 0.5;  // derivative is the logistic, minimized at t = 0 on [0, inf)
    u.lambda = 1.0;
  } else {
    throw std::invalid_argument("builtin_unbounded: unknown activation '" + name + "'");
  }
  return u;
}

namespace {

bool on_kink(const Activation& act, double t, double tol) {
  for (double k : act.kinks)
    if (std::fabs(t - k) < tol) return true;
  return false;
}

// Nudge a grid point off declared kinks so one-sided derivative conventions
// do not produce spurious violations; stays within [lo, hi].
double kink_adjust(const Activation& act, double t, double step, double lo = -1e300,
                   double hi = 1e300) {
  if (!on_kink(act, t, 0.25 * step)) return t;
  const double left = t - 0.5 * step;
  if (left >= lo) return left;
  return std::min(t + 0.5 * step, hi);
}

}  // namespace

CertReport certify_sigmoidal(const SigmoidalActivation& s, double grid_step) {
  require(grid_step > 0.0 && grid_step <= 0.01, "certify_sigmoidal: grid_step in (0, 0.01]");
  CertReport rep;
  rep.name = s.act.name;

  // Monotone on [-50, 50].
  {
    double worst = 1e300, at = 0.0;
    double prev = s.act.eval(-50.0);
    for (double t = -50.0 + grid_step; t <= 50.0 + 0.5 * grid_step; t += grid_step) {
      const double cur = s.act.eval(t);
      if (cur - prev < worst) {
        worst = cur - prev;
        at = t;
      }
      prev = cur;
    }
    rep.conditions.push_back({"non-decreasing", worst, at});
  }

  // Derivative floor on [-1, 1].
  {
    double worst = 1e300, at = 0.0;
    for (double t = -1.0; t <= 1.0 + 0.5 * grid_step; t += grid_step) {
      const double tt = kink_adjust(s.act, std::min(t, 1.0), grid_step, -1.0, 1.0);
      const double m = s.act.deriv(tt) - s.tau;
      if (m < worst) {
        worst = m;
        at = tt;
      }
    }
    rep.conditions.push_back({"derivative >= tau on [-1,1]", worst, at});
  }

  // Exponential envelope on [-50, 50]; tails documented per activation.
  {
    double worst = 1e300, at = 0.0;
    for (double t = -50.0; t <= 50.0 + 0.5 * grid_step; t += grid_step) {
      const double tt = kink_adjust(s.act, t, grid_step);
      const double m = s.xi * std::exp(-s.mu * std::fabs(tt)) - s.act.deriv(tt);
      if (m < worst) {
        worst = m;
        at = tt;
      }
    }
    rep.conditions.push_back({"derivative <= xi*exp(-mu|t|)", worst, at});
  }

  rep.pass = true;
  for (const auto& c : rep.conditions) rep.pass = rep.pass && c.margin >= -1e-12;
  return rep;
}

CertReport certify_unbounded(const UnboundedActivation& u, double grid_step) {
  require(grid_step > 0.0 && grid_step <= 0.01, "certify_unbounded: grid_step in (0, 0.01]");
  CertReport rep;
  rep.name = u.act.name;

  {
    double worst = 1e300, at = 0.0;
    double prev = u.act.eval(-50.0);
    for (double t = -50.0 + grid_step; t <= 50.0 + 0.5 * grid_step; t += grid_step) {
      const double cur = u.act.eval(t);
      if (cur - prev < worst) {
        worst = cur - prev;
        at = t;
      }
      prev = cur;
    }
    rep.conditions.push_back({"non-decreasing", worst, at});
  }

  {
    double worst = 1e300, at = 0.0;
    for (double t = 0.0; t <= 50.0 + 0.5 * grid_step; t += grid_step) {
      const double tt = std::max(0.0, kink_adjust(u.act, t, grid_step));
      const double m = u.act.deriv(tt) - u.alpha;
      if (m < worst) {
        worst = m;
        at = tt;
      }
    }
    rep.conditions.push_back({"derivative >= alpha on [0,inf)", worst, at});
  }

  {
    double worst = 1e300, at = 0.0;
    for (double t = -50.0; t <= 50.0 + 0.5 * grid_step; t += grid_step) {
      const double tt = kink_adjust(u.act, t, grid_step);
      const double m = u.lambda - std::fabs(u.act.deriv(tt));
      if (m < worst) {
        worst = m;
        at = tt;
      }
    }
    rep.conditions.push_back({"derivative <= lambda (Lipschitz)", worst, at});
  }

  rep.pass = true;
  for (const auto& c : rep.conditions) rep.pass = rep.pass && c.margin >= -1e-12;
  return rep;
}

std::pair<Activation, double> normalize_at_zero(const Activation& act) {
  const double offset = act.eval(0.0);
  Activation shifted = act;
  shifted.name = act.name + "_zeroed";
  shifted.eval = [e = act.eval, offset](double t) { return e(t) - offset; };
  return {shifted, offset};
}

}  // namespace neuronland
