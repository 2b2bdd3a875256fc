#include "neuronland/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "neuronland/rng.hpp"

namespace neuronland {

namespace {
const double kSqrt3 = 1.7320508075688772935;
const double kLaplaceScale = 0.70710678118654752440;  // variance 1
}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kStandardGaussian: return "standard_gaussian";
    case Family::kIsotropicCube: return "isotropic_cube";
    case Family::kIsotropicLaplace: return "isotropic_laplace";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "standard_gaussian" || name == "gaussian") return Family::kStandardGaussian;
  if (name == "isotropic_cube" || name == "cube") return Family::kIsotropicCube;
  if (name == "isotropic_laplace" || name == "laplace") return Family::kIsotropicLaplace;
  throw std::invalid_argument("unknown marginal family '" + name + "'");
}

MarginalSpec default_marginal(Family family, int dim) {
  require(dim >= 1, "marginal dimension must be >= 1");
  MarginalSpec s;
  s.family = family;
  s.dim = dim;
  switch (family) {
    case Family::kStandardGaussian:
      // min density on the unit box is exp(-1)/(2 pi) ~ 0.0585
      s.L = 0.05;
      s.R = 1.0;
      break;
    case Family::kIsotropicCube:
      // uniform density (2 sqrt 3)^-2 = 1/12 on its support
      s.L = 1.0 / 12.0;
      s.R = 1.0;
      break;
    case Family::kIsotropicLaplace:
      // axis-pair density at the worst unit-box corner after rotation
      s.L = 0.025;
      s.R = 1.0;
      break;
  }
  return s;
}

double marginal_pdf1(Family f, double t) {
  switch (f) {
    case Family::kStandardGaussian:
      return normal_pdf(t);
    case Family::kIsotropicCube:
      return std::fabs(t) <= kSqrt3 ? 1.0 / (2.0 * kSqrt3) : 0.0;
    case Family::kIsotropicLaplace:
      return std::exp(-std::fabs(t) / kLaplaceScale) / (2.0 * kLaplaceScale);
  }
  return 0.0;
}

double marginal_cdf1(Family f, double t) {
  switch (f) {
    case Family::kStandardGaussian:
      return normal_cdf(t);
    case Family::kIsotropicCube:
      if (t <= -kSqrt3) return 0.0;
      if (t >= kSqrt3) return 1.0;
      return (t + kSqrt3) / (2.0 * kSqrt3);
    case Family::kIsotropicLaplace:
      return t < 0.0 ? 0.5 * std::exp(t / kLaplaceScale)
                     : 1.0 - 0.5 * std::exp(-t / kLaplaceScale);
  }
  return 0.0;
}

double marginal_icdf1(Family f, double u) {
  switch (f) {
    case Family::kStandardGaussian:
      return normal_icdf(u);
    case Family::kIsotropicCube:
      return (2.0 * u - 1.0) * kSqrt3;
    case Family::kIsotropicLaplace:
      return u < 0.5 ? kLaplaceScale * std::log(2.0 * u)
                     : -kLaplaceScale * std::log(2.0 * (1.0 - u));
  }
  return 0.0;
}

double marginal_support_halfwidth(Family f) {
  switch (f) {
    case Family::kStandardGaussian: return 10.0;   // tail mass < 1e-22
    case Family::kIsotropicCube: return kSqrt3;
    case Family::kIsotropicLaplace: return 40.0;   // tail mass < 1e-24
  }
  return 0.0;
}

void sample_rows(const MarginalSpec& spec, std::size_t n, std::uint64_t seed, double* out) {
  require(n >= 1, "sample: n must be >= 1");
  const std::size_t d = static_cast<std::size_t>(spec.dim);
  const Family f = spec.family;
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = marginal_icdf1(f, uniform01(seed, i, j));
  });
}

std::vector<double> sample(const MarginalSpec& spec, std::size_t n, std::uint64_t seed) {
  std::vector<double> out(n * static_cast<std::size_t>(spec.dim));
  sample_rows(spec, n, seed, out.data());
  return out;
}

namespace {

void check_frame(const MarginalSpec& spec, const Frame2& V) {
  require(V.v1.size() == static_cast<std::size_t>(spec.dim) && V.v2.size() == V.v1.size(),
          "projected_density: frame dimension mismatch");
  const double g11 = dot(V.v1, V.v1) - 1.0;
  const double g22 = dot(V.v2, V.v2) - 1.0;
  const double g12 = dot(V.v1, V.v2);
  require(std::fabs(g11) <= 1e-8 && std::fabs(g22) <= 1e-8 && std::fabs(g12) <= 1e-8,
          "projected_density: frame is not orthonormal");
}

// True when each frame vector is (up to sign) a standard basis vector.
bool axis_pair(const Frame2& V, int* i_out, int* j_out) {
  auto axis_of = [](const Vec& v, int* idx) {
    int found = -1;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (std::fabs(std::fabs(v[k]) - 1.0) <= 1e-12) {
        if (found >= 0) return false;
        found = static_cast<int>(k);
      } else if (std::fabs(v[k]) > 1e-12) {
        return false;
      }
    }
    *idx = found;
    return found >= 0;
  };
  int i = -1, j = -1;
  if (!axis_of(V.v1, &i) || !axis_of(V.v2, &j) || i == j) return false;
  *i_out = i;
  *j_out = j;
  return true;
}

}  // namespace

double projected_density(const MarginalSpec& spec, const Frame2& V, double px, double py) {
  check_frame(spec, V);
  if (spec.family == Family::kStandardGaussian) {
    // rotation invariant: every 2-d projection is a standard 2-d gaussian
    return normal_pdf(px) * normal_pdf(py);
  }
  int i = -1, j = -1;
  if (axis_pair(V, &i, &j)) {
    const double sx = V.v1[i] > 0 ? px : -px;
    const double sy = V.v2[j] > 0 ? py : -py;
    return marginal_pdf1(spec.family, sx) * marginal_pdf1(spec.family, sy);
  }
  if (spec.dim == 2) {
    // In-plane rotation: the projected density is the original density at V p.
    const double x = V.v1[0] * px + V.v2[0] * py;
    const double y = V.v1[1] * px + V.v2[1] * py;
    return marginal_pdf1(spec.family, x) * marginal_pdf1(spec.family, y);
  }
  throw std::invalid_argument(
      "projected_density: no closed form for rotated frames of this family with d > 2");
}

namespace {

std::vector<Frame2> certification_frames(const MarginalSpec& spec) {
  const int d = spec.dim;
  std::vector<Frame2> frames;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      frames.push_back({basis_vector(d, i), basis_vector(d, j)});
  if (d == 1) {
    // Degenerate: certify the single coordinate against a synthetic pair by
    // pairing the axis with itself is meaningless; 2-d conditions need d >= 2.
    return frames;
  }
  const bool rotations_supported = spec.family == Family::kStandardGaussian || d == 2;
  if (rotations_supported) {
    for (int k = 0; k < 32; ++k) {
      if (d == 2) {
        const double a = uniform01(0xC0FFEE, k, 0) * 2.0 * M_PI;
        frames.push_back({{std::cos(a), std::sin(a)}, {-std::sin(a), std::cos(a)}});
      } else {
        // Gram-Schmidt on two gaussian vectors.
        Vec a(d), b(d);
        for (int c = 0; c < d; ++c) {
          a[c] = normal_icdf(uniform01(0xC0FFEE, k, 2 * c));
          b[c] = normal_icdf(uniform01(0xC0FFEE, k, 2 * c + 1));
        }
        a = unit(a);
        axpy(-dot(b, a), a, b);
        b = unit(b);
        frames.push_back({a, b});
      }
    }
  }
  return frames;
}

}  // namespace

CertReport certify_well_behaved(const MarginalSpec& spec, double L, double R,
                                double grid_step) {
  require(grid_step > 0.0 && grid_step <= 0.05, "certify_well_behaved: grid_step <= 0.05");
  require(spec.dim >= 2, "certify_well_behaved: needs dim >= 2 for planar projections");
  CertReport rep;
  rep.name = family_name(spec.family);

  const auto frames = certification_frames(spec);

  // Lower bound: density >= L on the sup-norm box of radius R.
  double worst_lo = 1e300, at_lo = 0.0;
  for (const auto& V : frames) {
    const int m = static_cast<int>(std::ceil(R / grid_step));
    for (int ix = -m; ix <= m; ++ix) {
      for (int iy = -m; iy <= m; ++iy) {
        const double px = std::clamp(ix * grid_step, -R, R);
        const double py = std::clamp(iy * grid_step, -R, R);
        const double margin = projected_density(spec, V, px, py) - L;
        if (margin < worst_lo) {
          worst_lo = margin;
          at_lo = std::max(std::fabs(px), std::fabs(py));
        }
      }
    }
  }
  rep.conditions.push_back({"density >= L on the R-box", worst_lo, at_lo});

  // Upper bound: density <= (1/L) exp(-L ||x||) out to radius 50. Dense grid
  // near the origin, then radial spokes (both sides shrink exponentially).
  double worst_hi = 1e300, at_hi = 0.0;
  auto upper_margin = [&](const Frame2& V, double px, double py) {
    const double r = std::hypot(px, py);
    return (1.0 / L) * std::exp(-L * r) - projected_density(spec, V, px, py);
  };
  for (const auto& V : frames) {
    const int m = static_cast<int>(std::ceil(3.0 / grid_step));
    for (int ix = -m; ix <= m; ++ix) {
      for (int iy = -m; iy <= m; ++iy) {
        const double margin = upper_margin(V, ix * grid_step, iy * grid_step);
        if (margin < worst_hi) {
          worst_hi = margin;
          at_hi = std::hypot(ix * grid_step, iy * grid_step);
        }
      }
    }
    for (int a = 0; a < 256; ++a) {
      const double ang = 2.0 * M_PI * a / 256;
      for (double r = 3.0; r <= 50.0; r += grid_step * 4.0) {
        const double margin = upper_margin(V, r * std::cos(ang), r * std::sin(ang));
        if (margin < worst_hi) {
          worst_hi = margin;
          at_hi = r;
        }
      }
    }
  }
  rep.conditions.push_back({"density <= (1/L) exp(-L r)", worst_hi, at_hi});

  rep.pass = true;
  for (const auto& c : rep.conditions) rep.pass = rep.pass && c.margin >= -1e-12;
  return rep;
}

double ks_statistic(Family f, Vec s) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = marginal_cdf1(f, s[i]);
    d = std::max(d, std::fabs(c - (i + 1) / n));
    d = std::max(d, std::fabs(c - i / n));
  }
  return d;
}

}  // namespace neuronland
