#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "twotier/errors.hpp"

namespace twotier {

/// 15-point Kronrod / 7-point Gauss rule on [a, b].  Returns the Kronrod
/// estimate and writes |K15 - G7| into *err.  Both rules use open nodes,
/// so integrable endpoint singularities are never evaluated.
template <class F>
double gauss_kronrod_15(F&& f, double a, double b, double* err) {
  // Nodes/weights of the 15-point Kronrod extension of the 7-point
  // Gauss-Legendre rule on [-1, 1] (positive half; the rule is symmetric).
  static const double xgk[8] = {
      0.991455371120812639206854697526329,
      0.949107912342758524526189684047851,
      0.864864423359769072789712788640926,
      0.741531185599394439863864773280788,
      0.586087235467691130294144838258730,
      0.405845151377397166906606412076961,
      0.207784955007898467600689403773245,
      0.000000000000000000000000000000000};
  static const double wgk[8] = {
      0.022935322010529224963732008058970,
      0.063092092629978553290700663189204,
      0.104790010322250183839876322541518,
      0.140653259715525918745189590510238,
      0.169004726639267902826583426598550,
      0.190350578064785409913256402421014,
      0.204432940075298892414161999234649,
      0.209482141084727828012999174891714};
  static const double wg[4] = {
      0.129484966168869693270611432679082,
      0.279705391489276667901467771423780,
      0.381830050505118944950369775488975,
      0.417959183673469387755102040816327};

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = wgk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += wgk[j] * fsum;
    if (j % 2 == 1) gauss += wg[j / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  if (err) *err = std::abs(kronrod - gauss);
  return kronrod;
}

/// Adaptive bisection driven by the embedded G7/K15 error estimate.
/// Throws QuadratureFailure if the tolerance cannot be met.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 48) {
  if (!(a <= b)) throw DomainError("integrate: need a <= b");
  if (a == b) return 0.0;
  struct Segment {
    double a, b, value, error;
    int depth;
  };
  double err0 = 0.0;
  const double v0 = gauss_kronrod_15(f, a, b, &err0);
  std::vector<Segment> active{{a, b, v0, err0, 0}};
  double total = v0;
  double total_err = err0;
  // Split the worst segment until the summed error estimate is in budget.
  while (total_err > abs_tol) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      if (active[i].error > active[worst].error) worst = i;
    }
    Segment seg = active[worst];
    if (seg.depth >= max_depth) {
      throw QuadratureFailure("integrate: refinement limit reached");
    }
    const double mid = 0.5 * (seg.a + seg.b);
    double el = 0.0, er = 0.0;
    const double vl = gauss_kronrod_15(f, seg.a, mid, &el);
    const double vr = gauss_kronrod_15(f, mid, seg.b, &er);
    total += vl + vr - seg.value;
    total_err += el + er - seg.error;
    active[worst] = {seg.a, mid, vl, el, seg.depth + 1};
    active.push_back({mid, seg.b, vr, er, seg.depth + 1});
    if (active.size() > 4096) {
      throw QuadratureFailure("integrate: too many subdivisions");
    }
  }
  return total;
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n) {
    if (n < 1) throw DomainError("GaussLegendre: need n >= 1");
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      // Standard starting guess for the i-th root of P_n.
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        // Evaluate P_n and P_n' by the three-term recurrence.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double step = p1 / dp;
        x -= step;
        if (std::abs(step) < 1e-15) break;
      }
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }

  /// Integrate f over [a, b] with this fixed rule.
  template <class F>
  double apply(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc += weights[i] * f(mid + half * nodes[i]);
    }
    return acc * half;
  }
};

}  // namespace twotier
