#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cdpoly/errors.hpp"

namespace cdpoly {

struct GaussRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

namespace detail {

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
// diag is overwritten with eigenvalues; off[i] couples i and i+1 (off.back() unused).
// first_row tracks row 0 of the accumulated eigenvector matrix.
inline void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first_row) {
  const int n = static_cast<int>(diag.size());
  const double eps = std::numeric_limits<double>::epsilon();
  off.resize(static_cast<std::size_t>(n), 0.0);
  off[static_cast<std::size_t>(n - 1)] = 0.0;
  auto d = [&](int i) -> double& { return diag[static_cast<std::size_t>(i)]; };
  auto e = [&](int i) -> double& { return off[static_cast<std::size_t>(i)]; };
  auto z = [&](int i) -> double& { return first_row[static_cast<std::size_t>(i)]; };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw QuadratureError("tridiagonal eigensolver did not converge");
      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool deflated = false;
      for (; i >= l; --i) {
        double f = s * e(i);
        const double b = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * b;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - b;
        f = z(i + 1);
        z(i + 1) = s * z(i) + c * f;
        z(i) = c * z(i) - s * f;
      }
      if (deflated) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    } while (m != l);
  }
}

}  // namespace detail

/// Gauss-Jacobi rule on [-1,1] for the weight (1-t)^alpha (1+t)^beta,
/// alpha, beta > -1, from the Jacobi matrix of the monic recurrence.
inline GaussRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw QuadratureError("Gauss-Jacobi needs at least one node");
  if (!(alpha > -1.0 && beta > -1.0)) throw QuadratureError("Jacobi exponents must exceed -1");
  const double ab = alpha + beta;
  std::vector<double> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n), 0.0);
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    diag[static_cast<std::size_t>(k)] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double t = 2.0 * k + ab;
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    }
    off[static_cast<std::size_t>(k - 1)] = std::sqrt(b2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  std::vector<double> first_row(static_cast<std::size_t>(n), 0.0);
  first_row[0] = 1.0;
  detail::tridiagonal_ql(diag, off, first_row);

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  GaussRule rule;
  for (std::size_t i : order) {
    rule.nodes.push_back(diag[i]);
    rule.weights.push_back(mu0 * first_row[i] * first_row[i]);
  }
  return rule;
}

/// Gauss rule on [0,1] for the weight x^a (1-x)^b.
inline GaussRule gauss_jacobi_unit(int n, double a, double b) {
  GaussRule r = gauss_jacobi(n, b, a);
  const double scale = std::pow(2.0, -(a + b + 1.0));
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
    r.weights[i] *= scale;
  }
  return r;
}

}  // namespace cdpoly
