#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "cdpoly/examples/common.hpp"
#include "cdpoly/examples/ops1d.hpp"

namespace cdpoly {

inline constexpr int kTensorMaxDegree = 10;

/// Normalized one-variable moment sets available as tensor factors.
inline Moments1D named_moments(const std::string& name, std::size_t n_max) {
  if (name == "legendre") return legendre_moments(n_max);
  if (name == "chebyshev") return chebyshev_moments(n_max);
  if (name == "uniform01") return uniform01_moments(n_max);
  throw PreconditionError("unknown moment set '" + name + "' (expected legendre, chebyshev or uniform01)");
}

/// Q_k = [P_k(x1) R_0(x2); P_{k-1}(x1) R_1(x2); ...; P_0(x1) R_k(x2)] for two
/// one-variable orthonormal families P and R.
inline RigidBasis product_basis(const OrthoFamily1D& p, const OrthoFamily1D& r, int n) {
  RigidBasis basis;
  basis.ideal = std::make_shared<const Ideal>(Ideal::zero(2));
  basis.source = RigidBasis::Source::ClosedForm;
  for (int k = 0; k <= n; ++k) {
    std::vector<FloatPolynomial> col;
    for (int i = k; i >= 0; --i) {
      const FloatPolynomial a = tensor_embed(p.p[static_cast<std::size_t>(i)], Slot::x);
      const FloatPolynomial b = tensor_embed(r.p[static_cast<std::size_t>(k - i)], Slot::y);
      col.push_back(a * b);
    }
    basis.columns.emplace_back(std::move(col));
  }
  return basis;
}

/// Expected A_{k,1}, A_{k,2} of the product basis: x1 P_i R_m = a_i P_{i+1} R_m + b_i P_i R_m + ...
/// so A_{k,1} has a_i at (row of (i, m), column of (i+1, m)) and A_{k,2} has c_m at
/// (row of (i, m), column of (i, m+1)). Row index of (i, k-i) is k - i.
inline RealMatrix product_expected_a(const OrthoFamily1D& p, const OrthoFamily1D& r, int k, std::size_t j) {
  RealMatrix a(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(k + 2));
  for (int i = k; i >= 0; --i) {
    const auto row = static_cast<std::size_t>(k - i);
    if (j == 0) {
      a(row, row) = p.a[static_cast<std::size_t>(i)];  // (i+1, m) sits at column k+1-(i+1) = row
    } else {
      a(row, row + 1) = r.a[static_cast<std::size_t>(k - i)];
    }
  }
  return a;
}

inline RealMatrix product_expected_b(const OrthoFamily1D& p, const OrthoFamily1D& r, int k, std::size_t j) {
  RealMatrix b(static_cast<std::size_t>(k + 1), static_cast<std::size_t>(k + 1));
  for (int i = k; i >= 0; --i) {
    const auto row = static_cast<std::size_t>(k - i);
    b(row, row) = j == 0 ? p.b[static_cast<std::size_t>(i)] : r.b[static_cast<std::size_t>(k - i)];
  }
  return b;
}

struct TensorOptions {
  int max_degree = 6;
  std::string first = "legendre";
  std::string second = "legendre";
  PipelineTolerances tol{};
};

/// Tensor functional L(x1^a x2^b) = L1(x^a) L2(x^b) with V = {0}: product
/// basis, its recurrence against the one-variable coefficients, and the
/// Gram-Schmidt basis as a per-degree rotation of the products.
inline PipelineReport tensor_pipeline(const TensorOptions& opt) {
  const int n = opt.max_degree;
  if (n < 0 || n > kTensorMaxDegree) throw PreconditionError("tensor pipeline supports 0 <= N <= 10");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  PipelineReport rep;
  rep.pipeline = "tensor";
  rep.config = {{"max_degree", n}, {"factors", {opt.first, opt.second}}};
  const auto len = static_cast<std::size_t>(2 * n + 6);
  const Moments1D m1 = named_moments(opt.first, len), m2 = named_moments(opt.second, len);
  const OrthoFamily1D p = ops1d(m1, n + 2), r = ops1d(m2, n + 2);
  const MomentFunctional l = MomentFunctional::tensor(m1, m2);
  const RigidBasis basis = product_basis(p, r, n + 1);
  const RecurrenceData rec = extract_recurrence(l, basis);

  double a_dev = 0.0, b_dev = 0.0;
  for (int k = 0; k <= n; ++k)
    for (std::size_t j = 0; j < 2; ++j) {
      a_dev = std::max(a_dev, max_abs_diff(rec.A[j][static_cast<std::size_t>(k)], product_expected_a(p, r, k, j)));
      b_dev = std::max(b_dev, max_abs_diff(rec.B[j][static_cast<std::size_t>(k)], product_expected_b(p, r, k, j)));
    }
  rep.checks.push_back(make_check("A matches one-variable a_k", a_dev, 1e-12));
  rep.checks.push_back(make_check("B matches one-variable b_k", b_dev, 1e-12));

  std::vector<std::vector<double>> samples;
  for (int i = 0; i < 8; ++i) samples.push_back({0.9 * std::cos(0.7 * i + 0.1), 0.8 * std::sin(1.3 * i + 0.2)});
  if (opt.first == "uniform01" || opt.second == "uniform01")
    for (auto& s : samples) s = {std::abs(s[0]), std::abs(s[1])};
  run_standard_checks(rep, l, basis, rec, n, opt.tol, samples);

  const RigidBasis computed = gram_schmidt(l, candidate_columns(l.ideal(), n + 1), n + 1);
  double rot = 0.0;
  for (std::size_t k = 0; k < basis.columns.size(); ++k) {
    const RealMatrix o = l.gram(computed[k], basis[k]);
    rot = std::max(rot, max_abs_diff(o * o.transpose(), RealMatrix::identity(o.rows())));
  }
  rep.checks.push_back(make_check("Gram-Schmidt basis is a rotation of the products", rot, 1e-9));
  rep.basis = basis;
  rep.recurrence = rec;
  return rep;
}

}  // namespace cdpoly
