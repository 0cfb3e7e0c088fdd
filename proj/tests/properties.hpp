#pragma once

// Randomized property suites. Each suite runs a fixed number of cases from
// a seed and reports how many failed, so the same loops serve the unit
// tests and the acceptance binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

namespace cdpoly::testing {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double seconds = 0.0;
  std::string first_failure;

  bool pass() const { return failures == 0 && cases > 0; }
};

inline constexpr int kPropertyCases = 100;

namespace prop_detail {

// Runs `body(rng, case_index, message)` for each case; a false return or an
// exception counts as a failure.
inline PropertyResult run(const std::string& name, std::uint64_t seed, int cases,
                          const std::function<bool(Rng&, int, std::string&)>& body) {
  PropertyResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(seed);
  for (int i = 0; i < cases; ++i) {
    std::string msg;
    bool ok = false;
    try {
      ok = body(rng, i, msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    ++r.cases;
    if (!ok) {
      ++r.failures;
      if (r.first_failure.empty()) r.first_failure = "case " + std::to_string(i) + ": " + msg;
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Generators with no constant term vanish at the origin, so the ideal is
// always proper. Shapes alternate between principal curves in two or three
// variables and zero-dimensional pairs in two variables.
inline Ideal random_proper_ideal(Rng& rng) {
  const int shape = uniform_int(rng, 0, 2);
  std::vector<RationalPolynomial> gens;
  if (shape == 0) {
    gens.push_back(random_polynomial_of_degree(rng, 2, uniform_int(rng, 1, 4), 4));
  } else if (shape == 1) {
    gens.push_back(random_polynomial_of_degree(rng, 3, uniform_int(rng, 1, 3), 3));
  } else {
    gens.push_back(random_polynomial_of_degree(rng, 2, uniform_int(rng, 1, 2), 3));
    gens.push_back(random_polynomial_of_degree(rng, 2, uniform_int(rng, 1, 2), 3));
  }
  for (auto& g : gens) {
    const Monomial one(std::vector<int>(g.nvars(), 0));
    g -= RationalPolynomial::term(one, g.coefficient(one));
    if (g.is_zero()) g = RationalPolynomial::variable(g.nvars(), 0);
  }
  return Ideal::groebner(gens);
}

inline std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline std::string sci(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct GaugeFixture {
  MomentFunctional l;
  RigidBasis basis;
  RecurrenceData rec;
};

inline const std::vector<GaugeFixture>& gauge_fixtures() {
  static const std::vector<GaugeFixture> fixtures = [] {
    std::vector<GaugeFixture> out;
    {
      MomentFunctional l = MomentFunctional::circle(14);
      RigidBasis b = circle_closed_form(6).basis;
      RecurrenceData rec = extract_recurrence(l, b);
      out.push_back({std::move(l), std::move(b), std::move(rec)});
    }
    {
      MomentFunctional l = MomentFunctional::lemniscate(12);
      RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), 5), 5);
      RecurrenceData rec = extract_recurrence(l, b);
      out.push_back({std::move(l), std::move(b), std::move(rec)});
    }
    {
      const Moments1D m = legendre_moments(12);
      MomentFunctional l = MomentFunctional::tensor(m, m);
      RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), 4), 4);
      RecurrenceData rec = extract_recurrence(l, b);
      out.push_back({std::move(l), std::move(b), std::move(rec)});
    }
    return out;
  }();
  return fixtures;
}

}  // namespace prop_detail

/// NF(NF p) == NF p and NF(a p + b q) == a NF p + b NF q over random proper ideals.
inline PropertyResult property_nf_idempotent_linear(std::uint64_t seed = 101, int cases = kPropertyCases) {
  return prop_detail::run("normal form idempotent and linear", seed, cases, [](Rng& rng, int, std::string& msg) {
    const Ideal v = prop_detail::random_proper_ideal(rng);
    const std::size_t n = v.nvars();
    const RationalPolynomial p = random_polynomial(rng, n, 6, 6);
    const RationalPolynomial q = random_polynomial(rng, n, 6, 6);
    const Rational a = small_rational(rng), b = small_rational(rng);
    const RationalPolynomial np = v.normal_form(p);
    if (!(v.normal_form(np) == np)) {
      msg = "NF not idempotent for " + format_polynomial(p);
      return false;
    }
    if (!(v.normal_form(p.scaled(a) + q.scaled(b)) == np.scaled(a) + v.normal_form(q).scaled(b))) {
      msg = "NF not linear";
      return false;
    }
    return true;
  });
}

/// NF(p q) == NF(NF p * NF q).
inline PropertyResult property_nf_multiplicative(std::uint64_t seed = 202, int cases = kPropertyCases) {
  return prop_detail::run("normal form respects products", seed, cases, [](Rng& rng, int, std::string& msg) {
    const Ideal v = prop_detail::random_proper_ideal(rng);
    const std::size_t n = v.nvars();
    const RationalPolynomial p = random_polynomial(rng, n, 4, 5);
    const RationalPolynomial q = random_polynomial(rng, n, 4, 5);
    if (!(v.normal_form(p * q) == v.normal_form(v.normal_form(p) * v.normal_form(q)))) {
      msg = "NF(pq) differs for " + format_polynomial(p) + " and " + format_polynomial(q);
      return false;
    }
    return true;
  });
}

/// Standard monomials are their own normal form, and every NF is supported on them.
inline PropertyResult property_standard_monomials_fixed(std::uint64_t seed = 303, int cases = kPropertyCases) {
  return prop_detail::run("standard monomials are fixed", seed, cases, [](Rng& rng, int, std::string& msg) {
    const Ideal v = prop_detail::random_proper_ideal(rng);
    for (int k = 0; k <= 5; ++k)
      for (const Monomial& m : v.standard_monomials(k)) {
        const auto mono = RationalPolynomial::term(m, Rational(1));
        if (!(v.normal_form(mono) == mono)) {
          msg = "standard monomial " + format_monomial(m) + " is reduced";
          return false;
        }
      }
    const RationalPolynomial r = v.normal_form(random_polynomial(rng, v.nvars(), 6, 6));
    for (const auto& [m, c] : r.terms())
      if (!v.is_standard(m)) {
        msg = "normal form contains " + format_monomial(m);
        return false;
      }
    return true;
  });
}

/// d_{V2}(k) == sum_i d_V(i) d_V(k - i) for k <= 6.
inline PropertyResult property_doubled_dimensions(std::uint64_t seed = 404, int cases = kPropertyCases) {
  return prop_detail::run("doubled quotient dimensions convolve", seed, cases, [](Rng& rng, int, std::string& msg) {
    const Ideal v = prop_detail::random_proper_ideal(rng);
    const auto d = v.quotient_profile(6).d_V;
    const auto d2 = double_ideal(v).quotient_profile(6).d_V;
    for (std::size_t k = 0; k <= 6; ++k) {
      int expected = 0;
      for (std::size_t i = 0; i <= k; ++i) expected += d[i] * d[k - i];
      if (d2[k] != expected) {
        msg = "k=" + std::to_string(k) + ": d_V2 = " + std::to_string(d2[k]) + ", expected " +
              std::to_string(expected);
        return false;
      }
    }
    return true;
  });
}

/// Q_k -> O_k Q_k maps A to O_k A O_{k+1}^T and B to O_k B O_k^T; singular
/// values of A and eigenvalues of B do not move.
inline PropertyResult property_gauge_covariance(std::uint64_t seed = 505, int cases = kPropertyCases) {
  return prop_detail::run("gauge covariance of A and B", seed, cases, [](Rng& rng, int i, std::string& msg) {
    const auto& fx = prop_detail::gauge_fixtures()[static_cast<std::size_t>(i) % prop_detail::gauge_fixtures().size()];
    const auto o = random_gauge(rng, fx.basis);
    const RecurrenceData rot = extract_recurrence(fx.l, rotate_basis(fx.basis, o));
    double worst = 0.0;
    for (std::size_t j = 0; j < fx.rec.nvars; ++j)
      for (std::size_t k = 0; k < static_cast<std::size_t>(fx.rec.degrees()); ++k) {
        const RealMatrix& a = fx.rec.A[j][k];
        const RealMatrix& b = fx.rec.B[j][k];
        worst = std::max(worst, max_abs_diff(rot.A[j][k], o[k] * a * o[k + 1].transpose()));
        worst = std::max(worst, max_abs_diff(rot.B[j][k], o[k] * b * o[k].transpose()));
        worst = std::max(worst, prop_detail::max_abs_diff(prop_detail::sorted(singular_values(rot.A[j][k])),
                                                          prop_detail::sorted(singular_values(a))));
        worst = std::max(worst, prop_detail::max_abs_diff(symmetric_eigen(symmetrized(rot.B[j][k])).values,
                                                          symmetric_eigen(symmetrized(b)).values));
      }
    if (!(worst <= 1e-9)) {
      msg = "deviation " + prop_detail::sci(worst);
      return false;
    }
    return true;
  });
}

/// K_n(x, y) == K_n(y, x) and K_n is unchanged by a gauge rotation, for
/// n <= kCDAbsoluteThrough where the absolute bound is representable.
inline PropertyResult property_kernel_symmetry_gauge(std::uint64_t seed = 606, int cases = kPropertyCases) {
  return prop_detail::run("kernel swap symmetry and gauge invariance", seed, cases,
                          [](Rng& rng, int i, std::string& msg) {
                            const auto& fxs = prop_detail::gauge_fixtures();
                            const auto& fx = fxs[static_cast<std::size_t>(i) % fxs.size()];
                            const int n = uniform_int(rng, 0, std::min(fx.basis.max_degree(), kCDAbsoluteThrough));
                            const FloatPolynomial k = build_kernel(fx.basis, n).kernel;
                            const double swap = (swap_slots(k) - k).max_abs_coefficient();
                            const RigidBasis rb = rotate_basis(fx.basis, random_gauge(rng, fx.basis));
                            const double gauge = (build_kernel(rb, n).kernel - k).max_abs_coefficient();
                            if (!(swap <= 1e-10) || !(gauge <= 1e-9)) {
                              msg = "n=" + std::to_string(n) + ": swap " + prop_detail::sci(swap) + ", gauge " +
                                    prop_detail::sci(gauge);
                              return false;
                            }
                            return true;
                          });
}

/// Above kCDAbsoluteThrough the kernel coefficients outgrow the absolute
/// bound (one ulp of the lemniscate K_5 is already above 1e-9), so the
/// rotated kernel is compared at the kernel's own rounding level.
inline PropertyResult property_kernel_gauge_high_degree(std::uint64_t seed = 616, int cases = kPropertyCases) {
  return prop_detail::run("kernel gauge invariance above degree 4 (rounding level)", seed, cases,
                          [](Rng& rng, int i, std::string& msg) {
                            const auto& fxs = prop_detail::gauge_fixtures();
                            const auto& fx = fxs[static_cast<std::size_t>(i) % fxs.size()];
                            const int top = fx.basis.max_degree();
                            const int n = top > kCDAbsoluteThrough ? uniform_int(rng, kCDAbsoluteThrough + 1, top) : top;
                            const FloatPolynomial k = build_kernel(fx.basis, n).kernel;
                            const double swap = (swap_slots(k) - k).max_abs_coefficient();
                            const RigidBasis rb = rotate_basis(fx.basis, random_gauge(rng, fx.basis));
                            const double gauge = (build_kernel(rb, n).kernel - k).max_abs_coefficient();
                            const double level = std::max(1e-9, cd_rounding_level(k.max_abs_coefficient()));
                            if (!(swap <= 1e-10) || !(gauge <= level)) {
                              msg = "n=" + std::to_string(n) + ": swap " + prop_detail::sci(swap) + ", gauge " +
                                    prop_detail::sci(gauge) + " above " + prop_detail::sci(level);
                              return false;
                            }
                            return true;
                          });
}

/// B symmetric and stacked A injective for random positive point measures:
/// points on the unit circle with the circle ideal, or points in the plane
/// with the zero ideal.
inline PropertyResult property_structure_random_measures(std::uint64_t seed = 707, int cases = kPropertyCases) {
  static const auto circle_v = std::make_shared<const Ideal>(circle_ideal());
  static const auto plane_v = std::make_shared<const Ideal>(Ideal::zero(2));
  return prop_detail::run("B symmetric, stacked A injective on random measures", seed, cases,
                          [](Rng& rng, int i, std::string& msg) {
                            const bool on_circle = i % 2 == 0;
                            const int npts = on_circle ? uniform_int(rng, 12, 20) : uniform_int(rng, 15, 24);
                            const int top = on_circle ? 5 : 3;
                            std::vector<std::vector<double>> pts;
                            std::vector<double> w;
                            for (int p = 0; p < npts; ++p) {
                              if (on_circle) {
                                // Rational parametrization keeps the points on the curve exactly.
                                const double t = uniform_real(rng, -3.0, 3.0);
                                pts.push_back({(1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)});
                              } else {
                                pts.push_back(random_point(rng, 2));
                              }
                              w.push_back(uniform_real(rng, 0.2, 1.0));
                            }
                            const MomentTable t = point_moment_table(pts, w, 2 * top + 2);
                            const MomentFunctional l = MomentFunctional::table(t, on_circle ? circle_v : plane_v);
                            const RigidBasis b = gram_schmidt(l, candidate_columns(l.ideal(), top), top);
                            const StructuralReport sr = structural_checks(extract_recurrence(l, b));
                            if (!sr.pass()) {
                              msg = sr.failures.empty() ? "structural check failed" : sr.failures.front();
                              return false;
                            }
                            return true;
                          });
}

inline std::vector<std::function<PropertyResult()>> all_properties() {
  return {[] { return property_nf_idempotent_linear(); },     [] { return property_nf_multiplicative(); },
          [] { return property_standard_monomials_fixed(); }, [] { return property_doubled_dimensions(); },
          [] { return property_gauge_covariance(); },         [] { return property_kernel_symmetry_gauge(); },
          [] { return property_kernel_gauge_high_degree(); },
          [] { return property_structure_random_measures(); }};
}

}  // namespace cdpoly::testing
