#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include "cdpoly/examples/common.hpp"
#include "cdpoly/poly_io.hpp"

namespace cdpoly {

/// Largest variable index n appearing as "xn" in the text (0 when none).
inline std::size_t infer_nvars(const std::string& text) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != 'x' || i + 1 >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1]))) continue;
    std::size_t j = i + 1, idx = 0;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) idx = idx * 10 + static_cast<std::size_t>(text[j++] - '0');
    best = std::max(best, idx);
  }
  return best;
}

/// Generators separated by ',' or ';'. Blank pieces are skipped.
inline std::vector<RationalPolynomial> parse_generators(const std::string& text, std::size_t nvars) {
  std::vector<RationalPolynomial> out;
  std::string piece;
  auto flush = [&] {
    if (piece.find_first_not_of(" \t\n") != std::string::npos) out.push_back(parse_polynomial<Rational>(piece, nvars));
    piece.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ';') {
      flush();
    } else {
      piece += c;
    }
  }
  flush();
  return out;
}

/// The ideal generated by `gens`, or the zero ideal when there are none.
inline Ideal make_ideal(const std::vector<RationalPolynomial>& gens, std::size_t nvars) {
  if (gens.empty()) return Ideal::zero(nvars);
  return Ideal::groebner(gens);
}

/// Moments sum_i w_i x_i^a of a discrete measure, for every monomial of degree <= max_degree.
inline MomentTable point_moment_table(const std::vector<std::vector<double>>& points,
                                      const std::vector<double>& weights, int max_degree) {
  if (points.empty() || points.size() != weights.size()) throw DimensionError("points and weights differ in length");
  MomentTable t;
  t.nvars = points.front().size();
  for (int deg = 0; deg <= max_degree; ++deg)
    for (const auto& m : monomials_of_degree(t.nvars, deg)) {
      double sum = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        double term = weights[i];
        for (std::size_t v = 0; v < t.nvars; ++v) term *= std::pow(points[i][v], m[v]);
        sum += term;
      }
      t.entries[m] = sum;
    }
  return t;
}

struct GenericOptions {
  std::vector<RationalPolynomial> generators;  // empty means the zero ideal
  MomentTable moments;
  int max_degree = 4;
  std::vector<std::vector<double>> samples;  // points on the variety, for the reproducing check
  PipelineTolerances tol{};
};

/// User ideal and moment table: Gram-Schmidt on standard monomials through
/// degree N+1 (or kappa_V when the quotient is finite), then the standard checks.
inline PipelineReport generic_pipeline(const GenericOptions& opt) {
  const int n = opt.max_degree;
  if (n < 0) throw PreconditionError("max degree must be nonnegative");
  const ScopedZeroTolerance working(kWorkingZeroTol);
  auto ideal = std::make_shared<const Ideal>(make_ideal(opt.generators, opt.moments.nvars));
  if (ideal->nvars() != opt.moments.nvars) throw DimensionError("generators and moment table differ in nvars");
  PipelineReport rep;
  rep.pipeline = "generic";
  std::vector<std::string> gens;
  for (const auto& g : ideal->basis()) gens.push_back(format_polynomial(g));
  rep.config = {{"max_degree", n}, {"nvars", opt.moments.nvars}, {"groebner_basis", gens}};

  const MomentFunctional l = MomentFunctional::table(opt.moments, ideal);
  const CandidateColumns cand = candidate_columns(*ideal, n + 1);
  if (cand.truncated) rep.notices.push_back(cand.notice);
  const int top = static_cast<int>(cand.columns.size()) - 1;
  const QuotientProfile prof = ideal->quotient_profile(n + 1);
  rep.extra["d_V"] = prof.d_V;
  rep.extra["kappa_V"] = prof.kappa ? nlohmann::json(*prof.kappa) : nlohmann::json("infinity");

  const PositivityReport pos = positivity_check(l, top);
  rep.checks.push_back(make_flag("moment matrix positive definite", pos.positive));
  if (!pos.positive) {
    rep.notices.push_back("moment matrix min eigenvalue " + sci(pos.min_eigenvalue) + " (max " +
                          sci(pos.max_eigenvalue) + ")");
    return rep;
  }

  const RigidBasis basis = gram_schmidt(l, cand, top);
  const RecurrenceData rec = extract_recurrence(l, basis);
  const int n_eff = std::min(n, rec.degrees() - 1);
  run_standard_checks(rep, l, basis, rec, n_eff, opt.tol, opt.samples);
  rep.basis = basis;
  rep.recurrence = rec;
  return rep;
}

}  // namespace cdpoly
