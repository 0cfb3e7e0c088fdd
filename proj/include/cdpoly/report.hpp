#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cdpoly/cdkernel.hpp"
#include "cdpoly/orthonorm.hpp"
#include "cdpoly/poly_io.hpp"

namespace cdpoly {

inline constexpr int kReportSchema = 1;

/// One named pass/fail measurement. A check passes when value <= threshold.
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

inline Check make_check(std::string name, double value, double threshold) {
  const bool ok = std::isfinite(value) && value <= threshold;
  return Check{std::move(name), value, threshold, ok};
}

/// Boolean condition recorded as value 0 (holds) or 1 (fails) against threshold 0.
inline Check make_flag(std::string name, bool holds) {
  return Check{std::move(name), holds ? 0.0 : 1.0, 0.0, holds};
}

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

inline const Check* first_failure(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

inline nlohmann::json to_json(const Check& c) {
  return {{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
}

inline nlohmann::json to_json(const std::vector<Check>& checks) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) out.push_back(to_json(c));
  return out;
}

inline nlohmann::json to_json(const RealMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RealMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw DimensionError("matrix must be a nonempty array of rows");
  const std::size_t cols = j.front().size();
  RealMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != cols) throw DimensionError("ragged matrix in JSON");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

inline nlohmann::json to_json(const FloatColumn& col) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : col) out.push_back(to_json(e));
  return out;
}

inline nlohmann::json basis_to_json(const RigidBasis& basis) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : basis.ideal->generators()) gens.push_back(format_polynomial(g));
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : basis.columns) cols.push_back(to_json(c));
  nlohmann::json out = {{"nvars", basis.nvars()},
                        {"generators", gens},
                        {"source", basis.source == RigidBasis::Source::ClosedForm ? "closed-form" : "computed"},
                        {"dims", basis.dims()},
                        {"columns", cols}};
  out["terminal_degree"] = basis.terminal_degree ? nlohmann::json(*basis.terminal_degree) : nlohmann::json(nullptr);
  return out;
}

/// Rebuilds a basis; the ideal is recomputed from the stored generators
/// (an empty generator list means the zero ideal).
inline RigidBasis basis_from_json(const nlohmann::json& j) {
  const ScopedZeroTolerance working(kWorkingZeroTol);
  const auto nvars = j.at("nvars").get<std::size_t>();
  std::vector<RationalPolynomial> gens;
  for (const auto& g : j.at("generators")) gens.push_back(parse_polynomial<Rational>(g.get<std::string>(), nvars));
  RigidBasis b;
  b.ideal = std::make_shared<const Ideal>(gens.empty() ? Ideal::zero(nvars) : Ideal::groebner(gens));
  b.source = j.value("source", std::string("computed")) == "closed-form" ? RigidBasis::Source::ClosedForm
                                                                          : RigidBasis::Source::Computed;
  for (const auto& col : j.at("columns")) {
    std::vector<FloatPolynomial> entries;
    for (const auto& e : col) entries.push_back(polynomial_from_json<double>(e));
    b.columns.emplace_back(std::move(entries));
  }
  if (j.contains("terminal_degree") && !j["terminal_degree"].is_null())
    b.terminal_degree = j["terminal_degree"].get<int>();
  return b;
}

inline nlohmann::json recurrence_to_json(const RecurrenceData& rec) {
  nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
  for (std::size_t j = 0; j < rec.nvars; ++j) {
    nlohmann::json aj = nlohmann::json::array(), bj = nlohmann::json::array();
    for (const auto& m : rec.A[j]) aj.push_back(to_json(m));
    for (const auto& m : rec.B[j]) bj.push_back(to_json(m));
    a.push_back(std::move(aj));
    b.push_back(std::move(bj));
  }
  nlohmann::json out = {{"nvars", rec.nvars}, {"A", a}, {"B", b}};
  out["terminal_degree"] = rec.terminal_degree ? nlohmann::json(*rec.terminal_degree) : nlohmann::json(nullptr);
  return out;
}

inline RecurrenceData recurrence_from_json(const nlohmann::json& j) {
  RecurrenceData rec;
  rec.nvars = j.at("nvars").get<std::size_t>();
  for (const auto& aj : j.at("A")) {
    std::vector<RealMatrix> row;
    for (const auto& m : aj) row.push_back(matrix_from_json(m));
    rec.A.push_back(std::move(row));
  }
  for (const auto& bj : j.at("B")) {
    std::vector<RealMatrix> row;
    for (const auto& m : bj) row.push_back(matrix_from_json(m));
    rec.B.push_back(std::move(row));
  }
  if (rec.A.size() != rec.nvars || rec.B.size() != rec.nvars) throw DimensionError("recurrence needs one list per variable");
  if (j.contains("terminal_degree") && !j["terminal_degree"].is_null())
    rec.terminal_degree = j["terminal_degree"].get<int>();
  return rec;
}

inline nlohmann::json to_json(const CDReport& rep) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t j = 0; j < rep.residuals.size(); ++j)
    for (std::size_t i = 0; i < rep.degrees.size(); ++i)
      per.push_back({{"n", rep.degrees[i]},
                     {"j", j + 1},
                     {"residual", rep.residuals[j][i]},
                     {"threshold", i < rep.thresholds.size() ? rep.thresholds[i] : rep.threshold}});
  return {{"degrees", rep.degrees},
          {"per_nj_residuals", per},
          {"kernel_scale", rep.kernel_scale},
          {"reproducing_errors", rep.reproducing_errors},
          {"threshold", rep.threshold},
          {"pass", rep.pass}};
}

/// Outcome of one end-to-end pipeline run.
struct PipelineReport {
  std::string pipeline;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> notices;
  std::optional<RigidBasis> basis;
  std::optional<RecurrenceData> recurrence;
  std::optional<CDReport> cd;
  nlohmann::json extra = nlohmann::json::object();

  bool pass() const { return all_pass(checks); }
};

inline nlohmann::json to_json(const PipelineReport& r) {
  nlohmann::json out = {{"schema", kReportSchema},
                        {"pipeline", r.pipeline},
                        {"config", r.config},
                        {"checks", to_json(r.checks)},
                        {"notices", r.notices},
                        {"pass", r.pass()}};
  if (r.basis) out["basis"] = basis_to_json(*r.basis);
  if (r.recurrence) out["recurrence"] = recurrence_to_json(*r.recurrence);
  if (r.cd) out["cd"] = to_json(*r.cd);
  if (!r.extra.empty()) out["extra"] = r.extra;
  return out;
}

}  // namespace cdpoly
