#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qgt/catalog.hpp"
#include "qgt/core.hpp"
#include "qgt/decomp.hpp"
#include "qgt/errors.hpp"
#include "qgt/gram.hpp"
#include "qgt/relations.hpp"
#include "qgt/triple.hpp"
#include "qgt/verify.hpp"
#include "qgt/zspace.hpp"

namespace qgt {

using Json = nlohmann::json;

// ── coefficient vectors ─────────────────────────────────────────────────────
//
// {"index_set": "finite:3" | "symmetric",
//  "entries": [{"i": -2, "re": 1.0, "im": 0.0}, ...]}

inline Json coeff_vector_to_json(const CoeffVector& v) {
  Json entries = Json::array();
  for (const auto& [i, c] : v.entries())
    entries.push_back({{"i", i}, {"re", c.real()}, {"im", c.imag()}});
  return Json{{"index_set", v.index_set().describe()}, {"entries", entries}};
}

inline IndexSet index_set_from_string(const std::string& s) {
  if (s == "symmetric") return IndexSet::symmetric();
  if (s.rfind("finite:", 0) == 0) {
    std::int64_t n = 0;
    std::size_t pos = 0;
    try {
      n = std::stoll(s.substr(7), &pos);
    } catch (const std::exception&) {
      throw ParseError("index_set: bad dimension in '" + s + "'");
    }
    if (pos != s.size() - 7 || n < 1)
      throw ParseError("index_set: bad dimension in '" + s + "'");
    return IndexSet::finite(n);
  }
  throw ParseError("index_set: expected 'finite:N' or 'symmetric', got '" + s +
                   "'");
}

inline CoeffVector coeff_vector_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("index_set") || !j.contains("entries"))
    throw ParseError("vector: expected {index_set, entries}");
  CoeffVector v(index_set_from_string(j.at("index_set").get<std::string>()));
  std::set<std::int64_t> seen;
  for (const Json& e : j.at("entries")) {
    if (!e.contains("i") || !e.contains("re"))
      throw ParseError("vector entry: expected {i, re[, im]}");
    const auto i = e.at("i").get<std::int64_t>();
    if (!seen.insert(i).second)
      throw ParseError("vector: duplicate index " + std::to_string(i));
    const double re = e.at("re").get<double>();
    const double im = e.contains("im") ? e.at("im").get<double>() : 0.0;
    try {
      v.set(i, cplx(re, im));
    } catch (const Error& err) {
      throw ParseError(std::string("vector: ") + err.what());
    }
  }
  return v;
}

// ── dense complex matrices as rows of interleaved re,im pairs ───────────────

inline Json matrix_to_json_rows(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j).real());
      row.push_back(m(i, j).imag());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXcd matrix_from_json_rows(const Json& rows,
                                              const char* what) {
  if (!rows.is_array() || rows.empty())
    throw ParseError(std::string(what) + ": expected a nonempty array of rows");
  const std::size_t n_rows = rows.size();
  std::size_t n_cols = 0;
  Eigen::MatrixXcd m;
  for (std::size_t i = 0; i < n_rows; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.size() % 2 != 0)
      throw ParseError(std::string(what) +
                       ": each row must hold an even count of re,im values");
    if (i == 0) {
      n_cols = row.size() / 2;
      m.resize(static_cast<Eigen::Index>(n_rows),
               static_cast<Eigen::Index>(n_cols));
    } else if (row.size() / 2 != n_cols) {
      throw ParseError(std::string(what) + ": ragged rows");
    }
    for (std::size_t j = 0; j < n_cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cplx(row[2 * j].get<double>(), row[2 * j + 1].get<double>());
  }
  return m;
}

// ── Gram operators ──────────────────────────────────────────────────────────
//
// {"kind":"analytic","weight":"paper_ell2"}
// {"kind":"analytic","weight":{"power":1.0,"mirror":true}}
// {"kind":"finite_diagonal","lambdas":[4,1,0.25]}
// {"kind":"dense","matrix":[[re,im,re,im,...], ...]}

inline Json weight_spec_to_json(const WeightSpec& w) {
  switch (w.kind()) {
    case WeightSpec::Kind::paper_ell2:
      return Json("paper_ell2");
    case WeightSpec::Kind::power:
      return Json{{"power", w.alpha()}, {"mirror", w.mirrored()}};
    case WeightSpec::Kind::table: {
      Json overrides = Json::array();
      for (const auto& [i, wi] : w.entries()) overrides.push_back({i, wi});
      return Json{{"table",
                   {{"default", w.default_weight()}, {"overrides", overrides}}}};
    }
  }
  throw ParseError("weight: unknown kind");
}

inline WeightSpec weight_spec_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "paper_ell2") return WeightSpec::paper_ell2();
    throw ParseError("weight: unknown named weight '" + s + "'");
  }
  if (j.is_object() && j.contains("power")) {
    const double alpha = j.at("power").get<double>();
    const bool mirror = j.contains("mirror") ? j.at("mirror").get<bool>() : true;
    return WeightSpec::power(alpha, mirror);
  }
  if (j.is_object() && j.contains("table")) {
    const Json& t = j.at("table");
    std::map<std::int64_t, double> overrides;
    if (t.contains("overrides"))
      for (const Json& e : t.at("overrides"))
        overrides[e.at(0).get<std::int64_t>()] = e.at(1).get<double>();
    try {
      return WeightSpec::table(std::move(overrides),
                               t.at("default").get<double>());
    } catch (const Error& err) {
      throw ParseError(std::string("weight table: ") + err.what());
    }
  }
  throw ParseError("weight: expected a name or {power}/{table} object");
}

inline Json gram_to_json(const GramOperator& g) {
  switch (g.kind()) {
    case GramOperator::Kind::analytic_diagonal:
      return Json{{"kind", "analytic"},
                  {"weight", weight_spec_to_json(g.weight_spec())}};
    case GramOperator::Kind::finite_diagonal:
      return Json{{"kind", "finite_diagonal"}, {"lambdas", g.lambdas()}};
    case GramOperator::Kind::dense_spd:
      return Json{{"kind", "dense"}, {"matrix", matrix_to_json_rows(g.matrix())}};
  }
  throw ParseError("gram: unknown kind");
}

// Structural parse errors become ParseError; a well-formed but non-Hermitian
// dense matrix still throws NotSelfAdjoint so callers can distinguish corrupt
// data from invalid operators.
inline GramOperator gram_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError("gram: expected an object with a 'kind' field");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "analytic") {
    if (!j.contains("weight")) throw ParseError("gram: analytic needs 'weight'");
    return GramOperator::analytic(weight_spec_from_json(j.at("weight")));
  }
  if (kind == "finite_diagonal") {
    if (!j.contains("lambdas") || !j.at("lambdas").is_array() ||
        j.at("lambdas").empty())
      throw ParseError("gram: finite_diagonal needs a nonempty 'lambdas' array");
    return GramOperator::finite_diagonal(
        j.at("lambdas").get<std::vector<double>>());
  }
  if (kind == "dense") {
    if (!j.contains("matrix"))
      throw ParseError("gram: dense needs a 'matrix' field");
    const Eigen::MatrixXcd m = matrix_from_json_rows(j.at("matrix"), "gram");
    if (m.rows() != m.cols()) throw ParseError("gram: dense matrix not square");
    return GramOperator::dense(m);
  }
  throw ParseError("gram: unknown kind '" + kind + "'");
}

// ── triples ─────────────────────────────────────────────────────────────────
//
// {"gram": <Gram JSON>,
//  "tolerance": {"algebraic": 1e-12, "oracle": 1e-9, "condition_scale": true}}

inline Json tolerance_to_json(const TolerancePolicy& tol) {
  return Json{{"algebraic", tol.algebraic_tol},
              {"oracle", tol.oracle_tol},
              {"condition_scale", tol.condition_scale}};
}

inline TolerancePolicy tolerance_from_json(const Json& j) {
  TolerancePolicy tol;
  if (j.contains("algebraic")) tol.algebraic_tol = j.at("algebraic").get<double>();
  if (j.contains("oracle")) tol.oracle_tol = j.at("oracle").get<double>();
  if (j.contains("condition_scale"))
    tol.condition_scale = j.at("condition_scale").get<bool>();
  try {
    tol.validate();
  } catch (const Error& err) {
    throw ParseError(std::string("tolerance: ") + err.what());
  }
  return tol;
}

inline Json triple_to_json(const QuasiTriple& t) {
  return Json{{"gram", gram_to_json(t.gram)},
              {"tolerance", tolerance_to_json(t.tolerance)}};
}

inline QuasiTriple triple_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("gram"))
    throw ParseError("triple: expected an object with a 'gram' field");
  TolerancePolicy tol;
  if (j.contains("tolerance")) tol = tolerance_from_json(j.at("tolerance"));
  return make_triple(gram_from_json(j.at("gram")), tol);
}

// ── Z-space elements ────────────────────────────────────────────────────────

inline Json z_minus_to_json(const ZMinusElement& h) {
  return Json{{"plus_part", coeff_vector_to_json(h.plus_part)},
              {"minus_part", coeff_vector_to_json(h.minus_part)}};
}

inline ZMinusElement z_minus_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("plus_part") || !j.contains("minus_part"))
    throw ParseError("z_minus element: expected {plus_part, minus_part}");
  ZMinusElement h{coeff_vector_from_json(j.at("plus_part")),
                  coeff_vector_from_json(j.at("minus_part"))};
  try {
    require_same_index_set(h.plus_part.index_set(), h.minus_part.index_set(),
                           "z_minus element");
  } catch (const Error& err) {
    throw ParseError(err.what());
  }
  return h;
}

// ── linear relations ────────────────────────────────────────────────────────
//
// {"dims": [n1, n2], "basis_columns": [[re,im,...], ...]} — each column lists
// the stacked n1+n2 coordinates as re,im pairs.

inline Json relation_to_json(const LinearRelation& r) {
  return Json{{"dims", {r.n1, r.n2}},
              {"basis_columns",
               matrix_to_json_rows(r.basis.transpose())}};
}

inline LinearRelation relation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("basis_columns"))
    throw ParseError("relation: expected {dims, basis_columns}");
  const Json& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 2)
    throw ParseError("relation: dims must be [n1, n2]");
  const auto n1 = dims[0].get<Eigen::Index>();
  const auto n2 = dims[1].get<Eigen::Index>();
  if (n1 < 0 || n2 < 0 || n1 + n2 == 0)
    throw ParseError("relation: dims must be nonnegative and not both zero");
  const Eigen::MatrixXcd cols =
      matrix_from_json_rows(j.at("basis_columns"), "relation").transpose();
  try {
    return LinearRelation::from_columns(n1, n2, cols);
  } catch (const Error& err) {
    throw ParseError(std::string("relation: ") + err.what());
  }
}

// ── decomposition reports ───────────────────────────────────────────────────

inline const char* dominance_name(NormDominance d) {
  switch (d) {
    case NormDominance::plus_norm:
      return "plus";
    case NormDominance::pivot_norm:
      return "pivot";
    case NormDominance::mixed:
      return "mixed";
    case NormDominance::trivial:
      return "trivial";
  }
  return "trivial";
}

inline Json component_dim_to_json(const ComponentDim& d) {
  if (d.infinite) return Json("infinite");
  return Json(d.count);
}

inline Json interval_set_to_json(const IntervalSet& s) {
  Json parts = Json::array();
  for (const auto& p : s.parts()) parts.push_back({p.a, p.b});
  return parts;
}

inline Json decompose_report_to_json(const SpectralSplit& s,
                                     const DecompositionReport& rep) {
  const auto component = [](const OrdinaryTriple& c) {
    return Json{{"dim", component_dim_to_json(c.dim)},
                {"indices", c.description},
                {"embedding_constant", c.embedding_constant},
                {"dominant_norm", dominance_name(c.direction)}};
  };
  return Json{
      {"cut", interval_set_to_json(s.cut)},
      {"component1_dim", component_dim_to_json(s.component1.dim)},
      {"component2_dim", component_dim_to_json(s.component2.dim)},
      {"component1", component(s.component1)},
      {"component2", component(s.component2)},
      {"residuals",
       {{"projection_algebra", rep.projection_algebra},
        {"contractivity", rep.contractivity},
        {"orthogonality", rep.orthogonality},
        {"norm_inequalities", rep.norm_inequalities},
        {"cross_duality", rep.cross_duality}}},
      {"samples", rep.samples},
      {"seed", rep.seed},
      {"tolerance_used", rep.tolerance_used},
      {"pass", rep.pass}};
}

// ── verification reports ────────────────────────────────────────────────────

inline Json suite_report_to_json(const SuiteReport& r) {
  Json j{{"name", r.name},
         {"status", r.pass ? "pass" : "fail"},
         {"max_residual", r.max_residual},
         {"tolerance_used", r.tolerance_used},
         {"runtime_ms", r.runtime_ms},
         {"seed", r.seed},
         {"detail", r.detail}};
  if (!r.pass && r.counterexample)
    j["counterexample"] = coeff_vector_to_json(*r.counterexample);
  return j;
}

inline Json verify_report_to_json(const std::vector<SuiteReport>& reports) {
  Json suites = Json::array();
  for (const auto& r : reports) suites.push_back(suite_report_to_json(r));
  return Json{{"suites", suites}, {"pass", all_pass(reports)}};
}

// ── cut parsing: "0:1" or "0:1,2:3" on the sqrt-weight scale ────────────────

inline IntervalSet parse_cut(const std::string& text) {
  std::vector<Interval> parts;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    const std::size_t colon = piece.find(':');
    if (colon == std::string::npos)
      throw ParseError("cut: expected 'a:b', got '" + piece + "'");
    double a = 0.0, b = 0.0;
    try {
      std::size_t pa = 0, pb = 0;
      a = std::stod(piece.substr(0, colon), &pa);
      b = std::stod(piece.substr(colon + 1), &pb);
      if (pa != colon || pb != piece.size() - colon - 1)
        throw ParseError("cut: trailing characters in '" + piece + "'");
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("cut: bad number in '" + piece + "'");
    }
    try {
      parts.emplace_back(a, b);
    } catch (const Error& err) {
      throw ParseError(std::string("cut: ") + err.what());
    }
  }
  if (parts.empty()) throw ParseError("cut: no intervals given");
  return IntervalSet(std::move(parts));
}

// ── file and argument plumbing ──────────────────────────────────────────────

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline Json parse_json_text(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw ParseError(std::string(what) + ": " + err.what());
  }
}

// A triple argument is either a catalog instance name, inline JSON (leading
// '{'), or a path to a JSON file. Arguments that look like paths but do not
// open get a file-oriented message instead of falling through to the catalog.
inline QuasiTriple resolve_triple(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{')
    return triple_from_json(parse_json_text(arg, "triple"));
  if (std::ifstream probe(arg); probe.good())
    return triple_from_json(parse_json_text(read_text_file(arg), "triple"));
  if (arg.find('/') != std::string::npos ||
      (arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0))
    throw ParseError("triple: cannot open file '" + arg + "'");
  return catalog_lookup(arg).triple;
}

}  // namespace qgt
