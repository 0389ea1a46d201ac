// Command-line front end: construct triples from the catalog or JSON, run
// verification suites, compute norms and splits on user vectors, and emit
// machine-readable reports. Exit codes: 0 = success / all checks pass,
// 1 = a verification failed, 2 = usage or parse error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qgt/json_io.hpp"

namespace {

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const qgt::ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const qgt::NotSelfAdjoint*>(&e)) return "NotSelfAdjoint";
  if (dynamic_cast<const qgt::NotInjective*>(&e)) return "NotInjective";
  if (dynamic_cast<const qgt::NotInvertible*>(&e)) return "NotInvertible";
  if (dynamic_cast<const qgt::IndexSetMismatch*>(&e)) return "IndexSetMismatch";
  if (dynamic_cast<const qgt::InvalidInterval*>(&e)) return "InvalidInterval";
  if (dynamic_cast<const qgt::InvalidRange*>(&e)) return "InvalidRange";
  if (dynamic_cast<const qgt::InvalidExponent*>(&e)) return "InvalidExponent";
  if (dynamic_cast<const qgt::EmptyVector*>(&e)) return "EmptyVector";
  if (dynamic_cast<const qgt::ComponentLeak*>(&e)) return "ComponentLeak";
  if (dynamic_cast<const qgt::SelectionExhausted*>(&e))
    return "SelectionExhausted";
  if (dynamic_cast<const qgt::Error*>(&e)) return "Error";
  return "error";
}

// GELFAND_TOL, when set, overrides the algebraic tolerance of whatever triple
// a command operates on.
void apply_env_tolerance(qgt::QuasiTriple& t) {
  const char* env = std::getenv("GELFAND_TOL");
  if (!env || !*env) return;
  double tol = 0.0;
  std::size_t pos = 0;
  try {
    tol = std::stod(env, &pos);
  } catch (const std::exception&) {
    throw qgt::ParseError("GELFAND_TOL: not a number");
  }
  if (pos != std::string(env).size() || !(tol > 0.0))
    throw qgt::ParseError("GELFAND_TOL: expected a positive number");
  t.tolerance.algebraic_tol = tol;
  t.tolerance.oracle_tol = std::max(t.tolerance.oracle_tol, tol);
  t.tolerance.validate();
}

qgt::CoeffVector resolve_vector(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{')
    return qgt::coeff_vector_from_json(qgt::parse_json_text(arg, "vector"));
  return qgt::coeff_vector_from_json(
      qgt::parse_json_text(qgt::read_text_file(arg), "vector"));
}

qgt::ZMinusElement resolve_z_minus(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text = (first != std::string::npos && arg[first] == '{')
                               ? arg
                               : qgt::read_text_file(arg);
  const qgt::Json j = qgt::parse_json_text(text, "split input");
  if (j.contains("plus_part")) return qgt::z_minus_from_json(j);
  // A plain vector is accepted as an element of the sum space via the pivot.
  return qgt::ZMinusElement::from_pivot(qgt::coeff_vector_from_json(j));
}

void write_or_print(const qgt::Json& j, const std::string& report_path) {
  const std::string text = j.dump(2);
  if (report_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(report_path, std::ios::binary);
    if (!out)
      throw qgt::ParseError("cannot write report file '" + report_path + "'");
    out << text << "\n";
  }
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(csv);
  while (std::getline(in, piece, ','))
    if (!piece.empty()) out.push_back(piece);
  return out;
}

int cmd_verify(const std::string& config_path, const std::string& triple_arg,
               const std::string& suites_csv,
               const std::optional<std::size_t>& samples_flag,
               const std::optional<std::uint64_t>& seed_flag,
               const std::string& report_path) {
  std::string triple_source = triple_arg;
  qgt::VerifyOptions opt;
  std::optional<qgt::TolerancePolicy> tol_override;

  if (!config_path.empty()) {
    const qgt::Json cfg = qgt::parse_json_text(
        qgt::read_text_file(config_path), "verify config");
    if (!cfg.is_object())
      throw qgt::ParseError("verify config: expected a JSON object");
    if (cfg.contains("triple")) {
      if (cfg.at("triple").is_string())
        triple_source = cfg.at("triple").get<std::string>();
      else
        triple_source = cfg.at("triple").dump();
    }
    if (cfg.contains("suites"))
      opt.suites = cfg.at("suites").get<std::vector<std::string>>();
    if (cfg.contains("samples"))
      opt.samples = cfg.at("samples").get<std::size_t>();
    if (cfg.contains("seed")) opt.seed = cfg.at("seed").get<std::uint64_t>();
    if (cfg.contains("tolerance"))
      tol_override = qgt::tolerance_from_json(cfg.at("tolerance"));
  }
  if (!suites_csv.empty()) opt.suites = split_csv(suites_csv);
  if (samples_flag) opt.samples = *samples_flag;
  if (seed_flag) opt.seed = *seed_flag;
  opt.validate();

  if (triple_source.empty())
    throw qgt::ParseError(
        "verify: provide --triple (catalog name, JSON, or file) or a config "
        "with a 'triple' field");

  qgt::QuasiTriple t = qgt::resolve_triple(triple_source);
  if (tol_override) t.tolerance = *tol_override;
  apply_env_tolerance(t);

  const std::vector<qgt::SuiteReport> reports = qgt::run_verify(t, opt);
  for (const auto& r : reports) {
    std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name
              << "  residual=" << r.max_residual
              << "  tolerance=" << r.tolerance_used << "  seed=" << r.seed
              << "\n";
    if (!r.pass) std::cout << "       " << r.detail << "\n";
  }
  if (!report_path.empty())
    write_or_print(qgt::verify_report_to_json(reports), report_path);
  return qgt::all_pass(reports) ? 0 : 1;
}

int cmd_norms(const std::string& triple_arg, const std::string& vector_arg) {
  qgt::QuasiTriple t = qgt::resolve_triple(triple_arg);
  apply_env_tolerance(t);
  const qgt::CoeffVector v = resolve_vector(vector_arg);
  qgt::require_same_index_set(v.index_set(), t.gram.index_set(), "norms");
  const qgt::Json out{
      {"pivot", qgt::pivot_norm(v)},
      {"plus", qgt::plus_norm(t, v)},
      {"minus", qgt::minus_norm(t, v)},
      {"z_plus", qgt::z_plus_norm(t, v)},
      {"z_minus", qgt::z_minus_norm(t, qgt::ZMinusElement::from_pivot(v))}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_decompose(const std::string& triple_arg, const std::string& cut_text,
                  std::size_t samples, std::uint64_t seed,
                  const std::string& report_path) {
  qgt::QuasiTriple t = qgt::resolve_triple(triple_arg);
  apply_env_tolerance(t);
  const qgt::IntervalSet cut = qgt::parse_cut(cut_text);
  const qgt::SpectralSplit split = qgt::decompose(t, cut);
  const qgt::DecompositionReport rep =
      qgt::verify_decomposition(split, t, samples, seed);
  const qgt::Json j = qgt::decompose_report_to_json(split, rep);
  std::cout << j.dump(2) << "\n";
  if (!report_path.empty()) write_or_print(j, report_path);
  return rep.pass ? 0 : 1;
}

int cmd_split(const std::string& triple_arg, const std::string& kind,
              const std::string& vector_arg) {
  qgt::QuasiTriple t = qgt::resolve_triple(triple_arg);
  apply_env_tolerance(t);

  if (kind == "pivot") {
    const qgt::CoeffVector x = resolve_vector(vector_arg);
    const qgt::PivotSplit sp = qgt::pivot_split(t, x);
    std::cout << qgt::Json{{"kind", "pivot"},
                           {"f", qgt::coeff_vector_to_json(sp.f)},
                           {"g", qgt::coeff_vector_to_json(sp.g)}}
                     .dump(2)
              << "\n";
    return 0;
  }
  if (kind == "canonical") {
    const qgt::CoeffVector h = resolve_vector(vector_arg);
    const qgt::ZMinusElement el = qgt::canonical_split(t, h);
    std::cout << qgt::Json{{"kind", "canonical"},
                           {"plus_part", qgt::coeff_vector_to_json(el.plus_part)},
                           {"minus_part",
                            qgt::coeff_vector_to_json(el.minus_part)},
                           {"z_minus_norm", qgt::z_minus_norm(t, el)}}
                     .dump(2)
              << "\n";
    return 0;
  }
  if (kind == "optimal") {
    const qgt::ZMinusElement el = resolve_z_minus(vector_arg);
    const qgt::OptimalSplit opt = qgt::optimal_split(t, el.plus_part,
                                                     el.minus_part);
    std::cout << qgt::Json{{"kind", "optimal"},
                           {"z_star", qgt::coeff_vector_to_json(opt.z_star)},
                           {"value", opt.value}}
                     .dump(2)
              << "\n";
    return 0;
  }
  throw qgt::ParseError("split: --kind must be pivot, canonical, or optimal");
}

int cmd_catalog_list() {
  for (const auto& entry : qgt::catalog_entries())
    std::cout << entry.name << "\n    " << entry.notes << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qgt: numerical toolkit for quasi Gelfand triples (Gram-encoded norm "
      "chains, dual pairings, spectral decompositions)"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::string v_config, v_triple, v_suites, v_report;
  std::optional<std::size_t> v_samples;
  std::optional<std::uint64_t> v_seed;
  verify->add_option("--config", v_config, "JSON config file");
  verify->add_option("--triple,--catalog", v_triple,
                     "catalog name, triple JSON, or JSON file");
  verify->add_option("--suites", v_suites, "comma-separated suite names");
  verify->add_option("--samples", v_samples, "random samples per suite");
  verify->add_option("--seed", v_seed, "master seed");
  verify->add_option("--report", v_report, "write the JSON report here");

  // norms
  auto* norms = app.add_subcommand("norms", "all five norms of a vector");
  std::string n_triple, n_vector;
  norms->add_option("--triple", n_triple, "catalog name, JSON, or file")
      ->required();
  norms->add_option("--vector", n_vector, "vector JSON or file")->required();

  // decompose
  auto* dec = app.add_subcommand(
      "decompose", "split along a spectral cut and verify the two components");
  std::string d_triple, d_cut = "0:1", d_report;
  std::size_t d_samples = 200;
  std::uint64_t d_seed = 0;
  dec->add_option("--triple", d_triple, "catalog name, JSON, or file")
      ->required();
  dec->add_option("--cut", d_cut, "sqrt-weight cut, e.g. 0:1 or 0:1,2:3");
  dec->add_option("--samples", d_samples, "verification samples");
  dec->add_option("--seed", d_seed, "verification seed");
  dec->add_option("--report", d_report, "write the JSON report here");

  // split
  auto* split = app.add_subcommand("split", "pivot/canonical/optimal splits");
  std::string s_triple, s_kind, s_vector;
  split->add_option("--triple", s_triple, "catalog name, JSON, or file")
      ->required();
  split->add_option("--kind", s_kind, "pivot | canonical | optimal")
      ->required();
  split
      ->add_option("--vector", s_vector,
                   "vector JSON/file (optimal also accepts a "
                   "{plus_part, minus_part} element)")
      ->required();

  // catalog
  auto* catalog = app.add_subcommand("catalog", "instance catalog");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "enumerate instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error.
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify))
      return cmd_verify(v_config, v_triple, v_suites, v_samples, v_seed,
                        v_report);
    if (app.got_subcommand(norms)) return cmd_norms(n_triple, n_vector);
    if (app.got_subcommand(dec))
      return cmd_decompose(d_triple, d_cut, d_samples, d_seed, d_report);
    if (app.got_subcommand(split)) return cmd_split(s_triple, s_kind, s_vector);
    if (app.got_subcommand(catalog) && catalog->got_subcommand(list))
      return cmd_catalog_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no command\n";
  return 2;
}
