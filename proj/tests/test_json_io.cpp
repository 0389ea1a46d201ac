#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "qgt/json_io.hpp"

using namespace qgt;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

}  // namespace

TEST_CASE("coefficient vectors round-trip through JSON") {
  CoeffVector v(IndexSet::symmetric(),
                {{-2, cplx(1.5, -0.25)}, {7, cplx(0.0, 2.0)}});
  const CoeffVector back = coeff_vector_from_json(coeff_vector_to_json(v));
  CHECK(back == v);
  CHECK(back.index_set().describe() == "symmetric");

  CoeffVector f(IndexSet::finite(3), {{1, cplx(2.0, 0.0)}});
  const Json j = coeff_vector_to_json(f);
  CHECK(j.at("index_set") == "finite:3");
  CHECK(coeff_vector_from_json(j) == f);

  // Through a textual dump and reparse the doubles survive exactly.
  const Json reparsed = Json::parse(coeff_vector_to_json(v).dump());
  CHECK(coeff_vector_from_json(reparsed) == v);
}

TEST_CASE("vector JSON rejects malformed input") {
  CHECK_THROWS_AS(coeff_vector_from_json(Json::parse(
                      R"({"entries": []})")),
                  ParseError);
  // duplicate index
  CHECK_THROWS_AS(coeff_vector_from_json(Json::parse(
                      R"({"index_set":"finite:2",
                          "entries":[{"i":1,"re":1.0},{"i":1,"re":2.0}]})")),
                  ParseError);
  // index outside the set (0 is never a valid symmetric index)
  CHECK_THROWS_AS(coeff_vector_from_json(Json::parse(
                      R"({"index_set":"symmetric",
                          "entries":[{"i":0,"re":1.0}]})")),
                  ParseError);
  CHECK_THROWS_AS(coeff_vector_from_json(Json::parse(
                      R"({"index_set":"finite:2",
                          "entries":[{"i":3,"re":1.0}]})")),
                  ParseError);
  // missing re
  CHECK_THROWS_AS(coeff_vector_from_json(Json::parse(
                      R"({"index_set":"finite:2","entries":[{"i":1}]})")),
                  ParseError);

  // im is optional
  const CoeffVector v = coeff_vector_from_json(Json::parse(
      R"({"index_set":"finite:2","entries":[{"i":2,"re":3.0}]})"));
  CHECK(v.at(2) == cplx(3.0, 0.0));
}

TEST_CASE("index set strings parse strictly") {
  CHECK(index_set_from_string("finite:4") == IndexSet::finite(4));
  CHECK(index_set_from_string("symmetric") == IndexSet::symmetric());
  CHECK_THROWS_AS(index_set_from_string("finite:0"), ParseError);
  CHECK_THROWS_AS(index_set_from_string("finite:abc"), ParseError);
  CHECK_THROWS_AS(index_set_from_string("finite:3x"), ParseError);
  CHECK_THROWS_AS(index_set_from_string("everything"), ParseError);
}

TEST_CASE("matrices serialize as interleaved re,im rows") {
  Eigen::MatrixXcd m(2, 2);
  m << cplx(1.0, 2.0), cplx(0.0, -1.0), cplx(3.5, 0.0), cplx(0.0, 0.0);
  const Eigen::MatrixXcd back =
      matrix_from_json_rows(matrix_to_json_rows(m), "test");
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(matrix_from_json_rows(Json::parse("[[1.0,0.0,2.0]]"), "t"),
                  ParseError);  // odd count
  CHECK_THROWS_AS(
      matrix_from_json_rows(Json::parse("[[1.0,0.0],[1.0,0.0,2.0,0.0]]"), "t"),
      ParseError);  // ragged
  CHECK_THROWS_AS(matrix_from_json_rows(Json::parse("[]"), "t"), ParseError);
}

TEST_CASE("gram operators round-trip for all three kinds") {
  const GramOperator ell2 = GramOperator::analytic(WeightSpec::paper_ell2());
  const GramOperator ell2_back = gram_from_json(gram_to_json(ell2));
  CHECK(ell2_back.kind() == GramOperator::Kind::analytic_diagonal);
  CHECK(ell2_back.weight_at(5) == ell2.weight_at(5));
  CHECK(ell2_back.weight_at(-5) == ell2.weight_at(-5));

  const GramOperator pw = GramOperator::analytic(WeightSpec::power(1.5, false));
  const GramOperator pw_back = gram_from_json(gram_to_json(pw));
  CHECK(pw_back.weight_at(4) == pw.weight_at(4));
  CHECK(pw_back.weight_at(-4) == pw.weight_at(-4));

  const GramOperator tab = GramOperator::analytic(
      WeightSpec::table({{2, 5.0}, {-1, 0.5}}, 1.0));
  const GramOperator tab_back = gram_from_json(gram_to_json(tab));
  CHECK(tab_back.weight_at(2) == 5.0);
  CHECK(tab_back.weight_at(-1) == 0.5);
  CHECK(tab_back.weight_at(9) == 1.0);

  const GramOperator diag = GramOperator::finite_diagonal({4.0, 1.0, 0.25});
  CHECK(gram_from_json(gram_to_json(diag)).lambdas() == diag.lambdas());

  Eigen::MatrixXcd m(2, 2);
  m << cplx(2.0, 0.0), cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(1.0, 0.0);
  const GramOperator dense = GramOperator::dense(m);
  const GramOperator dense_back = gram_from_json(gram_to_json(dense));
  CHECK((dense_back.matrix() - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram JSON distinguishes corrupt data from invalid operators") {
  CHECK_THROWS_AS(gram_from_json(Json::parse(R"({"lambdas":[1]})")),
                  ParseError);
  CHECK_THROWS_AS(gram_from_json(Json::parse(R"({"kind":"mystery"})")),
                  ParseError);
  CHECK_THROWS_AS(
      gram_from_json(Json::parse(R"({"kind":"finite_diagonal","lambdas":[]})")),
      ParseError);
  CHECK_THROWS_AS(
      gram_from_json(Json::parse(R"({"kind":"dense","matrix":[[1.0,0.0,2.0,0.0]]})")),
      ParseError);  // one row, two columns: not square
  CHECK_THROWS_AS(gram_from_json(Json::parse(R"({"kind":"analytic",
                      "weight":"mystery"})")),
                  ParseError);

  // Well-formed but non-Hermitian: a data error, not a parse error.
  const Json bad = Json::parse(
      R"({"kind":"dense","matrix":[[1.0,0.0,2.0,0.0],[0.0,0.0,1.0,0.0]]})");
  CHECK_THROWS_AS(gram_from_json(bad), NotSelfAdjoint);
}

TEST_CASE("tolerance JSON accepts partial overrides and validates") {
  const TolerancePolicy t =
      tolerance_from_json(Json::parse(R"({"algebraic":1e-13})"));
  CHECK(t.algebraic_tol == 1e-13);
  CHECK(t.oracle_tol == 1e-9);

  const TolerancePolicy u = tolerance_from_json(
      Json::parse(R"({"oracle":1e-6,"condition_scale":false})"));
  CHECK(u.oracle_tol == 1e-6);
  CHECK_FALSE(u.condition_scale);

  CHECK_THROWS_AS(tolerance_from_json(Json::parse(R"({"algebraic":-1e-12})")),
                  ParseError);
  CHECK_THROWS_AS(tolerance_from_json(Json::parse(R"({"algebraic":1e-6})")),
                  ParseError);  // would exceed the oracle tolerance
}

TEST_CASE("triples round-trip with their tolerances") {
  const QuasiTriple t = make_triple(
      GramOperator::finite_diagonal({4.0, 1.0, 0.25}),
      TolerancePolicy(1e-13, 1e-10));
  const QuasiTriple back = triple_from_json(triple_to_json(t));
  CHECK(back.gram.lambdas() == t.gram.lambdas());
  CHECK(back.tolerance.algebraic_tol == 1e-13);
  CHECK(back.tolerance.oracle_tol == 1e-10);

  CHECK_THROWS_AS(triple_from_json(Json::parse(R"({"tolerance":{}})")),
                  ParseError);
}

TEST_CASE("z-minus elements round-trip and reject mixed index sets") {
  const IndexSet set = IndexSet::finite(3);
  ZMinusElement h{CoeffVector(set, {{1, cplx(1.0, 0.0)}}),
                  CoeffVector(set, {{2, cplx(0.0, -1.0)}})};
  const ZMinusElement back = z_minus_from_json(z_minus_to_json(h));
  CHECK(back.plus_part == h.plus_part);
  CHECK(back.minus_part == h.minus_part);

  Json j = z_minus_to_json(h);
  j["minus_part"]["index_set"] = "finite:4";
  CHECK_THROWS_AS(z_minus_from_json(j), ParseError);
  CHECK_THROWS_AS(z_minus_from_json(Json::parse(R"({"plus_part":{}})")),
                  ParseError);
}

TEST_CASE("linear relations round-trip through JSON") {
  Eigen::MatrixXcd a(2, 2);
  a << cplx(1.0, 0.5), cplx(2.0, 0.0), cplx(0.0, 0.0), cplx(1.0, -1.0);
  const LinearRelation r = LinearRelation::graph(a);
  const LinearRelation back = relation_from_json(relation_to_json(r));
  CHECK(back.n1 == r.n1);
  CHECK(back.n2 == r.n2);
  CHECK(back.dim() == r.dim());
  CHECK(lin::subspace_distance(back.basis, r.basis) < 1e-13);

  CHECK_THROWS_AS(relation_from_json(Json::parse(R"({"dims":[2]})")),
                  ParseError);
  CHECK_THROWS_AS(relation_from_json(Json::parse(
                      R"({"dims":[0,0],"basis_columns":[[1.0,0.0]]})")),
                  ParseError);
  // basis columns of the wrong stacked height
  CHECK_THROWS_AS(relation_from_json(Json::parse(
                      R"({"dims":[2,2],"basis_columns":[[1.0,0.0]]})")),
                  ParseError);
}

TEST_CASE("cut strings parse to half-open interval unions") {
  const IntervalSet unit = parse_cut("0:1");
  REQUIRE(unit.parts().size() == 1);
  CHECK(unit.parts()[0].a == 0.0);
  CHECK(unit.parts()[0].b == 1.0);
  CHECK(unit.contains(1.0));
  CHECK_FALSE(unit.contains(0.0));

  const IntervalSet two = parse_cut("0:1,2:3");
  CHECK(two.parts().size() == 2);
  CHECK(two.contains(3.0));
  CHECK_FALSE(two.contains(1.5));

  // Adjacent pieces merge.
  CHECK(parse_cut("0:1,1:2").parts().size() == 1);

  CHECK_THROWS_AS(parse_cut(""), ParseError);
  CHECK_THROWS_AS(parse_cut("1"), ParseError);
  CHECK_THROWS_AS(parse_cut("x:1"), ParseError);
  CHECK_THROWS_AS(parse_cut("0:1:2"), ParseError);
  CHECK_THROWS_AS(parse_cut("1:0"), ParseError);
  CHECK_THROWS_AS(parse_cut("-1:1"), ParseError);
}

TEST_CASE("decomposition reports serialize their component summaries") {
  const QuasiTriple t = paper_ell2_triple().triple;
  const SpectralSplit s = decompose(t);
  const DecompositionReport rep = verify_decomposition(s, t, 40, 5);
  const Json j = decompose_report_to_json(s, rep);

  CHECK(j.at("component1_dim") == "infinite");
  CHECK(j.at("component2_dim") == "infinite");
  CHECK(j.at("cut").at(0).at(0) == 0.0);
  CHECK(j.at("cut").at(0).at(1) == 1.0);
  CHECK(j.at("component1").at("dominant_norm") == "plus");
  CHECK(j.at("component2").at("dominant_norm") == "pivot");
  const std::string idx1 = j.at("component1").at("indices").get<std::string>();
  CHECK(idx1.find("n >= 2") != std::string::npos);
  for (const char* key : {"projection_algebra", "contractivity",
                          "orthogonality", "norm_inequalities",
                          "cross_duality"})
    CHECK(j.at("residuals").contains(key));
  CHECK(j.at("samples") == 40);
  CHECK(j.at("pass") == true);

  const QuasiTriple id = identity_triple(3).triple;
  const SpectralSplit sid = decompose(id);
  const Json jid = decompose_report_to_json(
      sid, verify_decomposition(sid, id, 20, 1));
  CHECK(jid.at("component1_dim") == 0);
  CHECK(jid.at("component2_dim") == 3);
}

TEST_CASE("suite reports include a counterexample only on failure") {
  SuiteReport r;
  r.name = "demo";
  r.pass = false;
  r.max_residual = 2.0;
  r.tolerance_used = 1.0;
  r.counterexample = CoeffVector::basis(IndexSet::finite(2), 1);
  const Json failing = suite_report_to_json(r);
  CHECK(failing.at("status") == "fail");
  CHECK(failing.contains("counterexample"));

  r.pass = true;
  CHECK_FALSE(suite_report_to_json(r).contains("counterexample"));

  r.pass = false;
  r.counterexample.reset();
  CHECK_FALSE(suite_report_to_json(r).contains("counterexample"));

  const Json agg = verify_report_to_json({r});
  CHECK(agg.at("pass") == false);
  CHECK(agg.at("suites").size() == 1);
}

TEST_CASE("triple arguments resolve from inline JSON, files, and the catalog") {
  const std::string inline_arg =
      R"(  {"gram":{"kind":"finite_diagonal","lambdas":[4,1,0.25]}})";
  CHECK(resolve_triple(inline_arg).gram.dim() == 3);

  const std::string path = write_temp(
      "qgt_io_triple.json",
      R"({"gram":{"kind":"finite_diagonal","lambdas":[9,1]}})");
  CHECK(resolve_triple(path).gram.lambdas() == std::vector<double>{9.0, 1.0});

  CHECK(resolve_triple("identity-4").gram.dim() == 4);

  CHECK_THROWS_AS(resolve_triple("no-such-instance"), ParseError);
  CHECK_THROWS_AS(resolve_triple("{not json"), ParseError);

  const std::string junk = write_temp("qgt_io_junk.json", "not json at all");
  CHECK_THROWS_AS(resolve_triple(junk), ParseError);

  CHECK_THROWS_AS(read_text_file("/nonexistent/qgt/file.json"), ParseError);
}
