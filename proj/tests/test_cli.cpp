#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rbc/cli_run.hpp"
#include "rbc/json_io.hpp"
#include "rbc/prng.hpp"

using namespace rbc;

namespace {

RunConfig base_config(const std::string& verb, const std::string& input) {
  RunConfig cfg;
  cfg.verb = verb;
  cfg.input_text = input;
  cfg.has_input = !input.empty();
  return cfg;
}

}  // namespace

TEST_CASE("matrix json round trip") {
  Prng rng(71);
  ComplexMatrix a(3, 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.data()[i] = rng.complex_gaussian();
  }
  const json j = matrix_to_json(a);
  const ComplexMatrix back = matrix_from_json(j, "test");
  CHECK(max_abs_diff(a, back) == 0.0);
  CHECK(j.at("rows") == 3);
  CHECK(j.at("data").size() == 6);
}

TEST_CASE("operator json round trips preserve the action") {
  Prng rng(72);
  std::vector<SuperOperator> ops;
  ops.push_back(SuperOperator::left_mult(
      Projection::coordinate(3, 1).matrix()));
  ops.push_back(SuperOperator::discrete_volterra(5));
  ops.push_back(SuperOperator::triangular(
      SuperOperator::identity(1), SuperOperator::zero(2),
      Projection::coordinate(3, 1)));
  ops.push_back(SuperOperator::direct_sum(
      {SuperOperator::identity(2), SuperOperator::zero(1)}));
  ops.push_back(SuperOperator::projection_onto(
      {ComplexMatrix::unit(2, 0, 0)}, {ComplexMatrix::unit(2, 1, 1)}, 2));
  {
    ComplexMatrix dense(4, 4);
    for (std::size_t i = 0; i < dense.size(); ++i) {
      dense.data()[i] = rng.complex_gaussian();
    }
    ops.push_back(SuperOperator::dense(dense));
  }

  for (const auto& op : ops) {
    const json j = superop_to_json(op);
    const SuperOperator back = superop_from_json(j, 1e-10, "test");
    CHECK(back.dim() == op.dim());
    CHECK(max_abs_diff(back.dense_action(), op.dense_action()) <= 1e-14);
  }
}

TEST_CASE("space json round trip") {
  const AlgebraSpace full = AlgebraSpace::full(3);
  const AlgebraSpace ds = AlgebraSpace::direct_sum({2, 3});
  for (const AlgebraSpace& s : {full, ds}) {
    const AlgebraSpace back =
        space_from_json(space_to_json(s), 1e-10, "test");
    CHECK(back.kind() == s.kind());
    CHECK(back.ambient_dim() == s.ambient_dim());
    CHECK(back.basis_size() == s.basis_size());
  }
}

TEST_CASE("verify verb: pass, fail and malformed inputs") {
  const std::string pass =
      R"({"operator":{"kind":"left_mult","p":{"kind":"coordinate","dim":2,"rank":1}},)"
      R"("weight":[-1,0],"space":{"kind":"full","dim":2},"mode":"exhaustive"})";
  std::string report;
  CHECK(run_verb(base_config("verify", pass), &report) == 0);
  const json rj = json::parse(report);
  CHECK(rj.at("certified") == true);
  CHECK(rj.at("certificate").at("max_residual").get<double>() <= 1e-12);

  const std::string fail =
      R"({"operator":{"kind":"dense","dim":2,"action":{"rows":4,"cols":4,)"
      R"("data":[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],)"
      R"([0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}},)"
      R"("weight":[0,0],"space":{"kind":"full","dim":2}})";
  CHECK(run_verb(base_config("verify", fail), &report) == 1);
  const json fj = json::parse(report);
  CHECK(fj.at("certified") == false);
  // worst pair is the first basis pair (E_11, E_11)
  CHECK(fj.at("certificate").at("witness").at("index_a") == 0);
  CHECK(fj.at("certificate").at("witness").at("index_b") == 0);

  CHECK(run_verb(base_config("verify", "{\"operator\": {"), &report) == 2);
  const json mj = json::parse(report);
  CHECK(mj.at("error").at("kind") == "input");
  const std::string msg = mj.at("error").at("message").get<std::string>();
  CHECK(msg.find("line") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);
}

TEST_CASE("verify reports are byte-identical across reruns") {
  const std::string input =
      R"({"operator":{"kind":"left_mult","p":{"kind":"coordinate","dim":3,"rank":2}},)"
      R"("weight":[-1,0],"space":{"kind":"full","dim":3},"mode":"random",)"
      R"("trials":25,"seed":11})";
  std::string r1, r2;
  CHECK(run_verb(base_config("verify", input), &r1) == 0);
  CHECK(run_verb(base_config("verify", input), &r2) == 0);
  CHECK(r1 == r2);
}

TEST_CASE("volterra verb with weight sweep") {
  RunConfig cfg = base_config("volterra", "");
  cfg.samples = 64;
  cfg.weight_sweep = true;
  std::string report;
  CHECK(run_verb(cfg, &report) == 0);
  const json j = json::parse(report);
  CHECK(j.at("certified") == true);
  CHECK(j.at("weight")[0].get<double>() == doctest::Approx(1.0 / 64));
  const double ratio = j.at("weight_sweep").at("ratio").get<double>();
  CHECK(ratio >= 0.4);
  CHECK(ratio <= 0.6);
}

TEST_CASE("correspond verb round trips an operator through both directions") {
  const std::string phi_input =
      R"({"operator":{"kind":"triangular","p":{"kind":"coordinate","dim":2,"rank":1},)"
      R"("p1":{"kind":"dense","dim":1,"action":{"rows":1,"cols":1,"data":[[1,0]]}},)"
      R"("p2":{"kind":"dense","dim":1,"action":{"rows":1,"cols":1,"data":[[0,0]]}}},)"
      R"("p":{"kind":"coordinate","dim":2,"rank":1}})";
  RunConfig cfg = base_config("correspond", phi_input);
  cfg.direction = "phi";
  std::string report;
  CHECK(run_verb(cfg, &report) == 0);
  const json j = json::parse(report);
  CHECK(j.at("certified") == true);
  CHECK(j.at("space").at("kind") == "direct_sum");
}

TEST_CASE("quasidiag verb emits both profiles and a verdict") {
  std::ostringstream shift;
  shift << R"({"d":{"rows":4,"cols":4,"data":[)";
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      shift << ((i == j + 1) ? "[1,0]" : "[0,0]");
      if (!(i == 3 && j == 3)) shift << ",";
    }
  }
  shift << R"(]},"chain":{"kind":"coordinate","dim":4,"ranks":[1,2,3]},)"
        << R"("max_word_len":2})";
  std::string report;
  CHECK(run_verb(base_config("quasidiag", shift.str()), &report) == 0);
  const json j = json::parse(report);
  CHECK(j.at("verdict") == "no_decay");
  CHECK(j.at("commutator_profile").size() == 3);
  CHECK(j.at("identity_discrepancy").get<double>() <= 1e-13);
}

TEST_CASE("cli binary honors the exit code contract" *
          doctest::skip(std::getenv("RBC_CLI") == nullptr)) {
  const std::string cli = std::getenv("RBC_CLI");
  char tmpl[] = "/tmp/rbc_cli_test_XXXXXX";
  REQUIRE(mkdtemp(tmpl) != nullptr);
  const std::string dir = tmpl;

  const std::string in = dir + "/in.json";
  {
    std::ofstream f(in);
    f << R"({"operator":{"kind":"left_mult","p":{"kind":"coordinate","dim":2,"rank":1}},)"
      << R"("weight":[-1,0],"space":{"kind":"full","dim":2}})";
  }
  const std::string out = dir + "/out.json";
  const int pass = std::system(
      ("'" + cli + "' verify --in '" + in + "' --out '" + out +
       "' 2>/dev/null")
          .c_str());
  CHECK(WEXITSTATUS(pass) == 0);
  std::ifstream f(out);
  REQUIRE(f.good());
  json report;
  f >> report;
  CHECK(report.at("certified") == true);

  const int missing = std::system(
      ("'" + cli + "' verify --in '" + dir + "/nope.json' 2>/dev/null")
          .c_str());
  CHECK(WEXITSTATUS(missing) == 2);
}
