#include "rbc/cli_run.hpp"

#include <cmath>
#include <string>

#include "rbc/acceptance.hpp"
#include "rbc/constructions.hpp"
#include "rbc/errors.hpp"
#include "rbc/json_io.hpp"
#include "rbc/quasidiag.hpp"
#include "rbc/representations.hpp"

namespace rbc {

namespace {

const json& json_io_need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

json parse_input(const RunConfig& cfg) {
  if (!cfg.has_input) {
    throw InputError(cfg.verb + ": input document required");
  }
  try {
    return json::parse(cfg.input_text);
  } catch (const nlohmann::json::parse_error& e) {
    // translate the byte offset into a line/column diagnostic
    std::size_t line = 1, col = 1;
    const std::size_t stop =
        std::min(cfg.input_text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (cfg.input_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("JSON parse error at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
}

struct Effective {
  double tol;
  ProbeMode mode;
};

// CLI-explicit settings win over input-file fields, which win over
// defaults.
Effective effective_settings(const RunConfig& cfg, const json& j,
                             const AlgebraSpace* space) {
  Effective e{cfg.tol, space ? default_probe_mode(*space)
                             : ProbeMode::exhaustive()};
  if (!cfg.tol_set && j.is_object() && j.contains("tol")) {
    e.tol = j.at("tol").get<double>();
  }
  std::string mode = cfg.mode;
  if (mode.empty() && j.is_object() && j.contains("mode")) {
    mode = j.at("mode").get<std::string>();
  }
  std::uint64_t trials = cfg.trials;
  if (!cfg.trials_set && j.is_object() && j.contains("trials")) {
    trials = j.at("trials").get<std::uint64_t>();
  }
  std::uint64_t seed = cfg.seed;
  if (!cfg.seed_set && j.is_object() && j.contains("seed")) {
    seed = j.at("seed").get<std::uint64_t>();
  }
  if (mode == "exhaustive") {
    e.mode = ProbeMode::exhaustive();
  } else if (mode == "random") {
    e.mode = ProbeMode::randomized(trials, seed);
  } else if (!mode.empty()) {
    throw InputError("mode must be 'exhaustive' or 'random'");
  }
  if (e.tol <= 0.0) throw InputError("tol must be positive");
  if (e.mode.kind == ProbeMode::Kind::randomized && e.mode.trials < 1) {
    throw InputError("trials must be >= 1");
  }
  return e;
}

json config_echo(const RunConfig& cfg, const Effective& e) {
  json mode;
  if (e.mode.kind == ProbeMode::Kind::exhaustive) {
    mode = json{{"kind", "exhaustive"}};
  } else {
    mode = json{{"kind", "random"},
                {"trials", e.mode.trials},
                {"seed", e.mode.seed}};
  }
  json out{{"verb", cfg.verb}, {"tol", e.tol}, {"mode", mode}};
  if (!cfg.direction.empty()) out["direction"] = cfg.direction;
  if (cfg.samples) out["samples"] = *cfg.samples;
  if (cfg.weight_sweep) out["weight_sweep"] = true;
  if (cfg.max_word_len) out["max_word_len"] = *cfg.max_word_len;
  if (!cfg.filter.empty()) out["filter"] = cfg.filter;
  return out;
}

json witness_json(const CertificationWitness& w) {
  return json{{"description", w.description},
              {"index_a", w.index_a},
              {"index_b", w.index_b},
              {"residual", w.residual}};
}

int run_verify(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const double parse_tol =
      cfg.tol_set ? cfg.tol
                  : (j.contains("tol") ? j.at("tol").get<double>() : cfg.tol);
  const SuperOperator op =
      superop_from_json(json_io_need(j, "operator"), parse_tol, "verify");
  const cd weight = complex_from_json(json_io_need(j, "weight"), "verify");
  const AlgebraSpace space =
      space_from_json(json_io_need(j, "space"), parse_tol, "verify");
  const Effective e = effective_settings(cfg, j, &space);

  const CertificationOutcome outcome =
      run_rb_certification(op, weight, space, e.tol, e.mode);

  const json cert = certificate_to_json(outcome.certificate);
  *report = json{{"config", config_echo(cfg, e)},
                 {"weight", complex_to_json(weight)},
                 {"space", space_to_json(space)},
                 {"certified", outcome.certified},
                 {"max_residual", outcome.certificate.max_residual},
                 {"witness", cert.at("witness")},
                 {"certificate", cert}};
  return outcome.certified ? 0 : 1;
}

int run_construct(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const double parse_tol =
      cfg.tol_set ? cfg.tol
                  : (j.contains("tol") ? j.at("tol").get<double>() : cfg.tol);
  const SuperOperator op =
      superop_from_json(json_io_need(j, "operator"), parse_tol, "construct");
  const cd weight = complex_from_json(json_io_need(j, "weight"), "construct");

  AlgebraSpace space = [&] {
    if (j.contains("space")) {
      return space_from_json(j.at("space"), parse_tol, "construct");
    }
    if (const auto* v =
            std::get_if<SuperOperator::VolterraTag>(&op.structure())) {
      return AlgebraSpace::direct_sum(
          std::vector<std::size_t>(v->samples, 1));
    }
    return AlgebraSpace::full(op.dim());
  }();
  const Effective e = effective_settings(cfg, j, &space);

  const CertificationOutcome outcome =
      run_rb_certification(op, weight, space, e.tol, e.mode);
  *report = json{{"config", config_echo(cfg, e)},
                 {"operator", superop_to_json(op)},
                 {"weight", complex_to_json(weight)},
                 {"space", space_to_json(space)},
                 {"certified", outcome.certified},
                 {"certificate", certificate_to_json(outcome.certificate)}};
  return outcome.certified ? 0 : 1;
}

int run_correspond(const RunConfig& cfg, json* report) {
  if (cfg.direction != "phi" && cfg.direction != "psi") {
    throw InputError("correspond: --direction must be 'phi' or 'psi'");
  }
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const SuperOperator op =
      superop_from_json(json_io_need(j, "operator"), e.tol, "correspond");
  const Projection p =
      projection_from_json(json_io_need(j, "p"), e.tol, "correspond");
  const cd weight = j.contains("weight")
                        ? complex_from_json(j.at("weight"), "correspond")
                        : cd{-1.0};

  const std::size_t n = p.dim();
  const AlgebraSpace space =
      cfg.direction == "phi"
          ? AlgebraSpace::full(n)
          : AlgebraSpace::direct_sum({p.rank(), n - p.rank()});

  const RotaBaxterOperator input_rbo = certify_rb(op, weight, space, e.tol);
  const RotaBaxterOperator result =
      cfg.direction == "phi" ? phi_restrict(input_rbo, p, e.tol)
                             : psi_extend(input_rbo, p, e.tol);

  *report = json{{"config", config_echo(cfg, e)},
                 {"direction", cfg.direction},
                 {"certified", true},
                 {"input_certificate",
                  certificate_to_json(input_rbo.certificate())},
                 {"operator", superop_to_json(result.op())},
                 {"space", space_to_json(result.space())},
                 {"certificate", certificate_to_json(result.certificate())}};
  return 0;
}

int run_decompose(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const SuperOperator op =
      superop_from_json(json_io_need(j, "operator"), e.tol, "decompose");
  const cd weight = j.contains("weight")
                        ? complex_from_json(j.at("weight"), "decompose")
                        : cd{-1.0};
  const AlgebraSpace space =
      j.contains("space")
          ? space_from_json(j.at("space"), e.tol, "decompose")
          : AlgebraSpace::full(op.dim());

  const RotaBaxterOperator rbo = certify_rb(op, weight, space, e.tol);
  const DecompositionPair d = decompose_from_rb(rbo, e.tol);

  json a1 = json::array();
  json a2 = json::array();
  for (const auto& m : d.a1_basis) a1.push_back(matrix_to_json(m));
  for (const auto& m : d.a2_basis) a2.push_back(matrix_to_json(m));
  *report = json{{"config", config_echo(cfg, e)},
                 {"certified", true},
                 {"certificate", certificate_to_json(rbo.certificate())},
                 {"a1_basis", a1},
                 {"a2_basis", a2}};
  return 0;
}

int run_volterra(const RunConfig& cfg, json* report) {
  json j = json::object();
  if (cfg.has_input) j = parse_input(cfg);
  std::uint64_t samples = 0;
  if (cfg.samples) {
    samples = *cfg.samples;
  } else if (j.contains("samples")) {
    samples = j.at("samples").get<std::uint64_t>();
  } else {
    throw InputError("volterra: --samples or a samples field required");
  }
  if (samples == 0) throw InputError("volterra: samples must be >= 1");
  const AlgebraSpace space = AlgebraSpace::direct_sum(
      std::vector<std::size_t>(samples, 1));
  const Effective e = effective_settings(cfg, j, &space);

  const SuperOperator op = SuperOperator::discrete_volterra(samples);
  const cd weight{1.0 / static_cast<double>(samples)};
  const CertificationOutcome outcome =
      run_rb_certification(op, weight, space, e.tol, e.mode);
  *report = json{{"config", config_echo(cfg, e)},
                 {"operator", superop_to_json(op)},
                 {"weight", complex_to_json(weight)},
                 {"certified", outcome.certified},
                 {"certificate", certificate_to_json(outcome.certificate)}};

  if (cfg.weight_sweep) {
    // residual of the weight-0 identity on smooth probes at M and 2M; the
    // ratio exhibits the O(h) decay
    auto default_probe = [](std::uint64_t m, bool square) {
      return SampledFunction::sample(m,
                                     [square](double x) {
                                       return cd{square ? x * x : x};
                                     })
          .to_diagonal();
    };
    // probes may be overridden by sampled functions in the input; the
    // override applies at M, the halved-step comparison keeps defaults
    auto user_probe = [&](const char* key, bool square) {
      if (!j.contains(key)) return default_probe(samples, square);
      const json& sj = json_io_need(j.at(key), "samples");
      if (!sj.is_array() ||
          sj.size() != static_cast<std::size_t>(samples)) {
        throw InputError(
            "volterra: probe sample count must match the sample count");
      }
      SampledFunction s;
      for (const auto& v : sj) {
        s.samples.push_back(complex_from_json(v, "volterra probe"));
      }
      return s.to_diagonal();
    };
    const SuperOperator qm = SuperOperator::discrete_volterra(samples);
    const SuperOperator q2m = SuperOperator::discrete_volterra(2 * samples);
    const double r1 = rb_residual(qm, cd{0.0}, user_probe("f", false),
                                  user_probe("g", true));
    const double r2 =
        rb_residual(q2m, cd{0.0}, default_probe(2 * samples, false),
                    default_probe(2 * samples, true));
    (*report)["weight_sweep"] =
        json{{"residual_at_m", r1},
             {"residual_at_2m", r2},
             {"ratio", r1 > 0.0 ? r2 / r1 : 0.0}};
  }
  return outcome.certified ? 0 : 1;
}

RBRepresentation rep_from_json(const json& j, double tol, const char* where) {
  const ComplexMatrix f = matrix_from_json(json_io_need(j, "f"), where);
  const cd weight = complex_from_json(json_io_need(j, "weight"), where);
  const std::size_t n = f.rows();

  const json& pi_json = json_io_need(j, "pi");
  if (!pi_json.is_array()) {
    throw InputError(std::string(where) + ": pi must be an array of images");
  }
  std::vector<ComplexMatrix> images;
  for (const auto& m : pi_json) images.push_back(matrix_from_json(m, where));

  // without an explicit source the images are read as a full matrix
  // algebra basis in row-major order
  const AlgebraSpace source = [&] {
    if (j.contains("source")) {
      return space_from_json(j.at("source"), tol, where);
    }
    const std::size_t count = images.size();
    std::size_t k = 0;
    while (k * k < count) ++k;
    if (k * k != count) {
      throw InputError(std::string(where) +
                       ": image count is not a full basis; give a source "
                       "space");
    }
    return AlgebraSpace::full(k);
  }();

  const SuperOperator p_source_op =
      superop_from_json(json_io_need(j, "P_source"), tol, where);
  const SuperOperator p_target_op =
      superop_from_json(json_io_need(j, "P_target"), tol, where);

  StarHomomorphism pi =
      star_hom_certify(std::move(images), source, AlgebraSpace::full(n), tol);
  RotaBaxterOperator p_source = certify_rb(p_source_op, weight, source, tol);
  RotaBaxterOperator p_target =
      certify_rb(p_target_op, weight, AlgebraSpace::full(n), tol);
  return make_rb_representation(std::move(pi), f, std::move(p_source),
                                std::move(p_target), tol);
}

json rep_to_json(const RBRepresentation& rep) {
  json images = json::array();
  for (const auto& m : rep.pi.images) images.push_back(matrix_to_json(m));
  return json{
      {"pi", images},
      {"f", matrix_to_json(rep.f)},
      {"P_source", superop_to_json(rep.p_source.op())},
      {"P_target", superop_to_json(rep.p_target.op())},
      {"weight", complex_to_json(rep.p_source.weight())},
      {"source", space_to_json(rep.pi.source)},
      {"certificates",
       json{{"multiplicativity_defect", rep.pi.mult_defect},
            {"involution_defect", rep.pi.invol_defect},
            {"intertwining_defect", rep.intertwine_defect},
            {"matching_defect", rep.matching_defect},
            {"source_certificate",
             certificate_to_json(rep.p_source.certificate())},
            {"target_certificate",
             certificate_to_json(rep.p_target.certificate())}}}};
}

int run_rep_check(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const RBRepresentation rep = rep_from_json(j, e.tol, "rep-check");
  *report = json{{"config", config_echo(cfg, e)},
                 {"certified", true},
                 {"representation", rep_to_json(rep)}};
  return 0;
}

int run_rep_build(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const RBRepresentation r1 =
      rep_from_json(json_io_need(j, "r1"), e.tol, "rep-build");
  const RBRepresentation r2 =
      rep_from_json(json_io_need(j, "r2"), e.tol, "rep-build");
  const RBRepresentation combined =
      build_direct_sum_representation(r1, r2, e.tol);
  *report = json{{"config", config_echo(cfg, e)},
                 {"certified", true},
                 {"representation", rep_to_json(combined)}};
  return 0;
}

int run_rep_split(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const RBRepresentation rep =
      rep_from_json(json_io_need(j, "rep"), e.tol, "rep-split");
  const Projection p =
      projection_from_json(json_io_need(j, "p"), e.tol, "rep-split");
  const auto [r1, r2] = split_representation(rep, p, e.tol);
  *report = json{{"config", config_echo(cfg, e)},
                 {"certified", true},
                 {"r1", rep_to_json(r1)},
                 {"r2", rep_to_json(r2)}};
  return 0;
}

int run_quasidiag(const RunConfig& cfg, json* report) {
  const json j = parse_input(cfg);
  const Effective e = effective_settings(cfg, j, nullptr);
  const ComplexMatrix d = matrix_from_json(json_io_need(j, "d"), "quasidiag");

  const json& cj = json_io_need(j, "chain");
  ProjectionChain chain = [&] {
    if (cj.contains("kind") &&
        cj.at("kind").get<std::string>() == "coordinate") {
      const std::size_t dim = cj.at("dim").get<std::size_t>();
      std::vector<std::size_t> ranks;
      for (const auto& r : cj.at("ranks")) {
        ranks.push_back(r.get<std::size_t>());
      }
      return ProjectionChain::coordinate(dim, ranks);
    }
    if (cj.contains("projections")) {
      std::vector<Projection> ps;
      for (const auto& pj : cj.at("projections")) {
        ps.push_back(projection_from_json(pj, e.tol, "quasidiag"));
      }
      return ProjectionChain::from_projections(std::move(ps), e.tol);
    }
    throw InputError("quasidiag: chain needs kind=coordinate or projections");
  }();

  std::size_t words = cfg.max_word_len.value_or(
      j.contains("max_word_len") ? j.at("max_word_len").get<std::size_t>()
                                 : 4);
  if (words < 1) throw InputError("quasidiag: max_word_len must be >= 1");

  const QuasidiagonalReport qr = symmetry_profile(d, chain, words, e.tol);
  const double identity_gap = symmetry_equals_commutator_check(d, chain);

  *report = json{{"config", config_echo(cfg, e)},
                 {"certified", true},
                 {"commutator_profile", qr.commutator_profile},
                 {"symmetry_profile", qr.symmetry_profile},
                 {"word_commutator_profile", qr.word_commutator_profile},
                 {"verdict", to_string(qr.verdict)},
                 {"probe_words_len", qr.probe_words_len},
                 {"final_rank_full", qr.final_rank_full},
                 {"identity_discrepancy", identity_gap}};
  return 0;
}

int run_selftest(const RunConfig& cfg, json* report) {
  const std::vector<CriterionResult> results =
      run_acceptance_criteria(cfg.filter, cfg.cli_path);
  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back(json{
        {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  Effective e{cfg.tol, ProbeMode::exhaustive()};
  *report = json{{"config", config_echo(cfg, e)},
                 {"criteria", arr},
                 {"all_passed", all}};
  return all ? 0 : 1;
}

}  // namespace

int run_verb(const RunConfig& cfg, std::string* report) {
  json body;
  int code = 0;
  try {
    if (cfg.verb == "verify") {
      code = run_verify(cfg, &body);
    } else if (cfg.verb == "construct") {
      code = run_construct(cfg, &body);
    } else if (cfg.verb == "correspond") {
      code = run_correspond(cfg, &body);
    } else if (cfg.verb == "decompose") {
      code = run_decompose(cfg, &body);
    } else if (cfg.verb == "volterra") {
      code = run_volterra(cfg, &body);
    } else if (cfg.verb == "rep-check") {
      code = run_rep_check(cfg, &body);
    } else if (cfg.verb == "rep-build") {
      code = run_rep_build(cfg, &body);
    } else if (cfg.verb == "rep-split") {
      code = run_rep_split(cfg, &body);
    } else if (cfg.verb == "quasidiag") {
      code = run_quasidiag(cfg, &body);
    } else if (cfg.verb == "selftest") {
      code = run_selftest(cfg, &body);
    } else {
      throw InputError("unknown verb '" + cfg.verb + "'");
    }
  } catch (const InputError& e) {
    body = json{{"config", json{{"verb", cfg.verb}}},
                {"certified", false},
                {"error", json{{"kind", "input"}, {"message", e.what()}}}};
    code = 2;
  } catch (const CertificationFailed& e) {
    body = json{{"config", json{{"verb", cfg.verb}}},
                {"certified", false},
                {"error", json{{"kind", "certificate"},
                               {"message", e.what()},
                               {"witness", witness_json(e.witness())}}}};
    code = 1;
  } catch (const Error& e) {
    body = json{{"config", json{{"verb", cfg.verb}}},
                {"certified", false},
                {"error", json{{"kind", "certificate"},
                               {"message", e.what()}}}};
    code = 1;
  }
  *report = body.dump(2);
  report->push_back('\n');
  return code;
}

}  // namespace rbc
