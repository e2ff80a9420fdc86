#include "rbc/json_io.hpp"

#include <string>

#include "rbc/errors.hpp"

namespace rbc {

namespace {

std::string ctx(const char* where, const std::string& what) {
  return std::string(where) + ": " + what;
}

const json& need(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(ctx(where, std::string("missing field '") + key + "'"));
  }
  return j.at(key);
}

std::size_t need_size(const json& j, const char* key, const char* where) {
  const json& v = need(j, key, where);
  if (!v.is_number_unsigned() && !(v.is_number_integer() &&
                                   v.get<long long>() >= 0)) {
    throw InputError(
        ctx(where, std::string("field '") + key + "' must be a nonnegative "
                                                  "integer"));
  }
  return v.get<std::size_t>();
}

}  // namespace

json complex_to_json(cd z) { return json::array({z.real(), z.imag()}); }

cd complex_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw InputError(ctx(where, "complex values are [re, im] pairs"));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      data.push_back(complex_to_json(m(i, j)));
    }
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json& j, const char* where) {
  const std::size_t rows = need_size(j, "rows", where);
  const std::size_t cols = need_size(j, "cols", where);
  const json& data = need(j, "data", where);
  if (!data.is_array() || data.size() != rows * cols) {
    throw InputError(ctx(where, "matrix data length must equal rows*cols"));
  }
  ComplexMatrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    m.data()[k] = complex_from_json(data[k], where);
  }
  if (!m.all_finite()) {
    throw InputError(ctx(where, "matrix has non-finite entries"));
  }
  return m;
}

json projection_to_json(const Projection& p) {
  return json{{"matrix", matrix_to_json(p.matrix())}};
}

Projection projection_from_json(const json& j, double tol,
                                const char* where) {
  if (!j.is_object()) {
    throw InputError(ctx(where, "projection must be an object"));
  }
  if (j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "coordinate") {
      throw InputError(ctx(where, "unknown projection kind '" + kind + "'"));
    }
    const std::size_t dim = need_size(j, "dim", where);
    const std::size_t rank = need_size(j, "rank", where);
    if (rank > dim) throw InputError(ctx(where, "rank exceeds dim"));
    return Projection::coordinate(dim, rank);
  }
  return Projection::from_matrix(matrix_from_json(need(j, "matrix", where),
                                                  where),
                                 tol);
}

json space_to_json(const AlgebraSpace& s) {
  switch (s.kind()) {
    case AlgebraSpace::Kind::full:
      return json{{"kind", "full"}, {"dim", s.ambient_dim()}};
    case AlgebraSpace::Kind::direct_sum:
      return json{{"kind", "direct_sum"}, {"parts", s.parts()}};
    case AlgebraSpace::Kind::span: {
      json gens = json::array();
      for (const auto& g : s.generators()) gens.push_back(matrix_to_json(g));
      return json{{"kind", "span"},
                  {"ambient", json{{"kind", "full"}, {"dim", s.ambient_dim()}}},
                  {"generators", gens}};
    }
  }
  throw InputError("space_to_json: bad space");
}

AlgebraSpace space_from_json(const json& j, double tol, const char* where) {
  const std::string kind = need(j, "kind", where).get<std::string>();
  if (kind == "full") {
    return AlgebraSpace::full(need_size(j, "dim", where));
  }
  if (kind == "direct_sum") {
    const json& parts = need(j, "parts", where);
    if (!parts.is_array() || parts.empty()) {
      throw InputError(ctx(where, "direct_sum needs a nonempty parts array"));
    }
    std::vector<std::size_t> ps;
    for (const auto& p : parts) {
      if (!p.is_number_unsigned() && !p.is_number_integer()) {
        throw InputError(ctx(where, "parts must be positive integers"));
      }
      ps.push_back(p.get<std::size_t>());
    }
    return AlgebraSpace::direct_sum(std::move(ps));
  }
  if (kind == "span") {
    const AlgebraSpace ambient =
        space_from_json(need(j, "ambient", where), tol, where);
    const json& gens = need(j, "generators", where);
    if (!gens.is_array()) {
      throw InputError(ctx(where, "span generators must be an array"));
    }
    std::vector<ComplexMatrix> gs;
    for (const auto& g : gens) gs.push_back(matrix_from_json(g, where));
    return AlgebraSpace::span(ambient, std::move(gs), tol);
  }
  throw InputError(ctx(where, "unknown space kind '" + kind + "'"));
}

json superop_to_json(const SuperOperator& op) {
  struct Visitor {
    const SuperOperator& op;

    json operator()(const SuperOperator::DenseTag& t) const {
      return json{{"kind", "dense"},
                  {"dim", op.dim()},
                  {"action", matrix_to_json(t.action)}};
    }
    json operator()(const SuperOperator::LeftMultTag& t) const {
      return json{{"kind", "left_mult"},
                  {"p", json{{"matrix", matrix_to_json(t.m)}}}};
    }
    json operator()(const SuperOperator::RightMultTag& t) const {
      return json{{"kind", "right_mult"},
                  {"q", json{{"matrix", matrix_to_json(t.m)}}}};
    }
    json operator()(const SuperOperator::TriangularTag& t) const {
      return json{{"kind", "triangular"},
                  {"p", projection_to_json(t.p)},
                  {"p1", superop_to_json(*t.p1)},
                  {"p2", superop_to_json(*t.p2)}};
    }
    json operator()(const SuperOperator::DirectSumTag& t) const {
      json parts = json::array();
      for (const auto& part : t.parts) parts.push_back(superop_to_json(*part));
      return json{{"kind", "direct_sum"}, {"parts", parts}};
    }
    json operator()(const SuperOperator::ProjectionOntoTag& t) const {
      json a1 = json::array();
      json a2 = json::array();
      for (const auto& m : t.a1) a1.push_back(matrix_to_json(m));
      for (const auto& m : t.a2) a2.push_back(matrix_to_json(m));
      return json{{"kind", "projection_onto"},
                  {"dim", op.dim()},
                  {"a1", a1},
                  {"a2", a2}};
    }
    json operator()(const SuperOperator::VolterraTag& t) const {
      return json{{"kind", "volterra"}, {"samples", t.samples}};
    }
  };
  return std::visit(Visitor{op}, op.structure());
}

SuperOperator superop_from_json(const json& j, double tol, const char* where) {
  const std::string kind = need(j, "kind", where).get<std::string>();
  if (kind == "dense") {
    const std::size_t dim = need_size(j, "dim", where);
    ComplexMatrix action = matrix_from_json(need(j, "action", where), where);
    if (action.rows() != dim * dim || action.cols() != dim * dim) {
      throw InputError(ctx(where, "dense action must be dim^2 x dim^2"));
    }
    return SuperOperator::dense(std::move(action));
  }
  if (kind == "left_mult") {
    return SuperOperator::left_mult(
        projection_from_json(need(j, "p", where), tol, where).matrix());
  }
  if (kind == "right_mult") {
    return SuperOperator::right_mult(
        projection_from_json(need(j, "q", where), tol, where).matrix());
  }
  if (kind == "triangular") {
    Projection p = projection_from_json(need(j, "p", where), tol, where);
    SuperOperator p1 = superop_from_json(need(j, "p1", where), tol, where);
    SuperOperator p2 = superop_from_json(need(j, "p2", where), tol, where);
    return SuperOperator::triangular(std::move(p1), std::move(p2),
                                     std::move(p));
  }
  if (kind == "direct_sum") {
    const json& parts = need(j, "parts", where);
    if (!parts.is_array() || parts.empty()) {
      throw InputError(ctx(where, "direct_sum needs a nonempty parts array"));
    }
    std::vector<SuperOperator> ops;
    for (const auto& part : parts) {
      ops.push_back(superop_from_json(part, tol, where));
    }
    return SuperOperator::direct_sum(std::move(ops));
  }
  if (kind == "volterra") {
    return SuperOperator::discrete_volterra(need_size(j, "samples", where));
  }
  if (kind == "projection_onto") {
    std::vector<ComplexMatrix> a1, a2;
    for (const auto& m : need(j, "a1", where)) {
      a1.push_back(matrix_from_json(m, where));
    }
    for (const auto& m : need(j, "a2", where)) {
      a2.push_back(matrix_from_json(m, where));
    }
    std::size_t dim = 0;
    if (j.contains("dim")) {
      dim = need_size(j, "dim", where);
    } else if (!a1.empty()) {
      dim = a1.front().rows();
    } else if (!a2.empty()) {
      dim = a2.front().rows();
    } else {
      throw InputError(ctx(where, "projection_onto needs a dim or a basis"));
    }
    return SuperOperator::projection_onto(std::move(a1), std::move(a2), dim);
  }
  throw InputError(ctx(where, "unknown operator kind '" + kind + "'"));
}

json certificate_to_json(const Certificate& cert) {
  json mode;
  if (cert.mode.kind == ProbeMode::Kind::exhaustive) {
    mode = json{{"kind", "exhaustive"}};
  } else {
    mode = json{{"kind", "random"},
                {"trials", cert.mode.trials},
                {"seed", cert.mode.seed}};
  }
  json witness{{"index_a", cert.worst.index_a},
               {"index_b", cert.worst.index_b},
               {"residual", cert.worst.residual}};
  if (!cert.worst.a.empty()) witness["a"] = matrix_to_json(cert.worst.a);
  if (!cert.worst.b.empty()) witness["b"] = matrix_to_json(cert.worst.b);
  return json{{"max_residual", cert.max_residual},
              {"tol", cert.tol},
              {"mode", mode},
              {"witness", witness}};
}

}  // namespace rbc
