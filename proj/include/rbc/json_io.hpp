#pragma once

// JSON wire formats. Complex numbers are [re, im] pairs everywhere;
// matrices are {"rows", "cols", "data"} with row-major data; operators,
// projections and spaces are tagged objects. ordered_json keeps key order
// fixed so identical runs serialize byte-identically.

#include "json.hpp"
#include "rbc/algebra.hpp"
#include "rbc/matrix.hpp"
#include "rbc/projection.hpp"
#include "rbc/rb.hpp"
#include "rbc/superop.hpp"

namespace rbc {

using json = nlohmann::ordered_json;

json complex_to_json(cd z);
cd complex_from_json(const json& j, const char* where);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const char* where);

json projection_to_json(const Projection& p);
Projection projection_from_json(const json& j, double tol,
                                const char* where);

json space_to_json(const AlgebraSpace& s);
AlgebraSpace space_from_json(const json& j, double tol, const char* where);

json superop_to_json(const SuperOperator& op);
SuperOperator superop_from_json(const json& j, double tol, const char* where);

json certificate_to_json(const Certificate& cert);

}  // namespace rbc
