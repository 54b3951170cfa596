#pragma once

#include <string>

#include <json.hpp>

#include "ncgrad/entfun.hpp"
#include "ncgrad/transport.hpp"
#include "ncgrad/zoo.hpp"

namespace ncgrad {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers; +-inf and nan as the strings "inf", "-inf", "nan".
[[nodiscard]] Json number(double x);
[[nodiscard]] double number_from_json(const Json& j);

/// {"rows", "cols", "data": [[re, im], ...]} with data in row-major order.
[[nodiscard]] Json to_json(const Matrix& m);
[[nodiscard]] Matrix matrix_from_json(const Json& j);

/// {"blocks": [d_1, ...], "weights": [w_1, ...]}
[[nodiscard]] Json to_json(const TracialAlgebra& algebra);
[[nodiscard]] TracialAlgebra algebra_from_json(const Json& j);

/// {"name", "proven_k", "reference", "algebra", "jumps": [{"weight", "v"}],
///  "restriction": GNS basis matrix or null}. Group metadata is not stored.
[[nodiscard]] Json to_json(const ZooModel& model);
/// Throws std::invalid_argument (malformed document) or NumericalError
/// (invalid generator or restriction).
[[nodiscard]] ZooModel model_from_json(const Json& j);

[[nodiscard]] Json to_json(const QmsReport& report);
[[nodiscard]] Json to_json(const MeanAuditReport& report);
[[nodiscard]] Json to_json(const GEReport& report);
[[nodiscard]] Json to_json(const OptimalKGlobal& result);
[[nodiscard]] Json to_json(const IntertwineReport& report);
[[nodiscard]] Json to_json(const FisherDecayReport& report);
[[nodiscard]] Json to_json(const MlsiEstimate& estimate);
/// Path dump: densities, potentials and the action traces.
[[nodiscard]] Json to_json(const TransportResult& result);

}  // namespace ncgrad
