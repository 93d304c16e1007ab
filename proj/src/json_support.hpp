#pragma once

#include <json.hpp>

#include "asymptotica/linalg.hpp"
#include "asymptotica/operator_model.hpp"

namespace asymptotica::detail {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Json matrix_to_json(const Matrix& m);
Json probe_to_json(const SupportedVector& x);
Json model_to_json(const OperatorModel& t);
OperatorModel model_from_json(const Json& j);

}  // namespace asymptotica::detail
