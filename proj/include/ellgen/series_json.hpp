#pragma once

#include <json.hpp>

#include "ellgen/series.hpp"

namespace ellgen {

nlohmann::json coeff_to_json(const Coeff& c);
Coeff coeff_from_json(const nlohmann::json& j);

nlohmann::json series_to_json(const MultiSeries& s);
MultiSeries series_from_json(const nlohmann::json& j);

nlohmann::json fraction_to_json(const SeriesFraction& f);
SeriesFraction fraction_from_json(const nlohmann::json& j);

}  // namespace ellgen
