#pragma once

#include <string>

#include <json.hpp>

#include "ssmc/model.hpp"

namespace ssmc {

nlohmann::json model_to_json(const SsmModel& m);
SsmModel model_from_json(const nlohmann::json& j);

std::string dump_model(const SsmModel& m);
SsmModel parse_model(const std::string& text);

void save_model(const SsmModel& m, const std::string& path);
SsmModel load_model(const std::string& path);

}  // namespace ssmc
