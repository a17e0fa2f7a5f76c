#pragma once

#include <json.hpp>

#include "aenmf/config.hpp"

namespace aenmf {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg);
nlohmann::ordered_json synth_json(const SynthSpec& spec);

}  // namespace aenmf
