#pragma once

#include <string>

#include <json.hpp>

#include "zk/experiments.hpp"
#include "zk/functionals.hpp"

namespace zkio {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const zk::SmallnessReport& r);
zk::SmallnessReport smallness_from_json(const json& j);

json to_json(const zk::DecayFit& f);
zk::DecayFit decay_fit_from_json(const json& j);

json to_json(const zk::ConvergenceReport& r);
zk::ConvergenceReport convergence_from_json(const json& j);

json to_json(const zk::PerturbationReport& r);
zk::PerturbationReport perturbation_from_json(const json& j);

json to_json(const zk::LemmaReport& r);
zk::LemmaReport lemmas_from_json(const json& j);

json to_json(const zk::DecayReport& r);

// Series CSV with header t,l2,weighted,h1,h2_partial,bracket2,trace0,ut_l2,ut_weighted,boundary_leak.
extern const char* const kSeriesHeader;
std::string series_to_csv(const zk::FunctionalSeries& s);
zk::FunctionalSeries series_from_csv(const std::string& text);

// Wraps a payload with schema_version, kind, generated_at and the config echo.
json envelope(const std::string& kind, json payload, const std::string& config_text);

std::string utc_timestamp();

}  // namespace zkio
