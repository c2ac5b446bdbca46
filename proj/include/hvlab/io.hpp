#pragma once

// JSON file formats (models, tables) and report serialization.

#include <filesystem>
#include <string>

#include "json.hpp"

#include "hvlab/inequalities.hpp"
#include "hvlab/kochenspecker.hpp"
#include "hvlab/models.hpp"
#include "hvlab/quantum.hpp"

namespace hvlab::io {

using Json = nlohmann::ordered_json;

/// Serializes with every floating-point number printed to 17 significant digits.
std::string dump(const Json& j, int indent = 2);

/// Parses a file; throws InputError when unreadable or not JSON.
Json read_json_file(const std::filesystem::path& path);

models::FactorizedModel parse_model(const Json& j);
Json to_json(const models::FactorizedModel& m);

models::StochasticKernelModel parse_stochastic_model(const Json& j);
Json to_json(const models::StochasticKernelModel& m);

models::ConditionalTable parse_table(const Json& j);
Json to_json(const models::ConditionalTable& t);

/// Nine reals ("1 0 0 0 1 0 0 0 1", commas allowed) to a frame.
quantum::Frame parse_frame(const std::string& text);

Json to_json(const quantum::PairStats& s);
Json to_json(const quantum::SpinJointTable& t);
Json to_json(const inequalities::BooleReport& r);
Json to_json(const inequalities::PolytopeResult& r);
Json to_json(const ks::SearchReport& r);
Json to_json(const ks::ObstructionReport& r);
Json to_json(const models::FreedomReport& r);
Json to_json(const models::PIReport& r);
Json to_json(const models::PerfectCorrelationReport& r);
Json to_json(const models::BellLocalityReport& r);

}  // namespace hvlab::io
