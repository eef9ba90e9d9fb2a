#pragma once

#include "bapred/harness.hpp"

#include <json.hpp>

#include <filesystem>

namespace bapred {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Scenario files. Global predictions use "prediction": [ids]; local ones use
/// "local_prediction": [[ids of node 1], [ids of node 2], ...].
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

Json adversary_to_json(const AdversarySpec& a);
AdversarySpec adversary_from_json(const Json& j);

Json outcome_to_json(const Scenario& s, const ScenarioResult& r);
Json transcripts_to_json(const std::vector<Transcript>& transcripts);
Json message_to_json(const Message& m);
Json report_to_json(const SuiteReport& report);

/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace bapred
