#pragma once

#include "moelab/entropy.hpp"
#include "moelab/experiments.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace moelab {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Provenance block emitted exactly once per CLI run. Timestamps and paths
/// are the only fields expected to differ between reruns of an equal
/// configuration.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string version = kArtifactVersion;
  SeedSpec seed;
  std::string started_at;   // ISO 8601, UTC
  std::string finished_at;  // ISO 8601, UTC
  std::vector<std::string> output_paths;
};

std::string utc_timestamp();

nlohmann::json to_json(const SeedSpec& seed);
nlohmann::json to_json(const SetParams& params);
nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const MinEntResult& result);
nlohmann::json to_json(const PipelineRow& row);
nlohmann::json to_json(const PipelineResult& result);
nlohmann::json to_json(const RunManifest& manifest);

/// Strips the fields that legitimately differ between reruns (manifest
/// timestamps, runtimes, file paths), leaving only the numeric payload.
nlohmann::json numeric_payload(nlohmann::json document);

}  // namespace moelab
