#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jester/judge.hpp"
#include "jester/llm_client.hpp"
#include "jester/runner.hpp"

namespace jester::config {

struct TransportConfig {
    std::string mode = "http";  // http | replay | echo
    std::optional<std::filesystem::path> fixture;  // replay source
    std::optional<std::filesystem::path> record;   // fixture capture path
    int latency_ms = 0;  // synthetic latency for echo/replay
};

struct DatasetConfig {
    DatasetTag tag = DatasetTag::DX;
    std::filesystem::path path;
    datasets::AdapterConfig adapter;
    bool allow_partial = false;
    int limit = 0;  // 0 = all records
};

// The run configuration file (JSON). Unknown keys are rejected; endpoint
// credentials are environment-variable names, never inline secrets.
struct RunConfig {
    DatasetConfig dataset;
    std::vector<ModelEndpoint> targets;
    std::optional<ModelEndpoint> generator;
    std::optional<ModelEndpoint> judge_endpoint;
    std::vector<AttackSpec> attacks;
    int parallelism = 1;
    std::filesystem::path output_path;
    std::optional<std::filesystem::path> joke_cache_path;
    TransportConfig transport;
    std::string laughter_separator{prompt_forge::kDefaultLaughterSeparator};
    std::optional<std::string> system_prompt;
    std::optional<std::string> judge_rubric;
    std::optional<std::string> judge_rubric_retry;
};

RunConfig load_run_config(const std::filesystem::path& path);

std::shared_ptr<Transport> make_transport(const TransportConfig& transport);

runner::CampaignConfig to_campaign_config(const RunConfig& config, bool resume);

// Judge endpoint: the configured one, or the largest target by the parameter
// count parsed from its name (e.g. "...-70B..." beats "...-8x7B...").
ModelEndpoint pick_judge_endpoint(const RunConfig& config);

judge::RubricTemplates rubric_from(const RunConfig& config);

}  // namespace jester::config
