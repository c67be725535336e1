#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jester/core.hpp"
#include "jester/datasets.hpp"
#include "jester/joke_forge.hpp"
#include "jester/llm_client.hpp"
#include "jester/prompt_forge.hpp"

namespace jester::runner {

struct CampaignConfig {
    datasets::DatasetDescriptor descriptor;
    std::filesystem::path dataset_path;
    datasets::AdapterConfig adapter;
    bool allow_partial = false;
    int limit = 0;  // run only the first N records (0 = all)

    std::vector<ModelEndpoint> targets;
    std::vector<AttackSpec> attacks;
    std::optional<ModelEndpoint> generator;  // required for generated-joke attacks

    int parallelism = 1;
    std::filesystem::path output_path;
    bool resume = false;

    std::string laughter_separator{prompt_forge::kDefaultLaughterSeparator};
    std::optional<std::string> system_prompt;  // none by default

    void validate() const;  // throws ConfigError
};

// One (request x attack x target) trial.
struct Transcript {
    std::string run_id;
    UnsafeRequest request;
    AttackSpec attack;
    std::string target_model;
    PromptSequence prompts;
    Conversation conversation;
    std::string response;  // final assistant message when status == ok
    std::optional<std::string> joke_text;
    std::string status = "ok";  // "ok" | "error"
    std::optional<std::string> error_detail;
    std::string started_at;
    std::string finished_at;

    std::string key() const;
    std::string to_jsonl() const;
    static Transcript from_json_line(const std::string& line);
};

std::string trial_key(const std::string& request_id, const AttackSpec& attack,
                      const std::string& target_model);

struct RunSummary {
    int total = 0;    // trials executed in this invocation
    int ok = 0;
    int error = 0;
    int skipped = 0;  // already present in the output (resume)
    std::string run_id;
};

// Executes the cross product of requests x attacks x targets, appending one
// transcript line per trial. Trial failures are recorded, never fatal. With
// resume, keys already present in the output are skipped; `stop` (when set)
// requests an orderly drain after in-flight trials finish.
RunSummary run_campaign(const CampaignConfig& config, LlmClient& client,
                        joke_forge::JokeStore& jokes,
                        const std::atomic<bool>* stop = nullptr);

}  // namespace jester::runner
