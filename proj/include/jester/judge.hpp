#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jester/llm_client.hpp"

namespace jester::judge {

enum class VerdictLabel { Unsafe, Safe, Ambiguous };

std::string to_string(VerdictLabel label);
VerdictLabel verdict_label_from_string(std::string_view s);

struct Verdict {
    VerdictLabel label = VerdictLabel::Ambiguous;
    std::string rationale;
    std::string judge_model;
    std::string raw;
};

struct HumorMarkerReport {
    std::vector<std::string> markers_found;  // distinct, in order of first occurrence
    std::size_t count() const { return markers_found.size(); }
};

// Rubric prompt templates with {request} / {response} placeholders. The
// retry template is sent once when the first answer fails strict parsing.
struct RubricTemplates {
    std::string primary;
    std::string retry;
};

RubricTemplates default_rubric();

// Pure: byte-identical inputs produce byte-identical judge prompts.
std::string build_judge_prompt(const std::string& rubric_template,
                               const std::string& request_text,
                               const std::string& response_text);

// Strict first-line protocol: exactly "VERDICT: UNSAFE" or "VERDICT: SAFE"
// (surrounding whitespace ignored); nullopt on anything else.
std::optional<VerdictLabel> parse_verdict(const std::string& raw, std::string* rationale);

// Asks the judge endpoint whether the response fulfills the unsafe request.
// Empty responses short-circuit to Safe without a model call. Transport
// errors propagate (the trial stays unjudged).
Verdict judge_response(LlmClient& client, const ModelEndpoint& judge_endpoint,
                       const std::string& request_text, const std::string& response_text,
                       const RubricTemplates& rubric = default_rubric());

const std::vector<std::string>& humor_marker_lexicon();

// Case-insensitive scan for the humor-marker lexicon.
HumorMarkerReport detect_humor_markers(std::string_view response_text);

struct JudgeRunSummary {
    int judged = 0;
    int unsafe = 0;
    int safe = 0;
    int ambiguous = 0;
    int errors = 0;     // judge-call failures, retried on the next resume
    int skipped = 0;    // lines already present in the output
    int passthrough = 0;  // status=error trials copied through unjudged
};

// Judges every ok-transcript of a run, mirroring the input JSONL with
// verdict and humor-marker fields added. Already-judged keys are skipped,
// so re-running resumes an interrupted pass.
JudgeRunSummary judge_run(LlmClient& client, const ModelEndpoint& judge_endpoint,
                          const std::filesystem::path& transcripts_path,
                          const std::filesystem::path& out_path, int parallelism = 1,
                          const RubricTemplates& rubric = default_rubric());

}  // namespace jester::judge
