#include "jester/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "jester/util.hpp"

namespace jester::config {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown key '" + key + "' in " + context);
    }
}

ModelEndpoint endpoint_from_json(const json& j, const std::string& context) {
    reject_unknown_keys(j,
                        {"name", "base_url", "api_key_env", "temperature", "max_tokens",
                         "timeout_ms", "max_retries", "backoff_ms"},
                        context);
    ModelEndpoint endpoint;
    if (!j.contains("name")) throw ConfigError(context + " needs a 'name'");
    endpoint.name = j["name"].get<std::string>();
    endpoint.base_url = j.value("base_url", "");
    endpoint.api_key_env = j.value("api_key_env", "");
    endpoint.temperature = j.value("temperature", 0.0);
    endpoint.max_tokens = j.value("max_tokens", 1024);
    endpoint.timeout = std::chrono::milliseconds(j.value("timeout_ms", 60000));
    endpoint.max_retries = j.value("max_retries", 3);
    endpoint.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", 1000));
    return endpoint;
}

AttackSpec attack_from_json(const json& j, const std::string& context) {
    reject_unknown_keys(j, {"variant", "subject", "phrasing", "joke_kind"}, context);
    AttackSpec attack;
    if (!j.contains("variant")) throw ConfigError(context + " needs a 'variant'");
    attack.variant = attack_variant_from_string(j["variant"].get<std::string>());
    if (j.contains("subject"))
        attack.subject = subject_from_string(j["subject"].get<std::string>());
    if (j.contains("phrasing"))
        attack.phrasing = phrasing_from_string(j["phrasing"].get<std::string>());
    if (j.contains("joke_kind"))
        attack.joke_kind = joke_kind_from_string(j["joke_kind"].get<std::string>());
    attack.validate();
    return attack;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config file is not valid JSON: " + path.string());

    reject_unknown_keys(j,
                        {"dataset", "targets", "generator", "judge", "attacks", "parallelism",
                         "output_path", "joke_cache_path", "transport", "laughter_separator",
                         "system_prompt", "judge_rubric", "judge_rubric_retry"},
                        "config");

    RunConfig config;

    if (!j.contains("dataset")) throw ConfigError("config needs a 'dataset' section");
    {
        const json& d = j["dataset"];
        reject_unknown_keys(d,
                            {"tag", "path", "text_column", "category_column",
                             "phrasing_column", "has_header", "allow_partial", "limit"},
                            "dataset");
        if (!d.contains("tag") || !d.contains("path"))
            throw ConfigError("dataset needs 'tag' and 'path'");
        config.dataset.tag = dataset_tag_from_string(d["tag"].get<std::string>());
        config.dataset.path = d["path"].get<std::string>();
        config.dataset.adapter = datasets::default_adapter(config.dataset.tag);
        if (d.contains("text_column"))
            config.dataset.adapter.text_column = d["text_column"].get<std::string>();
        if (d.contains("category_column"))
            config.dataset.adapter.category_column = d["category_column"].get<std::string>();
        if (d.contains("phrasing_column"))
            config.dataset.adapter.phrasing_column = d["phrasing_column"].get<std::string>();
        if (d.contains("has_header"))
            config.dataset.adapter.has_header = d["has_header"].get<bool>();
        config.dataset.allow_partial = d.value("allow_partial", false);
        config.dataset.limit = d.value("limit", 0);
        if (config.dataset.limit < 0) throw ConfigError("dataset limit must be >= 0");
        if (config.dataset.limit > 0) config.dataset.allow_partial = true;
    }

    if (!j.contains("targets") || !j["targets"].is_array() || j["targets"].empty())
        throw ConfigError("config needs a non-empty 'targets' array");
    for (const auto& t : j["targets"])
        config.targets.push_back(endpoint_from_json(t, "target endpoint"));

    if (j.contains("generator"))
        config.generator = endpoint_from_json(j["generator"], "generator endpoint");
    if (j.contains("judge"))
        config.judge_endpoint = endpoint_from_json(j["judge"], "judge endpoint");

    if (!j.contains("attacks") || !j["attacks"].is_array() || j["attacks"].empty())
        throw ConfigError("config needs a non-empty 'attacks' array");
    for (const auto& a : j["attacks"]) config.attacks.push_back(attack_from_json(a, "attack"));

    config.parallelism = j.value("parallelism", 1);
    if (config.parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (!j.contains("output_path")) throw ConfigError("config needs an 'output_path'");
    config.output_path = j["output_path"].get<std::string>();
    if (j.contains("joke_cache_path"))
        config.joke_cache_path = std::filesystem::path(j["joke_cache_path"].get<std::string>());

    if (j.contains("transport")) {
        const json& t = j["transport"];
        reject_unknown_keys(t, {"mode", "fixture", "record", "latency_ms"}, "transport");
        config.transport.mode = t.value("mode", "http");
        if (t.contains("fixture"))
            config.transport.fixture = std::filesystem::path(t["fixture"].get<std::string>());
        if (t.contains("record"))
            config.transport.record = std::filesystem::path(t["record"].get<std::string>());
        config.transport.latency_ms = t.value("latency_ms", 0);
    }

    if (j.contains("laughter_separator"))
        config.laughter_separator = j["laughter_separator"].get<std::string>();
    if (j.contains("system_prompt"))
        config.system_prompt = j["system_prompt"].get<std::string>();
    if (j.contains("judge_rubric"))
        config.judge_rubric = j["judge_rubric"].get<std::string>();
    if (j.contains("judge_rubric_retry"))
        config.judge_rubric_retry = j["judge_rubric_retry"].get<std::string>();

    return config;
}

std::shared_ptr<Transport> make_transport(const TransportConfig& transport) {
    const auto latency = std::chrono::milliseconds(transport.latency_ms);
    std::shared_ptr<Transport> inner;
    if (transport.mode == "http") {
        inner = std::make_shared<HttpTransport>();
    } else if (transport.mode == "echo") {
        inner = make_echo_transport(latency);
    } else if (transport.mode == "replay") {
        if (!transport.fixture.has_value())
            throw ConfigError("replay transport needs a 'fixture' path");
        inner = std::make_shared<ReplayTransport>(*transport.fixture, latency);
    } else {
        throw ConfigError("unknown transport mode '" + transport.mode + "'");
    }
    if (transport.record.has_value())
        return std::make_shared<RecordingTransport>(std::move(inner), *transport.record);
    return inner;
}

runner::CampaignConfig to_campaign_config(const RunConfig& config, bool resume) {
    runner::CampaignConfig campaign;
    campaign.descriptor = datasets::descriptor_for(config.dataset.tag);
    campaign.dataset_path = config.dataset.path;
    campaign.adapter = config.dataset.adapter;
    campaign.allow_partial = config.dataset.allow_partial;
    campaign.limit = config.dataset.limit;
    campaign.targets = config.targets;
    campaign.attacks = config.attacks;
    campaign.generator = config.generator;
    campaign.parallelism = config.parallelism;
    campaign.output_path = config.output_path;
    campaign.resume = resume;
    campaign.laughter_separator = config.laughter_separator;
    campaign.system_prompt = config.system_prompt;
    return campaign;
}

namespace {

// Parses a parameter count out of a model name: "70B" -> 70e9, "8x7B" -> 56e9.
double parameter_count(const std::string& name) {
    const std::string lowered = util::to_lower(name);
    double best = 0.0;
    for (std::size_t i = 0; i < lowered.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(lowered[i]))) continue;
        std::size_t end = i;
        double value = 0.0;
        while (end < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[end]))) {
            value = value * 10 + (lowered[end] - '0');
            ++end;
        }
        if (end < lowered.size() && lowered[end] == 'x' && end + 1 < lowered.size() &&
            std::isdigit(static_cast<unsigned char>(lowered[end + 1]))) {
            // mixture notation: experts x size
            std::size_t k = end + 1;
            double second = 0.0;
            while (k < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[k]))) {
                second = second * 10 + (lowered[k] - '0');
                ++k;
            }
            if (k < lowered.size() && lowered[k] == 'b') {
                best = std::max(best, value * second);
                i = k;
                continue;
            }
        }
        if (end < lowered.size() && lowered[end] == 'b') best = std::max(best, value);
        i = end;
    }
    return best;
}

}  // namespace

ModelEndpoint pick_judge_endpoint(const RunConfig& config) {
    if (config.judge_endpoint.has_value()) return *config.judge_endpoint;
    const ModelEndpoint* best = nullptr;
    double best_size = -1.0;
    for (const auto& target : config.targets) {
        const double size = parameter_count(target.name);
        if (size > best_size) {
            best_size = size;
            best = &target;
        }
    }
    if (best == nullptr || best_size <= 0.0)
        throw ConfigError("no judge endpoint configured and target sizes are not parseable; "
                          "add a 'judge' section");
    return *best;
}

judge::RubricTemplates rubric_from(const RunConfig& config) {
    judge::RubricTemplates rubric = judge::default_rubric();
    if (config.judge_rubric.has_value()) rubric.primary = *config.judge_rubric;
    if (config.judge_rubric_retry.has_value()) rubric.retry = *config.judge_rubric_retry;
    return rubric;
}

}  // namespace jester::config
