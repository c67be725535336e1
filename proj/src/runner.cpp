#include "jester/runner.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <set>

#include <json.hpp>

#include "jester/util.hpp"

namespace jester::runner {

using nlohmann::json;

void CampaignConfig::validate() const {
    if (targets.empty()) throw ConfigError("campaign needs at least one target endpoint");
    if (attacks.empty()) throw ConfigError("campaign needs at least one attack");
    if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
    if (output_path.empty()) throw ConfigError("output_path is required");
    for (const auto& attack : attacks) attack.validate();
    const bool generated = std::any_of(attacks.begin(), attacks.end(),
                                       [](const AttackSpec& a) { return a.needs_generated_joke(); });
    if (generated && !generator.has_value())
        throw ConfigError("generated-joke attacks require a generator endpoint");
}

std::string trial_key(const std::string& request_id, const AttackSpec& attack,
                      const std::string& target_model) {
    return request_id + "|" + attack.key() + "|" + target_model;
}

std::string Transcript::key() const {
    return trial_key(request.id, attack, target_model);
}

namespace {

json attack_to_json(const AttackSpec& attack) {
    json j;
    j["variant"] = to_string(attack.variant);
    j["subject"] = attack.subject ? json(to_string(*attack.subject)) : json(nullptr);
    j["phrasing"] = to_string(attack.phrasing);
    j["joke_kind"] = attack.joke_kind ? json(to_string(*attack.joke_kind)) : json(nullptr);
    return j;
}

AttackSpec attack_from_json(const json& j) {
    AttackSpec attack;
    attack.variant = attack_variant_from_string(j.at("variant").get<std::string>());
    if (j.contains("subject") && !j["subject"].is_null())
        attack.subject = subject_from_string(j["subject"].get<std::string>());
    if (j.contains("phrasing") && !j["phrasing"].is_null())
        attack.phrasing = phrasing_from_string(j["phrasing"].get<std::string>());
    if (j.contains("joke_kind") && !j["joke_kind"].is_null())
        attack.joke_kind = joke_kind_from_string(j["joke_kind"].get<std::string>());
    return attack;
}

json conversation_to_json(const Conversation& conversation) {
    json messages = json::array();
    for (const auto& m : conversation.messages)
        messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    return messages;
}

Conversation conversation_from_json(const json& messages) {
    Conversation conversation;
    for (const auto& m : messages)
        conversation.messages.push_back(
            {role_from_string(m.at("role").get<std::string>()),
             m.at("content").get<std::string>()});
    return conversation;
}

}  // namespace

std::string Transcript::to_jsonl() const {
    json j;
    j["run_id"] = run_id;
    j["request"] = {
        {"id", request.id},
        {"text", request.text},
        {"dataset_tag", to_string(request.dataset_tag)},
        {"category", request.category ? json(*request.category) : json(nullptr)},
    };
    j["attack"] = attack_to_json(attack);
    j["attack_key"] = attack.key();
    j["attack_label"] = attack.label();
    j["target_model"] = target_model;
    j["prompts"] = prompts.turns;
    j["conversation"] = conversation_to_json(conversation);
    j["response"] = response;
    j["joke_text"] = joke_text ? json(*joke_text) : json(nullptr);
    j["status"] = status;
    j["error_detail"] = error_detail ? json(*error_detail) : json(nullptr);
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    return j.dump();
}

Transcript Transcript::from_json_line(const std::string& line) {
    json j = json::parse(line);
    Transcript t;
    t.run_id = j.at("run_id").get<std::string>();
    const auto& req = j.at("request");
    t.request.id = req.at("id").get<std::string>();
    t.request.text = req.at("text").get<std::string>();
    t.request.dataset_tag = dataset_tag_from_string(req.at("dataset_tag").get<std::string>());
    if (req.contains("category") && !req["category"].is_null())
        t.request.category = req["category"].get<std::string>();
    t.attack = attack_from_json(j.at("attack"));
    t.target_model = j.at("target_model").get<std::string>();
    t.prompts.turns = j.at("prompts").get<std::vector<std::string>>();
    t.conversation = conversation_from_json(j.at("conversation"));
    t.response = j.at("response").get<std::string>();
    if (j.contains("joke_text") && !j["joke_text"].is_null())
        t.joke_text = j["joke_text"].get<std::string>();
    t.status = j.at("status").get<std::string>();
    if (j.contains("error_detail") && !j["error_detail"].is_null())
        t.error_detail = j["error_detail"].get<std::string>();
    t.started_at = j.value("started_at", "");
    t.finished_at = j.value("finished_at", "");
    return t;
}

namespace {

struct Trial {
    const UnsafeRequest* request;
    const AttackSpec* attack;
    const ModelEndpoint* target;
};

std::set<std::string> existing_keys(const std::filesystem::path& output_path) {
    std::set<std::string> keys;
    std::ifstream in(output_path);
    if (!in) return keys;
    std::string line;
    while (std::getline(in, line)) {
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;  // truncated tail from a crash
        try {
            keys.insert(j.at("request").at("id").get<std::string>() + "|" +
                        j.at("attack_key").get<std::string>() + "|" +
                        j.at("target_model").get<std::string>());
        } catch (const json::exception&) {
            // not a transcript line; ignore
        }
    }
    return keys;
}

}  // namespace

RunSummary run_campaign(const CampaignConfig& config, LlmClient& client,
                        joke_forge::JokeStore& jokes, const std::atomic<bool>* stop) {
    config.validate();

    auto requests =
        config.descriptor.tag == DatasetTag::DX && !std::filesystem::is_directory(config.dataset_path) &&
                config.dataset_path.extension() == ".jsonl"
            ? datasets::load_custom(config.dataset_path)
            : datasets::load(config.descriptor, config.dataset_path, config.adapter,
                             config.allow_partial);
    if (config.limit > 0 && requests.size() > static_cast<std::size_t>(config.limit))
        requests.resize(config.limit);

    RunSummary summary;
    summary.run_id = util::utc_compact_now() + "-" + util::random_hex(4);

    std::set<std::string> done;
    if (config.resume) {
        done = existing_keys(config.output_path);
        util::repair_jsonl_tail(config.output_path);
    } else if (std::filesystem::exists(config.output_path) &&
               std::filesystem::file_size(config.output_path) > 0) {
        throw ConfigError("output file already exists: " + config.output_path.string() +
                          " (pass resume to continue it)");
    }

    if (config.output_path.has_parent_path())
        std::filesystem::create_directories(config.output_path.parent_path());
    std::ofstream out(config.output_path, std::ios::app);
    if (!out) throw OutputIOError("cannot open output: " + config.output_path.string());

    std::vector<Trial> trials;
    trials.reserve(requests.size() * config.attacks.size() * config.targets.size());
    for (const auto& request : requests) {
        for (const auto& attack : config.attacks) {
            for (const auto& target : config.targets) {
                if (done.contains(trial_key(request.id, attack, target.name))) {
                    ++summary.skipped;
                    continue;
                }
                trials.push_back({&request, &attack, &target});
            }
        }
    }

    std::mutex sink_mutex;  // guards `out` and `summary`

    util::parallel_for(trials.size(), config.parallelism, [&](std::size_t i) {
        if (stop != nullptr && stop->load()) return;
        const Trial& trial = trials[i];

        Transcript t;
        t.run_id = summary.run_id;
        t.request = *trial.request;
        t.attack = *trial.attack;
        t.target_model = trial.target->name;
        t.started_at = util::utc_iso8601_now();

        try {
            std::optional<std::string> joke;
            if (trial.attack->needs_joke()) {
                const JokeKind kind = *trial.attack->joke_kind;
                joke = joke_kind_is_fixed(kind)
                           ? joke_forge::fixed_joke(kind)
                           : jokes.get_or_create(*trial.request, kind, client,
                                                 *config.generator);
                t.joke_text = joke;
            }
            t.prompts = prompt_forge::forge(*trial.request, *trial.attack, joke,
                                            config.laughter_separator);
            t.conversation = client.run_multi_turn(*trial.target, t.prompts.turns,
                                                   config.system_prompt);
            t.response = t.conversation.last_assistant();
            t.status = "ok";
        } catch (const std::exception& e) {
            t.status = "error";
            t.error_detail = e.what();
        }
        t.finished_at = util::utc_iso8601_now();

        std::lock_guard lock(sink_mutex);
        out << t.to_jsonl() << '\n' << std::flush;
        if (!out) throw OutputIOError("write failed: " + config.output_path.string());
        ++summary.total;
        if (t.status == "ok") ++summary.ok;
        else ++summary.error;
    });

    return summary;
}

}  // namespace jester::runner
