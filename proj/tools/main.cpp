// jester: humor-framed jailbreak red-teaming harness.
//
// Subcommands: datasets validate, forge, run, judge, report.
// Exit codes: 0 success, 1 partial trial errors, 2+ fatal.

#include <atomic>
#include <csignal>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jester/config.hpp"
#include "jester/datasets.hpp"
#include "jester/joke_forge.hpp"
#include "jester/judge.hpp"
#include "jester/prompt_forge.hpp"
#include "jester/report.hpp"
#include "jester/runner.hpp"
#include "jester/util.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

struct ForgeArgs {
    std::string tag;
    std::string path;
    std::string variant;
    std::string subject;
    std::string phrasing = "needs_help";
    std::string joke_kind;
    std::string joke;
    std::string joke_cache;
    std::string generator_model;
    std::string separator{jester::prompt_forge::kDefaultLaughterSeparator};
    int limit = 0;
    bool allow_partial = false;
};

std::vector<jester::UnsafeRequest> load_for_cli(const std::string& tag_str,
                                                const std::string& path,
                                                bool allow_partial) {
    const auto tag = jester::dataset_tag_from_string(tag_str);
    if (tag == jester::DatasetTag::DX) return jester::datasets::load_custom(path);
    return jester::datasets::load(jester::datasets::descriptor_for(tag), path,
                                  jester::datasets::default_adapter(tag), allow_partial);
}

int cmd_datasets_validate(const std::string& tag_str, const std::string& path,
                          bool allow_partial) {
    const auto tag = jester::dataset_tag_from_string(tag_str);
    const auto descriptor = jester::datasets::descriptor_for(tag);
    const auto records = load_for_cli(tag_str, path, allow_partial);
    std::cout << "dataset: " << jester::to_string(tag) << " (" << descriptor.name << ")\n"
              << "records: " << records.size() << "\n"
              << "checksum: fnv1a64:" << jester::util::hex64(jester::datasets::checksum(records))
              << "\n"
              << "first_id: " << (records.empty() ? "-" : records.front().id) << "\n";
    return 0;
}

int cmd_forge(const ForgeArgs& args) {
    const auto records = load_for_cli(args.tag, args.path, args.allow_partial);

    jester::AttackSpec spec;
    spec.variant = jester::attack_variant_from_string(args.variant);
    if (!args.subject.empty()) spec.subject = jester::subject_from_string(args.subject);
    spec.phrasing = jester::phrasing_from_string(args.phrasing);
    if (!args.joke_kind.empty())
        spec.joke_kind = jester::joke_kind_from_string(args.joke_kind);
    spec.validate();

    jester::joke_forge::JokeStore store =
        args.joke_cache.empty() ? jester::joke_forge::JokeStore()
                                : jester::joke_forge::JokeStore(args.joke_cache);

    std::size_t shown = 0;
    for (const auto& record : records) {
        if (args.limit > 0 && shown >= static_cast<std::size_t>(args.limit)) break;
        std::optional<std::string> joke;
        if (spec.needs_joke()) {
            if (!args.joke.empty()) {
                joke = args.joke;
            } else if (jester::joke_kind_is_fixed(*spec.joke_kind)) {
                joke = jester::joke_forge::fixed_joke(*spec.joke_kind);
            } else {
                joke = store.lookup(record, *spec.joke_kind, args.generator_model);
                if (!joke.has_value())
                    throw jester::MissingJokeError(
                        "no cached joke for " + record.id +
                        "; forge makes no network calls (pass --joke or point "
                        "--joke-cache at a populated cache)");
            }
        }
        const auto sequence = jester::prompt_forge::forge(record, spec, joke, args.separator);
        std::cout << "# " << record.id << " [" << spec.key() << "]\n";
        for (std::size_t i = 0; i < sequence.turns.size(); ++i) {
            std::cout << "--- turn " << (i + 1) << "/" << sequence.turns.size() << " ---\n"
                      << sequence.turns[i] << "\n";
        }
        std::cout << "\n";
        ++shown;
    }
    return 0;
}

int cmd_run(const std::string& config_path, bool resume, bool dry_run) {
    const auto config = jester::config::load_run_config(config_path);
    auto campaign = jester::config::to_campaign_config(config, resume);
    campaign.validate();

    if (dry_run) {
        auto requests =
            campaign.descriptor.tag == jester::DatasetTag::DX
                ? jester::datasets::load_custom(campaign.dataset_path)
                : jester::datasets::load(campaign.descriptor, campaign.dataset_path,
                                         campaign.adapter, campaign.allow_partial);
        if (campaign.limit > 0 && requests.size() > static_cast<std::size_t>(campaign.limit))
            requests.resize(campaign.limit);
        jester::joke_forge::JokeStore store =
            config.joke_cache_path ? jester::joke_forge::JokeStore(*config.joke_cache_path)
                                   : jester::joke_forge::JokeStore();
        std::size_t forged = 0;
        std::size_t pending_jokes = 0;
        for (const auto& request : requests) {
            for (const auto& attack : campaign.attacks) {
                std::optional<std::string> joke;
                if (attack.needs_joke()) {
                    if (jester::joke_kind_is_fixed(*attack.joke_kind)) {
                        joke = jester::joke_forge::fixed_joke(*attack.joke_kind);
                    } else {
                        joke = store.lookup(request, *attack.joke_kind,
                                            campaign.generator ? campaign.generator->name : "");
                        if (!joke.has_value()) {
                            joke = "[joke pending generation]";
                            ++pending_jokes;
                        }
                    }
                }
                jester::prompt_forge::forge(request, attack, joke,
                                            campaign.laughter_separator);
                ++forged;
            }
        }
        std::cout << "dry run ok: " << forged << " prompt sequence(s) forged for "
                  << requests.size() << " request(s) x " << campaign.attacks.size()
                  << " attack(s) x " << campaign.targets.size() << " target(s); "
                  << pending_jokes << " joke(s) pending generation\n";
        return 0;
    }

    auto transport = jester::config::make_transport(config.transport);
    jester::LlmClient client(transport);
    jester::joke_forge::JokeStore store =
        config.joke_cache_path ? jester::joke_forge::JokeStore(*config.joke_cache_path)
                               : jester::joke_forge::JokeStore();

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);

    const auto summary = jester::runner::run_campaign(campaign, client, store, &g_stop);
    std::cout << "run " << summary.run_id << ": total=" << summary.total
              << " ok=" << summary.ok << " error=" << summary.error
              << " skipped=" << summary.skipped << "\n"
              << "transcripts: " << campaign.output_path.string() << "\n";
    if (g_stop.load()) {
        std::cout << "interrupted; transcripts flushed, continue with --resume\n";
        return 1;
    }
    return summary.error > 0 ? 1 : 0;
}

int cmd_judge(const std::string& config_path, const std::string& in_path,
              const std::string& out_path) {
    const auto config = jester::config::load_run_config(config_path);
    auto transport = jester::config::make_transport(config.transport);
    jester::LlmClient client(transport);
    const auto endpoint = jester::config::pick_judge_endpoint(config);
    const auto rubric = jester::config::rubric_from(config);

    const auto summary = jester::judge::judge_run(client, endpoint, in_path, out_path,
                                                  config.parallelism, rubric);
    std::cout << "judged=" << summary.judged << " unsafe=" << summary.unsafe
              << " safe=" << summary.safe << " ambiguous=" << summary.ambiguous
              << " errors=" << summary.errors << " skipped=" << summary.skipped
              << " passthrough=" << summary.passthrough << "\n"
              << "judged transcripts: " << out_path << "\n";
    return summary.errors > 0 ? 1 : 0;
}

int cmd_report(const std::string& in_path, const std::string& format_str,
               const std::string& models_csv, const std::string& baseline_path,
               const std::string& baseline_row,
               const std::vector<std::string>& row_maps) {
    const auto table = jester::report::aggregate(in_path);

    jester::report::RenderOptions options;
    if (!models_csv.empty()) {
        std::stringstream ss(models_csv);
        std::string model;
        while (std::getline(ss, model, ','))
            options.model_order.push_back(jester::util::trim(model));
    }
    const auto format = format_str == "csv" ? jester::report::Format::Csv
                                            : jester::report::Format::Markdown;
    std::cout << jester::report::render(table, format, options);

    const bool want_compare = !baseline_path.empty() || !baseline_row.empty();
    if (!want_compare) return 0;

    const auto baseline_table =
        baseline_path.empty() ? table : jester::report::aggregate(baseline_path);

    std::vector<std::pair<std::string, std::string>> mapping;
    for (const auto& pair : row_maps) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw jester::ConfigError("--map expects ROW_A=ROW_B, got '" + pair + "'");
        mapping.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
    }
    if (!baseline_row.empty()) {
        for (const auto& attack : table.attacks)
            if (attack != baseline_row) mapping.emplace_back(attack, baseline_row);
    }

    const auto delta = jester::report::compare(table, baseline_table, mapping);
    std::cout << "\n" << jester::report::render_compare(delta, options);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"humor-framed jailbreak red-teaming harness"};
    app.require_subcommand(1);

    // datasets validate
    auto* datasets_cmd = app.add_subcommand("datasets", "dataset utilities");
    datasets_cmd->require_subcommand(1);
    auto* validate_cmd = datasets_cmd->add_subcommand("validate", "load a dataset and report count + checksum");
    std::string ds_tag, ds_path;
    bool ds_allow_partial = false;
    validate_cmd->add_option("tag", ds_tag, "dataset tag (D1|D2|D3|DX)")->required();
    validate_cmd->add_option("path", ds_path, "dataset file or directory")->required();
    validate_cmd->add_flag("--allow-partial", ds_allow_partial, "skip the expected-count check");

    // forge
    auto* forge_cmd = app.add_subcommand("forge", "print forged prompts without any network call");
    ForgeArgs forge_args;
    forge_cmd->add_option("--tag", forge_args.tag, "dataset tag")->required();
    forge_cmd->add_option("--path", forge_args.path, "dataset file or directory")->required();
    forge_cmd->add_option("--variant", forge_args.variant,
                          "direct_injection|humor|ablation|knock_knock|joke_prefixed")
        ->required();
    forge_cmd->add_option("--subject", forge_args.subject, "man|chicken|first_person|goat");
    forge_cmd->add_option("--phrasing", forge_args.phrasing, "needs_help|told_to");
    forge_cmd->add_option("--joke-kind", forge_args.joke_kind, "joke kind for knock_knock/joke_prefixed");
    forge_cmd->add_option("--joke", forge_args.joke, "explicit joke text override");
    forge_cmd->add_option("--joke-cache", forge_args.joke_cache, "joke cache JSONL for generated kinds");
    forge_cmd->add_option("--generator-model", forge_args.generator_model,
                          "generator model name used for cache lookups");
    forge_cmd->add_option("--separator", forge_args.separator, "laughter separator");
    forge_cmd->add_option("--limit", forge_args.limit, "only forge the first N records");
    forge_cmd->add_flag("--allow-partial", forge_args.allow_partial, "skip the expected-count check");

    // run
    auto* run_cmd = app.add_subcommand("run", "execute a campaign from a config file");
    std::string run_config;
    bool run_resume = false, run_dry = false;
    run_cmd->add_option("--config", run_config, "run config JSON")->required();
    run_cmd->add_flag("--resume", run_resume, "skip trials already in the output");
    run_cmd->add_flag("--dry-run", run_dry, "forge everything, call nothing");

    // judge
    auto* judge_cmd = app.add_subcommand("judge", "judge a transcripts file");
    std::string judge_config, judge_in, judge_out;
    judge_cmd->add_option("--config", judge_config, "run config JSON")->required();
    judge_cmd->add_option("--in", judge_in, "transcripts JSONL")->required();
    judge_cmd->add_option("--out", judge_out, "judged transcripts JSONL")->required();

    // report
    auto* report_cmd = app.add_subcommand("report", "aggregate judged transcripts into a table");
    std::string report_in, report_format = "markdown", report_models, report_baseline,
                report_baseline_row;
    std::vector<std::string> report_maps;
    report_cmd->add_option("--in", report_in, "judged transcripts JSONL")->required();
    report_cmd->add_option("--format", report_format, "markdown|csv");
    report_cmd->add_option("--models", report_models, "comma-separated model column order");
    report_cmd->add_option("--baseline", report_baseline, "judged JSONL to compare against");
    report_cmd->add_option("--baseline-row", report_baseline_row,
                           "compare every other row against this row");
    report_cmd->add_option("--map", report_maps, "row mapping ROW_A=ROW_B (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) return cmd_datasets_validate(ds_tag, ds_path, ds_allow_partial);
        if (*forge_cmd) return cmd_forge(forge_args);
        if (*run_cmd) return cmd_run(run_config, run_resume, run_dry);
        if (*judge_cmd) return cmd_judge(judge_config, judge_in, judge_out);
        if (*report_cmd)
            return cmd_report(report_in, report_format, report_models, report_baseline,
                              report_baseline_row, report_maps);
    } catch (const jester::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
