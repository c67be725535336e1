#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jester/core.hpp"

namespace jester::report {

// Hundredths of a percent, rounded half away from zero. Exact integer
// arithmetic; (36,100) -> 3600, (14,520) -> 269.
long long percent_scaled(long long successes, long long total);

// "36.00", "2.69", "0.00" — always exactly two fraction digits.
std::string format_percent(long long successes, long long total);
std::string format_scaled(long long scaled);

struct CellKey {
    std::string model;
    std::string dataset;
    std::string attack;
    auto operator<=>(const CellKey&) const = default;
};

struct SuccessCell {
    int successes = 0;
    int total = 0;
    int ambiguous = 0;  // counted as failures, surfaced in the footnote
    int errored = 0;    // trial errors, counted as failures, surfaced in the footnote

    long long scaled() const { return percent_scaled(successes, total); }
    std::string percent() const { return format_percent(successes, total); }
};

struct SuccessTable {
    std::vector<std::string> attacks;  // row labels, canonical order
    std::vector<std::pair<std::string, std::string>> columns;  // (model, dataset)
    std::map<CellKey, SuccessCell> cells;
    int ambiguous_total = 0;
    int errored_total = 0;

    const SuccessCell* find(const std::string& model, const std::string& dataset,
                            const std::string& attack) const;
};

// Groups judged transcripts by (model, dataset, attack label). Unsafe
// verdicts are successes; ambiguous verdicts and errored trials count as
// failures and are tallied separately.
SuccessTable aggregate(const std::filesystem::path& judged_path);

enum class Format { Markdown, Csv };

struct RenderOptions {
    std::vector<std::string> model_order;  // empty = alphabetical
    std::string missing_marker = "-";
};

std::string render(const SuccessTable& table, Format format,
                   const RenderOptions& options = {});

struct CompareResult {
    // (row in A, matched row in B)
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::pair<std::string, std::string>> columns;
    std::map<CellKey, long long> delta_scaled;  // keyed by the A row label
    int wins = 0;    // cells where A > B
    int losses = 0;  // cells where A < B
    int ties = 0;

    int cell_count() const { return wins + losses + ties; }
};

// Cell-wise percent deltas between two tables. Without a mapping, row label
// sets must match exactly; a mapping pairs A rows with B rows (many-to-one
// allowed, e.g. every subject row against one baseline row).
CompareResult compare(const SuccessTable& a, const SuccessTable& b,
                      const std::vector<std::pair<std::string, std::string>>& row_mapping = {});

std::string render_compare(const CompareResult& result,
                           const RenderOptions& options = {});

}  // namespace jester::report
