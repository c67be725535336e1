#include "jester/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "jester/util.hpp"

namespace jester::datasets {

using nlohmann::json;
namespace fs = std::filesystem;

DatasetDescriptor descriptor_for(DatasetTag tag) {
    switch (tag) {
        case DatasetTag::D1: return {tag, "JBB", 100};
        case DatasetTag::D2: return {tag, "AdvBench", 520};
        case DatasetTag::D3: return {tag, "HEx-PHI", 300};
        case DatasetTag::DX: return {tag, "custom", 0};
    }
    return {DatasetTag::DX, "custom", 0};
}

AdapterConfig default_adapter(DatasetTag tag) {
    switch (tag) {
        case DatasetTag::D1: return {"Goal", "Category", "", true};
        case DatasetTag::D2: return {"goal", "", "", true};
        case DatasetTag::D3: return {"", "", "", false};  // headerless single column
        case DatasetTag::DX: return {"text", "category", "", true};
    }
    return {};
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    char c;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };

    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_started) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field.push_back(c);
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                field.push_back(c);
                field_started = true;
                break;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted CSV field");
    if (field_started || !field.empty() || !row.empty()) end_row();
    return rows;
}

namespace {

int find_column(const std::vector<std::string>& header, const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw ParseError("CSV is missing required column '" + name + "'");
    return static_cast<int>(it - header.begin());
}

struct ColumnMap {
    int text = 0;
    int category = -1;
    int phrasing = -1;
};

void append_csv_records(const fs::path& file, const AdapterConfig& adapter,
                        const std::string& default_category,
                        std::vector<UnsafeRequest>& out) {
    std::ifstream in(file);
    if (!in) throw ParseError("cannot open dataset file: " + file.string());
    auto rows = parse_csv(in);
    std::size_t start = 0;
    ColumnMap columns;
    if (adapter.has_header) {
        if (rows.empty()) return;
        const auto& header = rows[0];
        columns.text = adapter.text_column.empty() ? 0 : find_column(header, adapter.text_column);
        if (!adapter.category_column.empty())
            columns.category = find_column(header, adapter.category_column);
        if (!adapter.phrasing_column.empty())
            columns.phrasing = find_column(header, adapter.phrasing_column);
        start = 1;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() == 1 && util::trim(row[0]).empty()) continue;  // blank line
        if (columns.text >= static_cast<int>(row.size()))
            throw ParseError("row " + std::to_string(i + 1) + " of " + file.string() +
                             " has no text column");
        UnsafeRequest record;
        record.text = util::trim(row[columns.text]);
        if (record.text.empty())
            throw ParseError("row " + std::to_string(i + 1) + " of " + file.string() +
                             " has empty request text");
        if (columns.category >= 0 && columns.category < static_cast<int>(row.size())) {
            std::string category = util::trim(row[columns.category]);
            if (!category.empty()) record.category = category;
        } else if (!default_category.empty()) {
            record.category = default_category;
        }
        if (columns.phrasing >= 0 && columns.phrasing < static_cast<int>(row.size())) {
            std::string phrasing = util::trim(row[columns.phrasing]);
            if (!phrasing.empty())
                record.phrasing_override = phrasing_from_string(util::to_lower(phrasing));
        }
        out.push_back(std::move(record));
    }
}

std::string make_id(DatasetTag tag, std::size_t ordinal) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04zu", ordinal);
    return to_string(tag) + "-" + buf;
}

}  // namespace

std::vector<UnsafeRequest> load(const DatasetDescriptor& descriptor, const fs::path& path,
                                const AdapterConfig& adapter, bool allow_partial) {
    if (!fs::exists(path))
        throw ParseError("dataset path does not exist: " + path.string());

    std::vector<UnsafeRequest> raw;
    if (fs::is_directory(path)) {
        // Per-category files, concatenated in filename order.
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw EmptyDatasetError("no CSV files in " + path.string());
        for (const auto& file : files)
            append_csv_records(file, adapter, file.stem().string(), raw);
    } else {
        append_csv_records(path, adapter, "", raw);
    }

    if (raw.empty()) throw EmptyDatasetError("dataset " + path.string() + " has no records");

    std::vector<UnsafeRequest> records;
    records.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        UnsafeRequest record = std::move(raw[i]);
        record.id = make_id(descriptor.tag, i + 1);
        record.dataset_tag = descriptor.tag;
        records.push_back(std::move(record));
    }

    if (!allow_partial && descriptor.expected_count > 0 &&
        static_cast<int>(records.size()) != descriptor.expected_count) {
        throw CountMismatchError("dataset " + descriptor.name + " has " +
                                 std::to_string(records.size()) + " records, expected " +
                                 std::to_string(descriptor.expected_count));
    }
    return records;
}

std::vector<UnsafeRequest> load_custom(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path.string());
    std::vector<UnsafeRequest> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw ParseError("line " + std::to_string(line_no) + " is not a JSON object");
        if (!j.contains("text") || !j["text"].is_string())
            throw ParseError("line " + std::to_string(line_no) + " is missing \"text\"");
        UnsafeRequest record;
        record.dataset_tag = DatasetTag::DX;
        record.text = util::trim(j["text"].get<std::string>());
        if (record.text.empty())
            throw ParseError("line " + std::to_string(line_no) + " has empty request text");
        if (j.contains("id") && j["id"].is_string())
            record.id = j["id"].get<std::string>();
        else
            record.id = make_id(DatasetTag::DX, records.size() + 1);
        if (j.contains("category") && j["category"].is_string())
            record.category = j["category"].get<std::string>();
        if (j.contains("phrasing") && j["phrasing"].is_string())
            record.phrasing_override =
                phrasing_from_string(util::to_lower(j["phrasing"].get<std::string>()));
        records.push_back(std::move(record));
    }
    return records;
}

void write_custom(const std::vector<UnsafeRequest>& records, std::ostream& out) {
    for (const auto& record : records) {
        json j;
        j["id"] = record.id;
        j["text"] = record.text;
        if (record.category.has_value()) j["category"] = *record.category;
        if (record.phrasing_override.has_value())
            j["phrasing"] = to_string(*record.phrasing_override);
        out << j.dump() << '\n';
    }
}

std::uint64_t checksum(const std::vector<UnsafeRequest>& records) {
    std::string material;
    for (const auto& record : records) {
        material += record.id;
        material += '\t';
        material += record.text;
        material += '\n';
    }
    return util::fnv1a64(material);
}

}  // namespace jester::datasets
