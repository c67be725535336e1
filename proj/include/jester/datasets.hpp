#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "jester/core.hpp"

namespace jester::datasets {

struct DatasetDescriptor {
    DatasetTag tag = DatasetTag::DX;
    std::string name;
    int expected_count = 0;
};

// D1 -> JBB (100), D2 -> AdvBench (520), D3 -> HEx-PHI (300).
DatasetDescriptor descriptor_for(DatasetTag tag);

// Column mapping for a dataset's published CSV layout. Empty text_column with
// has_header=false selects the first column.
struct AdapterConfig {
    std::string text_column;
    std::string category_column;
    std::string phrasing_column;  // optional per-record phrasing override
    bool has_header = true;
};

AdapterConfig default_adapter(DatasetTag tag);

// Loads a dataset in file order. For D3 the path may be a directory of
// per-category CSVs (concatenated in filename order, category = file stem).
// Record ids are "{tag}-{ordinal}"; text is whitespace-trimmed only.
std::vector<UnsafeRequest> load(const DatasetDescriptor& descriptor,
                                const std::filesystem::path& path,
                                const AdapterConfig& adapter,
                                bool allow_partial = false);

// JSONL records of {id?, text, category?, phrasing?}; tag DX, missing ids
// auto-assigned.
std::vector<UnsafeRequest> load_custom(const std::filesystem::path& path);

// Serializes records in the custom JSONL form (round-trips with load_custom).
void write_custom(const std::vector<UnsafeRequest>& records, std::ostream& out);

std::uint64_t checksum(const std::vector<UnsafeRequest>& records);

// Minimal RFC-4180 reader (quoted fields, embedded separators/newlines).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

}  // namespace jester::datasets
