#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace jester::util {

std::string trim(std::string_view s);

// Collapses every run of whitespace to a single space (no trim).
std::string collapse_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

bool contains(std::string_view haystack, std::string_view needle);

// Non-overlapping occurrence count.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

std::string replace_all(std::string s, std::string_view from, std::string_view to);

// FNV-1a, 64 bit. Stable across platforms; used for cache and fixture keys.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// "2026-08-09T22:00:00.123Z"
std::string utc_iso8601_now();
// "20260809T220000Z"
std::string utc_compact_now();

std::string random_hex(std::size_t n_chars);

// Appends a newline when an append-only JSONL file was left with a truncated
// tail line (e.g. after a hard kill), so later appends start a fresh line.
void repair_jsonl_tail(const std::filesystem::path& path);

// Runs fn(0..count-1) on a small worker pool. fn must handle its own errors.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    pool.reserve(n);
    for (int w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace jester::util
