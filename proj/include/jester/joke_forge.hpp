#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "jester/core.hpp"
#include "jester/llm_client.hpp"

namespace jester::joke_forge {

struct GeneratedJoke {
    std::string request_id;
    JokeKind kind = JokeKind::ManNoHumor;
    std::string text;
    std::string generator_model;
    std::string raw_generation;
};

// Constant pun jokes for the chicken / Mark / goat subjects.
std::string fixed_joke(JokeKind kind);

// Generator instruction asking for a situation where a man innocently and
// inadvertently comes across the task; `humorous` appends the humor demand.
std::string situation_instruction(const std::string& request_text, bool humorous);

// Generator instruction that removes unsafe-connotation modifiers from a joke.
std::string strip_instruction(const std::string& joke_text);

GeneratedJoke generate_man_situation(const UnsafeRequest& request, bool humorous,
                                     LlmClient& client, const ModelEndpoint& generator);

GeneratedJoke strip_unsafe_modifiers(const GeneratedJoke& joke, LlmClient& client,
                                     const ModelEndpoint& generator);

// Persistent joke cache. One generation per (request, kind, generator model);
// concurrent inserts of the same key are first-writer-wins. Backed by a JSONL
// sidecar when constructed with a path.
class JokeStore {
public:
    JokeStore() = default;
    explicit JokeStore(std::filesystem::path file_path);

    // Resolves the joke text for a kind, generating (and caching) base jokes
    // and stripped variants as needed. Fixed kinds never touch the cache.
    std::string get_or_create(const UnsafeRequest& request, JokeKind kind,
                              LlmClient& client, const ModelEndpoint& generator);

    // Cache-only lookup; nullopt when the joke has not been generated yet.
    std::optional<std::string> lookup(const UnsafeRequest& request, JokeKind kind,
                                      const std::string& generator_model) const;

    static std::string cache_key(const std::string& request_text, JokeKind kind,
                                 const std::string& instruction, const std::string& model);

    std::size_t size() const;

private:
    std::optional<std::string> find(const std::string& key) const;
    // Returns the winning text (the existing one on a lost race).
    std::string insert_if_absent(const std::string& key, const GeneratedJoke& joke);
    std::optional<std::string> resolve_cached(const UnsafeRequest& request, JokeKind kind,
                                              const std::string& model) const;

    mutable std::mutex mutex_;
    std::unordered_map<std::string, std::string> cache_;
    std::filesystem::path file_path_;
    bool persistent_ = false;
};

}  // namespace jester::joke_forge
