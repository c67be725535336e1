#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "jester/errors.hpp"

namespace jester {

enum class Role { System, User, Assistant };

std::string to_string(Role role);
Role role_from_string(std::string_view s);

struct Message {
    Role role = Role::User;
    std::string content;
};

struct Conversation {
    std::vector<Message> messages;

    void push_system(std::string content);
    void push_user(std::string content);
    void push_assistant(std::string content);

    // Roles must alternate user/assistant after an optional leading system
    // message; throws InvalidConversationError.
    void validate() const;

    const std::string& last_assistant() const;
};

struct ModelEndpoint {
    std::string name;
    std::string base_url;     // e.g. "https://host:8000/v1"
    std::string api_key_env;  // env var holding the bearer key; empty = none
    double temperature = 0.0; // generation is greedy unless overridden
    int max_tokens = 1024;
    std::chrono::milliseconds timeout{60000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{1000};
};

struct CompletionResult {
    std::string content;
    std::string finish_reason;
    std::chrono::milliseconds latency{0};
    std::string endpoint_name;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// One POST of a chat-completion body; implementations throw TransportError
// for connection-level failures.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse post(const ModelEndpoint& endpoint, const std::string& body) = 0;
};

// Real HTTP transport. A fresh connection is opened per call, so a single
// instance is safe to share across worker threads.
class HttpTransport : public Transport {
public:
    HttpResponse post(const ModelEndpoint& endpoint, const std::string& body) override;
};

// Hand-scripted transport for tests. The handler may throw to simulate
// connection failures; every request body is recorded.
class MockTransport : public Transport {
public:
    using Handler = std::function<HttpResponse(const ModelEndpoint&, const std::string&)>;
    explicit MockTransport(Handler handler);
    HttpResponse post(const ModelEndpoint& endpoint, const std::string& body) override;

    std::vector<std::string> requests() const;
    std::size_t request_count() const;

private:
    Handler handler_;
    mutable std::mutex mutex_;
    std::vector<std::string> requests_;
};

// Replays canned responses from a fixture file (JSONL lines of
// {request_hash, response_body}). Misses raise ReplayMissError.
class ReplayTransport : public Transport {
public:
    explicit ReplayTransport(const std::filesystem::path& fixture_path,
                             std::chrono::milliseconds latency = std::chrono::milliseconds(0));
    HttpResponse post(const ModelEndpoint& endpoint, const std::string& body) override;

private:
    std::unordered_map<std::string, std::string> responses_;
    std::chrono::milliseconds latency_;
};

// Wraps another transport and appends {request_hash, response_body} fixture
// lines (deduplicated by hash) for later replay.
class RecordingTransport : public Transport {
public:
    RecordingTransport(std::shared_ptr<Transport> inner, std::filesystem::path out_path);
    HttpResponse post(const ModelEndpoint& endpoint, const std::string& body) override;

private:
    std::shared_ptr<Transport> inner_;
    std::filesystem::path out_path_;
    std::mutex mutex_;
    std::unordered_map<std::string, bool> seen_;
};

// Answers every request with the last user message's content. Used by tests
// and dry pipelines.
std::shared_ptr<Transport> make_echo_transport(
    std::chrono::milliseconds latency = std::chrono::milliseconds(0));

// Builds a chat-completions response body with the given content.
std::string make_completion_body(const std::string& content,
                                 const std::string& finish_reason = "stop");

class LlmClient {
public:
    explicit LlmClient(std::shared_ptr<Transport> transport);

    // Canonical request body: fixed field order, so identical inputs yield
    // identical bytes (record/replay relies on this).
    static std::string canonical_request_body(const ModelEndpoint& endpoint,
                                              const Conversation& conversation);
    static std::string request_hash(const std::string& body);

    // One chat completion. Transient failures (connect errors, timeouts,
    // 5xx) are retried with exponential backoff up to max_retries; 401/403
    // raise AuthError immediately; unparseable bodies raise ProtocolError.
    CompletionResult complete(const ModelEndpoint& endpoint,
                              const Conversation& conversation) const;

    // Sends each turn in order, feeding assistant replies back as context.
    // Failures carry the 1-based index of the failing turn.
    Conversation run_multi_turn(const ModelEndpoint& endpoint,
                                const std::vector<std::string>& turns,
                                const std::optional<std::string>& system_prompt =
                                    std::nullopt) const;

    Transport& transport() { return *transport_; }

private:
    std::shared_ptr<Transport> transport_;
};

}  // namespace jester
