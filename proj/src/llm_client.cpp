#include "jester/llm_client.hpp"

#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "jester/util.hpp"

namespace jester {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

Role role_from_string(std::string_view s) {
    if (s == "system") return Role::System;
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    throw ParseError("unknown role: " + std::string(s));
}

void Conversation::push_system(std::string content) {
    messages.push_back({Role::System, std::move(content)});
}

void Conversation::push_user(std::string content) {
    messages.push_back({Role::User, std::move(content)});
}

void Conversation::push_assistant(std::string content) {
    messages.push_back({Role::Assistant, std::move(content)});
}

void Conversation::validate() const {
    std::size_t i = 0;
    if (!messages.empty() && messages[0].role == Role::System) i = 1;
    Role expected = Role::User;
    for (; i < messages.size(); ++i) {
        if (messages[i].role == Role::System)
            throw InvalidConversationError("system message only allowed at position 0");
        if (messages[i].role != expected)
            throw InvalidConversationError(
                "roles must alternate user/assistant (message " + std::to_string(i) + ")");
        expected = expected == Role::User ? Role::Assistant : Role::User;
    }
}

const std::string& Conversation::last_assistant() const {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == Role::Assistant) return it->content;
    }
    throw Error("conversation has no assistant message");
}

// ---------------------------------------------------------------------------
// Transports
// ---------------------------------------------------------------------------

namespace {

// Splits "scheme://host[:port]/prefix" into the client origin and the path
// prefix ("" when absent).
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("base_url must include a scheme: " + base_url);
    auto path_start = base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

}  // namespace

HttpResponse HttpTransport::post(const ModelEndpoint& endpoint, const std::string& body) {
    auto [origin, prefix] = split_base_url(endpoint.base_url);

    httplib::Client client(origin);
    client.set_connection_timeout(endpoint.timeout);
    client.set_read_timeout(endpoint.timeout);
    client.set_write_timeout(endpoint.timeout);

    httplib::Headers headers;
    if (!endpoint.api_key_env.empty()) {
        if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }

    auto result = client.Post(prefix + "/chat/completions", headers, body,
                              "application/json");
    if (!result) {
        throw TransportError("POST " + endpoint.base_url + "/chat/completions failed: " +
                             httplib::to_string(result.error()));
    }
    return {result->status, result->body};
}

MockTransport::MockTransport(Handler handler) : handler_(std::move(handler)) {}

HttpResponse MockTransport::post(const ModelEndpoint& endpoint, const std::string& body) {
    {
        std::lock_guard lock(mutex_);
        requests_.push_back(body);
    }
    return handler_(endpoint, body);
}

std::vector<std::string> MockTransport::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::size_t MockTransport::request_count() const {
    std::lock_guard lock(mutex_);
    return requests_.size();
}

ReplayTransport::ReplayTransport(const std::filesystem::path& fixture_path,
                                 std::chrono::milliseconds latency)
    : latency_(latency) {
    std::ifstream in(fixture_path);
    if (!in) throw ConfigError("cannot open fixture file: " + fixture_path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (util::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("request_hash") || !j.contains("response_body"))
            throw ConfigError("malformed fixture line in " + fixture_path.string());
        responses_[j["request_hash"].get<std::string>()] =
            j["response_body"].get<std::string>();
    }
}

HttpResponse ReplayTransport::post(const ModelEndpoint&, const std::string& body) {
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);
    auto it = responses_.find(LlmClient::request_hash(body));
    if (it == responses_.end())
        throw ReplayMissError("no fixture for request hash " +
                              LlmClient::request_hash(body));
    return {200, it->second};
}

RecordingTransport::RecordingTransport(std::shared_ptr<Transport> inner,
                                       std::filesystem::path out_path)
    : inner_(std::move(inner)), out_path_(std::move(out_path)) {}

HttpResponse RecordingTransport::post(const ModelEndpoint& endpoint,
                                      const std::string& body) {
    HttpResponse response = inner_->post(endpoint, body);
    if (response.status == 200) {
        const std::string hash = LlmClient::request_hash(body);
        std::lock_guard lock(mutex_);
        if (!seen_.contains(hash)) {
            seen_[hash] = true;
            std::ofstream out(out_path_, std::ios::app);
            if (!out) throw OutputIOError("cannot append fixture: " + out_path_.string());
            json line = {{"request_hash", hash}, {"response_body", response.body}};
            out << line.dump() << '\n';
        }
    }
    return response;
}

std::string make_completion_body(const std::string& content,
                                 const std::string& finish_reason) {
    json body = {
        {"choices",
         {{{"index", 0},
           {"message", {{"role", "assistant"}, {"content", content}}},
           {"finish_reason", finish_reason}}}},
    };
    return body.dump();
}

std::shared_ptr<Transport> make_echo_transport(std::chrono::milliseconds latency) {
    return std::make_shared<MockTransport>(
        [latency](const ModelEndpoint&, const std::string& body) -> HttpResponse {
            if (latency.count() > 0) std::this_thread::sleep_for(latency);
            json request = json::parse(body);
            const auto& messages = request.at("messages");
            std::string last_user;
            for (const auto& m : messages) {
                if (m.at("role").get<std::string>() == "user")
                    last_user = m.at("content").get<std::string>();
            }
            return {200, make_completion_body(last_user)};
        });
}

// ---------------------------------------------------------------------------
// LlmClient
// ---------------------------------------------------------------------------

LlmClient::LlmClient(std::shared_ptr<Transport> transport)
    : transport_(std::move(transport)) {}

std::string LlmClient::canonical_request_body(const ModelEndpoint& endpoint,
                                              const Conversation& conversation) {
    ordered_json body;
    body["model"] = endpoint.name;
    ordered_json messages = ordered_json::array();
    for (const auto& m : conversation.messages) {
        ordered_json msg;
        msg["role"] = to_string(m.role);
        msg["content"] = m.content;
        messages.push_back(std::move(msg));
    }
    body["messages"] = std::move(messages);
    body["temperature"] = endpoint.temperature;
    body["max_tokens"] = endpoint.max_tokens;
    return body.dump();
}

std::string LlmClient::request_hash(const std::string& body) {
    return util::hex64(util::fnv1a64(body));
}

namespace {

std::chrono::milliseconds backoff_delay(const ModelEndpoint& endpoint, int retry_index) {
    double delay = static_cast<double>(endpoint.backoff_base.count());
    for (int i = 0; i < retry_index; ++i) delay *= 2.0;
    thread_local std::mt19937_64 rng(std::random_device{}());
    std::uniform_real_distribution<double> jitter(0.8, 1.2);
    return std::chrono::milliseconds(static_cast<long long>(delay * jitter(rng)));
}

CompletionResult parse_completion(const std::string& body, const ModelEndpoint& endpoint) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw ProtocolError("response body is not JSON");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        throw ProtocolError("response has no choices");
    const auto& choice = j["choices"][0];
    if (!choice.contains("message"))
        throw ProtocolError("response choice has no message");
    CompletionResult result;
    const auto& message = choice["message"];
    if (message.contains("content") && !message["content"].is_null())
        result.content = message["content"].get<std::string>();
    if (choice.contains("finish_reason") && !choice["finish_reason"].is_null())
        result.finish_reason = choice["finish_reason"].get<std::string>();
    result.endpoint_name = endpoint.name;
    return result;
}

}  // namespace

CompletionResult LlmClient::complete(const ModelEndpoint& endpoint,
                                     const Conversation& conversation) const {
    if (conversation.messages.empty())
        throw InvalidConversationError("conversation is empty");
    conversation.validate();
    if (conversation.messages.back().role != Role::User)
        throw InvalidConversationError("last message must be a user message");

    const std::string body = canonical_request_body(endpoint, conversation);
    const auto started = std::chrono::steady_clock::now();

    int attempt = 0;
    while (true) {
        ++attempt;
        std::string transient_reason;
        std::optional<HttpResponse> response;
        try {
            response = transport_->post(endpoint, body);
        } catch (const TransportError& e) {
            transient_reason = e.what();  // connection failure or timeout
        }
        if (response.has_value()) {
            if (response->status == 200) {
                CompletionResult result = parse_completion(response->body, endpoint);
                result.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started);
                return result;
            }
            if (response->status == 401 || response->status == 403)
                throw AuthError("endpoint " + endpoint.name + " rejected credentials (" +
                                std::to_string(response->status) + ")");
            if (response->status >= 500)
                transient_reason = "http " + std::to_string(response->status);
            else
                throw TransportError("endpoint " + endpoint.name + " returned http " +
                                     std::to_string(response->status));
        }
        if (attempt > endpoint.max_retries)
            throw TransportError("endpoint " + endpoint.name + " failed after " +
                                 std::to_string(attempt) + " attempts: " + transient_reason);
        std::this_thread::sleep_for(backoff_delay(endpoint, attempt - 1));
    }
}

Conversation LlmClient::run_multi_turn(const ModelEndpoint& endpoint,
                                       const std::vector<std::string>& turns,
                                       const std::optional<std::string>& system_prompt) const {
    if (turns.empty()) throw InvalidConversationError("no turns to send");
    Conversation conversation;
    if (system_prompt.has_value()) conversation.push_system(*system_prompt);
    for (std::size_t i = 0; i < turns.size(); ++i) {
        conversation.push_user(turns[i]);
        try {
            CompletionResult result = complete(endpoint, conversation);
            conversation.push_assistant(result.content);
        } catch (const Error& e) {
            throw MultiTurnError(static_cast<int>(i) + 1, e.what());
        }
    }
    return conversation;
}

}  // namespace jester
