#include "ails/ahd/provider.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"

// httplib pulls in OpenSSL only when requested; plain HTTP is enough for
// local gateways, HTTPS endpoints require a TLS-terminating proxy.
#include "httplib.h"

namespace fs = std::filesystem;

namespace ails::ahd {

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ProviderExhausted("replay fixture missing: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class ReplayProvider : public LlmProvider {
public:
    explicit ReplayProvider(std::string dir) : dir_(std::move(dir)) {}

    std::string complete(const std::string&, const DecodingParams&,
                         const std::string& role) override {
        std::lock_guard lock(mu_);
        const long long index = cursors_[role];
        char name[32];
        std::snprintf(name, sizeof(name), "%03lld.txt", index);
        std::string text = read_file(fs::path(dir_) / role / name);
        cursors_[role] = index + 1;  // consume only after a successful read
        return text;
    }

    std::map<std::string, long long> cursors() const override {
        std::lock_guard lock(mu_);
        return cursors_;
    }
    void set_cursors(const std::map<std::string, long long>& c) override {
        std::lock_guard lock(mu_);
        cursors_ = c;
    }

private:
    std::string dir_;
    mutable std::mutex mu_;
    std::map<std::string, long long> cursors_;
};

class HttpProvider : public LlmProvider {
public:
    explicit HttpProvider(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key)
            throw ProviderError("API key environment variable " + cfg_.api_key_env + " is not set");
        api_key_ = key;
        if (!cfg_.transcript_dir.empty()) {
            fs::create_directories(fs::path(cfg_.transcript_dir) / "generate");
            fs::create_directories(fs::path(cfg_.transcript_dir) / "judge");
        }
    }

    bool supports_concurrency() const override { return true; }

    std::string complete(const std::string& prompt, const DecodingParams& params,
                         const std::string& role) override {
        nlohmann::json body{
            {"model", cfg_.model},
            {"messages", {{{"role", "user"}, {"content", prompt}}}},
            {"temperature", params.temperature},
            {"max_tokens", params.max_tokens},
        };
        const std::string payload = body.dump();

        std::string error;
        for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
            httplib::Client client(cfg_.base_url);
            client.set_read_timeout(cfg_.timeout_s, 0);
            client.set_connection_timeout(10, 0);
            httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
            auto res = client.Post(cfg_.path, headers, payload, "application/json");
            if (!res) {
                error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                error = "HTTP " + std::to_string(res->status) + ": " + res->body;
                continue;
            }
            try {
                auto parsed = nlohmann::json::parse(res->body);
                std::string text = parsed.at("choices").at(0).at("message").at("content");
                log_transcript(role, payload, text);
                return text;
            } catch (const std::exception& e) {
                error = std::string("malformed completion payload: ") + e.what();
            }
        }
        log_transcript(role, payload, "<error> " + error);
        throw ProviderError(error);
    }

private:
    void log_transcript(const std::string& role, const std::string& request,
                        const std::string& response) {
        if (cfg_.transcript_dir.empty()) return;
        std::lock_guard lock(mu_);
        const long long index = transcript_index_[role]++;
        char stem[32];
        std::snprintf(stem, sizeof(stem), "%03lld", index);
        const fs::path base = fs::path(cfg_.transcript_dir) / role;
        std::ofstream(base / (std::string(stem) + ".request.json")) << request;
        std::ofstream(base / (std::string(stem) + ".txt")) << response;
    }

    HttpProviderConfig cfg_;
    std::string api_key_;
    std::mutex mu_;
    std::map<std::string, long long> transcript_index_;
};

}  // namespace

std::unique_ptr<LlmProvider> make_replay_provider(const std::string& fixture_dir) {
    return std::make_unique<ReplayProvider>(fixture_dir);
}

std::unique_ptr<LlmProvider> make_http_provider(const HttpProviderConfig& cfg) {
    return std::make_unique<HttpProvider>(cfg);
}

}  // namespace ails::ahd
