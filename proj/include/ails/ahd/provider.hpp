#ifndef AILS_AHD_PROVIDER_HPP
#define AILS_AHD_PROVIDER_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace ails::ahd {

struct DecodingParams {
    double temperature = 1.0;
    int max_tokens = 4096;
};

// Transient failure (timeout, 5xx, bad payload). Callers may retry.
class ProviderError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No further completions can be produced (replay fixtures consumed, budget
// spent). Callers checkpoint and stop.
class ProviderExhausted : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LlmProvider {
public:
    virtual ~LlmProvider() = default;

    // role is "generate" or "judge"; replay fixtures are consumed per role.
    virtual std::string complete(const std::string& prompt, const DecodingParams& params,
                                 const std::string& role) = 0;

    virtual bool supports_concurrency() const { return false; }

    // Replay bookkeeping so checkpoints can restore fixture positions.
    virtual std::map<std::string, long long> cursors() const { return {}; }
    virtual void set_cursors(const std::map<std::string, long long>&) {}
};

// Reads canned responses from <dir>/<role>/NNN.txt in call order.
// Deterministic; raises ProviderExhausted when a file is missing.
std::unique_ptr<LlmProvider> make_replay_provider(const std::string& fixture_dir);

struct HttpProviderConfig {
    std::string base_url;               // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env = "AILS_LLM_API_KEY";
    std::string transcript_dir;         // empty disables transcript logging
    int timeout_s = 120;
    int retries = 2;                    // internal transport retries per call
};

// Chat-completion client. Request/response bodies are logged to the
// transcript directory so live sessions can be replayed later.
std::unique_ptr<LlmProvider> make_http_provider(const HttpProviderConfig& cfg);

}  // namespace ails::ahd

#endif
