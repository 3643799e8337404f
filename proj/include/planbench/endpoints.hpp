#pragma once

// Text-generation endpoints: an HTTP JSON endpoint and in-repo mocks.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planbench/prompts.hpp"

namespace planbench {

struct GenerationParams {
    double temperature = 0.0;
    int max_tokens = 2048;
    std::vector<std::string> stop{"done."};
};

struct Completion {
    std::string text;
    std::optional<double> logprob;  // total log-probability of `text`, when reported
};

// What the harness knows about a request; mocks use it, HTTP ignores it.
struct RequestContext {
    const EvalItem* item = nullptr;
    std::vector<const EvalItem*> shots;
    Representation rep = Representation::pddl;
};

class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual std::string id() const = 0;
    // Must be safe to call concurrently.
    virtual Completion complete(const std::string& prompt, const GenerationParams& params,
                                const RequestContext& context) = 0;
};

struct HttpEndpointConfig {
    std::string url;                    // http(s)://host[:port]/path
    std::string token_env = "PLANBENCH_API_TOKEN";
    int timeout_seconds = 120;
};

// POSTs {prompt, temperature, max_tokens, stop} and reads {text, logprob?}.
class HttpEndpoint : public Endpoint {
public:
    explicit HttpEndpoint(HttpEndpointConfig config);
    std::string id() const override { return config_.url; }
    Completion complete(const std::string& prompt, const GenerationParams& params,
                        const RequestContext& context) override;

private:
    HttpEndpointConfig config_;
    std::string scheme_host_port_;
    std::string path_;
};

// Answers every item with its reference answer (planner plans for PDDL items).
class PerfectEndpoint : public Endpoint {
public:
    std::string id() const override { return "mock:perfect"; }
    Completion complete(const std::string&, const GenerationParams&, const RequestContext& context) override;
};

class EmptyEndpoint : public Endpoint {
public:
    std::string id() const override { return "mock:empty"; }
    Completion complete(const std::string&, const GenerationParams&, const RequestContext&) override { return {}; }
};

// Returns the first shot's answer verbatim.
class EchoShotEndpoint : public Endpoint {
public:
    std::string id() const override { return "mock:echo-shot"; }
    Completion complete(const std::string&, const GenerationParams&, const RequestContext& context) override;
};

// Replays recorded outputs keyed by item id, or in call order for requests
// without an item.
class ScriptedEndpoint : public Endpoint {
public:
    ScriptedEndpoint(std::map<std::string, std::string> by_id, std::vector<std::string> sequence = {});
    std::string id() const override { return "mock:scripted-replay"; }
    Completion complete(const std::string&, const GenerationParams&, const RequestContext& context) override;

    // Loads a JSONL file of {"id", "output"} or {"id", "raw_output"} objects.
    static std::unique_ptr<ScriptedEndpoint> from_file(const std::string& path);

private:
    std::map<std::string, std::string> by_id_;
    std::vector<std::string> sequence_;
    std::size_t next_ = 0;
    std::mutex mutex_;
};

// "mock:perfect", "mock:empty", "mock:echo-shot", "mock:scripted-replay=<file>",
// or an http(s) URL.
std::unique_ptr<Endpoint> make_endpoint(const std::string& spec, const std::string& token_env = "PLANBENCH_API_TOKEN");

}  // namespace planbench
