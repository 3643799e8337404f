#include "planbench/endpoints.hpp"

#include <cstdlib>
#include <fstream>

#include "httplib.h"
#include "json.hpp"
#include "planbench/nl_bridge.hpp"

namespace planbench {

using nlohmann::json;

HttpEndpoint::HttpEndpoint(HttpEndpointConfig config) : config_(std::move(config)) {
    const std::string& url = config_.url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::invalid_argument("endpoint URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (url.rfind("https://", 0) == 0) throw std::invalid_argument("built without TLS support: " + url);
#endif
}

Completion HttpEndpoint::complete(const std::string& prompt, const GenerationParams& params, const RequestContext&) {
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (const char* token = std::getenv(config_.token_env.c_str()); token && *token)
        headers.emplace("Authorization", std::string("Bearer ") + token);
    const json body{{"prompt", prompt},
                    {"temperature", params.temperature},
                    {"max_tokens", params.max_tokens},
                    {"stop", params.stop}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw TransportError("request to " + config_.url + " failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("request to " + config_.url + " returned HTTP " + std::to_string(res->status));
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed endpoint reply: ") + e.what());
    }
    if (!reply.contains("text") || !reply["text"].is_string()) throw TransportError("endpoint reply lacks a text field");
    Completion c{reply["text"].get<std::string>(), std::nullopt};
    if (reply.contains("logprob") && reply["logprob"].is_number()) c.logprob = reply["logprob"].get<double>();
    return c;
}

Completion PerfectEndpoint::complete(const std::string&, const GenerationParams&, const RequestContext& context) {
    if (!context.item) return {};
    if (const auto* r = std::get_if<InstanceRecord>(context.item)) {
        // Re-plan rather than echo the stored reference; any valid plan will do.
        PlannerConfig config;
        config.mode = PlannerMode::satisficing;
        const PlanResult result = solve(builtin_domain(r->domain), r->problem, config);
        if (!result.plan) return {};
        InstanceRecord copy = *r;
        copy.plan = *result.plan;
        return {answer_text(EvalItem(std::move(copy)), context.rep), std::nullopt};
    }
    return {answer_text(*context.item, context.rep), std::nullopt};
}

Completion EchoShotEndpoint::complete(const std::string&, const GenerationParams&, const RequestContext& context) {
    if (context.shots.empty()) return {};
    return {answer_text(*context.shots.front(), context.rep), std::nullopt};
}

ScriptedEndpoint::ScriptedEndpoint(std::map<std::string, std::string> by_id, std::vector<std::string> sequence)
    : by_id_(std::move(by_id)), sequence_(std::move(sequence)) {}

Completion ScriptedEndpoint::complete(const std::string&, const GenerationParams&, const RequestContext& context) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (context.item) {
        auto it = by_id_.find(item_id(*context.item));
        if (it != by_id_.end()) return {it->second, std::nullopt};
    }
    if (next_ < sequence_.size()) return {sequence_[next_++], std::nullopt};
    return {};
}

std::unique_ptr<ScriptedEndpoint> ScriptedEndpoint::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::map<std::string, std::string> by_id;
    std::vector<std::string> sequence;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json j = json::parse(line);
        const std::string text = j.contains("output") ? j["output"].get<std::string>() : j.at("raw_output").get<std::string>();
        if (j.contains("id"))
            by_id[j["id"].get<std::string>()] = text;
        else
            sequence.push_back(text);
    }
    return std::make_unique<ScriptedEndpoint>(std::move(by_id), std::move(sequence));
}

std::unique_ptr<Endpoint> make_endpoint(const std::string& spec, const std::string& token_env) {
    if (spec == "mock:perfect") return std::make_unique<PerfectEndpoint>();
    if (spec == "mock:empty") return std::make_unique<EmptyEndpoint>();
    if (spec == "mock:echo-shot") return std::make_unique<EchoShotEndpoint>();
    const std::string scripted = "mock:scripted-replay=";
    if (spec.rfind(scripted, 0) == 0) return ScriptedEndpoint::from_file(spec.substr(scripted.size()));
    if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
        return std::make_unique<HttpEndpoint>(HttpEndpointConfig{spec, token_env});
    throw std::invalid_argument("unknown endpoint '" + spec + "'");
}

}  // namespace planbench
