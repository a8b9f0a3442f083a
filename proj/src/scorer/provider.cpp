// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "patchsieve/scorer/provider.hpp"

#include <cctype>
#include <cstdlib>
#include <regex>

#include "httplib.h"
#include "patchsieve/core/hashing.hpp"
#include "patchsieve/core/jsonl.hpp"

namespace patchsieve::scorer {

StubProvider::StubProvider(int max_score, std::string id)
    : max_score_(max_score), id_(std::move(id)) {}

std::string StubProvider::complete(const std::string& prompt) {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    prompts_.push_back(prompt);
    if (failures_left_ > 0) {
        --failures_left_;
        throw ProviderError(failure_kind_, "injected failure");
    }
    if (!queued_.empty()) {
        std::string r = std::move(queued_.front());
        queued_.pop_front();
        return r;
    }
    static const std::regex directive(R"(stub-score:(\d))");
    std::smatch m;
    if (std::regex_search(prompt, m, directive)) return m[1].str();
    if (prompt.find("stub:malformed") != std::string::npos)
        return "I cannot determine a numeric answer.";
    std::string digest = core::sha256_hex(prompt);
    int value = std::stoi(digest.substr(0, 2), nullptr, 16);
    return std::to_string(value % (max_score_ + 1));
}

void StubProvider::push_response(const std::string& response) {
    std::lock_guard<std::mutex> lock(mu_);
    queued_.push_back(response);
}

void StubProvider::fail_next(std::size_t count, ProviderError::Kind kind) {
    std::lock_guard<std::mutex> lock(mu_);
    failures_left_ = count;
    failure_kind_ = kind;
}

std::size_t StubProvider::call_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
}

std::vector<std::string> StubProvider::prompts() const {
    std::lock_guard<std::mutex> lock(mu_);
    return prompts_;
}

std::string HttpProvider::api_key_env_var(const std::string& id) {
    std::string var;
    for (char c : id) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        else
            var.push_back('_');
    }
    return var + "_API_KEY";
}

HttpProvider::HttpProvider(HttpProviderConfig config) : config_(std::move(config)) {
    if (const char* key = std::getenv(api_key_env_var(config_.id).c_str())) api_key_ = key;
}

std::string HttpProvider::complete(const std::string& prompt) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    core::json body;
    body["model"] = config_.model;
    body["messages"] = core::json::array({core::json{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = 0;

    auto res = client.Post(config_.path, headers, body.dump(), "application/json");
    if (!res)
        throw ProviderError(ProviderError::Kind::Transient,
                            "no response from " + config_.base_url + ": " +
                                httplib::to_string(res.error()));
    if (res->status == 429 || res->status >= 500)
        throw ProviderError(ProviderError::Kind::Transient,
                            "status " + std::to_string(res->status) + " from " + config_.base_url);
    if (res->status == 401 || res->status == 403)
        throw ProviderError(ProviderError::Kind::Fatal,
                            "authentication rejected (status " + std::to_string(res->status) +
                                "); set " + api_key_env_var(config_.id));
    if (res->status == 400) {
        std::string lower;
        lower.reserve(res->body.size());
        for (char c : res->body)
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (lower.find("context_length") != std::string::npos ||
            lower.find("context length") != std::string::npos ||
            lower.find("too long") != std::string::npos ||
            lower.find("maximum context") != std::string::npos)
            throw ProviderError(ProviderError::Kind::PromptTooLong, "prompt exceeds model limit");
    }
    if (res->status != 200)
        throw ProviderError(ProviderError::Kind::Fatal,
                            "status " + std::to_string(res->status) + ": " +
                                res->body.substr(0, 200));

    core::json parsed;
    try {
        parsed = core::json::parse(res->body);
        return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw ProviderError(ProviderError::Kind::Fatal,
                            std::string("malformed completion response: ") + e.what());
    }
}

}  // namespace patchsieve::scorer
