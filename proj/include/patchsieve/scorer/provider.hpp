// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <deque>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace patchsieve::scorer {

// Transient failures are retried with backoff; Fatal aborts the batch;
// PromptTooLong triggers one retry with the context block dropped.
class ProviderError : public std::runtime_error {
  public:
    enum class Kind { Transient, Fatal, PromptTooLong };
    ProviderError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

class Provider {
  public:
    virtual ~Provider() = default;
    virtual std::string id() const = 0;
    // Returns the raw model response for one prompt. Thread-safe.
    virtual std::string complete(const std::string& prompt) = 0;
};

// Deterministic offline provider. Response selection, in priority order:
//  1. queued responses pushed by tests (FIFO);
//  2. a "stub-score:N" directive anywhere in the prompt echoes N;
//  3. a "stub:malformed" directive yields a response with no usable number;
//  4. otherwise the prompt hashes to a stable score in [0, max_score].
// Injected failures throw before any of the above are consulted.
class StubProvider : public Provider {
  public:
    explicit StubProvider(int max_score = 4, std::string id = "stub");

    std::string id() const override { return id_; }
    std::string complete(const std::string& prompt) override;

    void push_response(const std::string& response);
    void fail_next(std::size_t count, ProviderError::Kind kind);

    std::size_t call_count() const;
    std::vector<std::string> prompts() const;

  private:
    int max_score_;
    std::string id_;
    mutable std::mutex mu_;
    std::deque<std::string> queued_;
    std::size_t failures_left_ = 0;
    ProviderError::Kind failure_kind_ = ProviderError::Kind::Transient;
    std::size_t calls_ = 0;
    std::vector<std::string> prompts_;
};

// Talks to an OpenAI-style chat completions endpoint. The API key is read
// from the environment variable "<ID>_API_KEY" with the provider id
// uppercased and dashes mapped to underscores; a missing key is an error
// only when the server rejects anonymous requests.
struct HttpProviderConfig {
    std::string id = "llm";
    std::string base_url;  // e.g. "https://api.example.com"
    std::string path = "/v1/chat/completions";
    std::string model;
    int timeout_seconds = 120;
};

class HttpProvider : public Provider {
  public:
    explicit HttpProvider(HttpProviderConfig config);

    std::string id() const override { return config_.id; }
    std::string complete(const std::string& prompt) override;

    static std::string api_key_env_var(const std::string& id);

  private:
    HttpProviderConfig config_;
    std::string api_key_;
};

}  // namespace patchsieve::scorer
