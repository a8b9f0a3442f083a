// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/scorer/scorer.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

#include "patchsieve/core/text.hpp"
#include "patchsieve/scorer/prompt.hpp"
#include "patchsieve/scorer/rate_limiter.hpp"

namespace patchsieve::scorer {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::optional<int> parse_bare_int(const std::string& text, int max_score) {
    std::string t = core::trim(text);
    if (t.empty() || t.size() > 9) return std::nullopt;
    for (char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    int v = std::stoi(t);
    if (v < 0 || v > max_score) return std::nullopt;
    return v;
}

}  // namespace

int parse_score(const std::string& response, int max_score) {
    auto lines = core::split_lines(response);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        if (core::trim(*it).empty()) continue;
        if (auto v = parse_bare_int(*it, max_score)) return *v;
        break;
    }
    // Fallback: last standalone in-range integer anywhere in the response.
    int found = -1;
    const std::size_t n = response.size();
    std::size_t i = 0;
    while (i < n) {
        if (!std::isdigit(static_cast<unsigned char>(response[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && std::isdigit(static_cast<unsigned char>(response[j]))) ++j;
        bool ok = true;
        if (i > 0) {
            char prev = response[i - 1];
            if (is_word_char(prev)) ok = false;
            if (prev == '.' && i >= 2 && std::isdigit(static_cast<unsigned char>(response[i - 2])))
                ok = false;
        }
        if (j < n) {
            char next = response[j];
            if (is_word_char(next)) ok = false;
            if (next == '.' && j + 1 < n &&
                std::isdigit(static_cast<unsigned char>(response[j + 1])))
                ok = false;
        }
        if (ok && j - i <= 9) {
            int v = std::stoi(response.substr(i, j - i));
            if (v >= 0 && v <= max_score) found = v;
        }
        i = j;
    }
    return found;
}

ScoreBatchResult score_changes(Provider& provider,
                               const std::vector<extractor::FunctionChange>& changes,
                               const CommitMessageMap& messages, const ScoreOptions& opts) {
    ScoreBatchResult result;
    const std::string variant = variant_id(opts.variant);
    const int max_score = max_score_for(opts.variant.output_mode);

    // Resume: trust checkpoint entries written by the same provider and variant.
    std::unordered_map<std::string, ScoreRecord> done;
    if (!opts.checkpoint_path.empty() && std::filesystem::exists(opts.checkpoint_path)) {
        const std::string cp = opts.checkpoint_path.string();
        core::for_each_jsonl(cp, [&](const core::json& j, std::size_t line) {
            std::string where = cp + ":" + std::to_string(line);
            ScoreRecord r = score_from_json(j, where);
            if (r.provider_id != provider.id())
                throw std::runtime_error(where + ": checkpoint written by provider '" +
                                         r.provider_id + "', current provider is '" +
                                         provider.id() + "'");
            if (r.variant != variant)
                throw std::runtime_error(where + ": checkpoint written for variant '" +
                                         r.variant + "', current variant is '" + variant + "'");
            done[r.change_id] = std::move(r);
        });
    }

    // Sibling context comes from all changes of the same commit; precomputed
    // up front so workers never share mutable state.
    std::map<std::pair<std::string, std::string>, std::vector<extractor::FunctionChange>>
        by_commit;
    for (const auto& c : changes) by_commit[{c.repo_id, c.sha}].push_back(c);
    std::vector<std::string> contexts(changes.size());
    for (std::size_t i = 0; i < changes.size(); ++i)
        contexts[i] = extractor::assemble_context(
            changes[i], by_commit[{changes[i].repo_id, changes[i].sha}], opts.context_budget);

    std::vector<std::optional<ScoreRecord>> slots(changes.size());
    std::vector<std::optional<ScoreFailure>> failure_slots(changes.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < changes.size(); ++i) {
        auto it = done.find(changes[i].change_id);
        if (it != done.end()) {
            slots[i] = it->second;
            ++result.resumed_from_checkpoint;
        } else {
            todo.push_back(i);
        }
    }

    std::unique_ptr<core::JsonlWriter> checkpoint;
    std::mutex checkpoint_mu;
    if (!opts.checkpoint_path.empty())
        checkpoint =
            std::make_unique<core::JsonlWriter>(opts.checkpoint_path.string(), /*append=*/true);

    RateLimiter limiter(opts.rate_per_second, opts.rate_burst);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> calls{0};
    std::mutex error_mu;
    std::exception_ptr fatal;

    auto score_one = [&](std::size_t idx) {
        const auto& change = changes[idx];
        PromptInputs inputs;
        auto msg = messages.find({change.repo_id, change.sha});
        if (msg != messages.end()) inputs.commit_message = msg->second;
        inputs.original_code = change.before_source;
        inputs.revised_code = change.after_source;
        inputs.context = contexts[idx];

        bool context_dropped = false;
        int change_calls = 0;
        std::vector<int> run_scores;
        std::string last_response;
        const int runs = std::max(opts.runs, 1);
        const int max_attempts = std::max(opts.max_attempts, 1);
        for (int run = 0; run < runs; ++run) {
            std::string response;
            int score = -1;
            // Malformed responses and transient provider failures share the
            // attempt budget.
            for (int attempt = 0; attempt < max_attempts; ++attempt) {
                std::string prompt = build_prompt(opts.variant, inputs);
                response.clear();
                try {
                    limiter.acquire();
                    ++calls;
                    ++change_calls;
                    response = provider.complete(prompt);
                } catch (const ProviderError& e) {
                    if (e.kind() == ProviderError::Kind::PromptTooLong &&
                        opts.variant.include_context && !context_dropped &&
                        !inputs.context.empty()) {
                        context_dropped = true;
                        inputs.context.clear();
                        continue;
                    }
                    if (e.kind() == ProviderError::Kind::Transient &&
                        attempt + 1 < max_attempts) {
                        if (opts.backoff.count() > 0)
                            std::this_thread::sleep_for(opts.backoff * (1 << attempt));
                        continue;
                    }
                    if (e.kind() == ProviderError::Kind::Fatal) throw;
                    failure_slots[idx] = ScoreFailure{change.change_id, e.what()};
                    return;
                }
                score = parse_score(response, max_score);
                if (score >= 0) break;
            }
            if (score < 0) {
                failure_slots[idx] =
                    response.empty()
                        ? ScoreFailure{change.change_id, "no response after retries"}
                        : ScoreFailure{change.change_id,
                                       "unparseable response: " + response.substr(0, 120)};
                return;
            }
            run_scores.push_back(score);
            last_response = response;
        }

        // Majority vote; ties resolve to the smaller score.
        std::map<int, int> votes;
        for (int s : run_scores) ++votes[s];
        int best_score = run_scores.front();
        int best_votes = 0;
        for (const auto& [score, count] : votes) {
            if (count > best_votes) {
                best_score = score;
                best_votes = count;
            }
        }

        ScoreRecord record;
        record.change_id = change.change_id;
        record.score = best_score;
        record.provider_id = provider.id();
        record.variant = variant;
        record.attempts = std::max(change_calls, 1);
        record.raw_response = last_response;
        if (checkpoint) {
            std::lock_guard<std::mutex> lock(checkpoint_mu);
            checkpoint->write(score_to_json(record));
        }
        slots[idx] = std::move(record);
    };

    auto worker = [&]() {
        while (true) {
            {
                std::lock_guard<std::mutex> lock(error_mu);
                if (fatal) return;
            }
            std::size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            try {
                score_one(todo[k]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!fatal) fatal = std::current_exception();
                return;
            }
        }
    };

    std::size_t nthreads = std::max<std::size_t>(1, std::min(opts.parallelism, todo.size()));
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < nthreads; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
    result.provider_calls = calls.load();
    if (fatal) std::rethrow_exception(fatal);

    for (std::size_t i = 0; i < changes.size(); ++i) {
        if (slots[i]) result.records.push_back(*slots[i]);
        if (failure_slots[i]) result.failures.push_back(*failure_slots[i]);
    }
    return result;
}

}  // namespace patchsieve::scorer
