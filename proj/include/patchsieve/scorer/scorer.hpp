// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "patchsieve/extractor/extractor.hpp"
#include "patchsieve/scorer/provider.hpp"
#include "patchsieve/scorer/types.hpp"

namespace patchsieve::scorer {

struct ScoreOptions {
    PromptVariant variant;
    std::size_t parallelism = 4;
    int max_attempts = 3;
    std::chrono::milliseconds backoff{1000};  // doubles per retry; 0 in tests
    double rate_per_second = 0;               // 0 disables rate limiting
    double rate_burst = 1;
    std::size_t context_budget = extractor::kDefaultContextBudget;
    int runs = 1;  // majority vote across N runs per change when > 1
    std::filesystem::path checkpoint_path;  // empty disables checkpointing
};

struct ScoreFailure {
    std::string change_id;
    std::string error;
};

struct ScoreBatchResult {
    std::vector<ScoreRecord> records;  // input order; failed changes omitted
    std::vector<ScoreFailure> failures;
    std::size_t provider_calls = 0;
    std::size_t resumed_from_checkpoint = 0;
};

// Commit messages keyed by (repo_id, sha); changes without an entry are
// prompted with an empty message.
using CommitMessageMap = std::map<std::pair<std::string, std::string>, std::string>;

// Extracts the numeric answer from a model response: the last non-empty line
// when it is a bare in-range integer, otherwise the last standalone in-range
// integer anywhere in the text (digit runs embedded in words or decimals do
// not count). Returns -1 when nothing qualifies.
int parse_score(const std::string& response, int max_score);

// Scores every change, assembling sibling context per commit from the given
// set. Already-checkpointed changes are not re-sent; new results append to
// the checkpoint as they complete. A checkpoint written with a different
// provider or prompt mode is rejected.
ScoreBatchResult score_changes(Provider& provider,
                               const std::vector<extractor::FunctionChange>& changes,
                               const CommitMessageMap& messages, const ScoreOptions& opts);

}  // namespace patchsieve::scorer
