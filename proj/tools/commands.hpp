// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstdint>
#include <string>

#include "patchsieve/extractor/extractor.hpp"
#include "patchsieve/evaluator/evaluator.hpp"

namespace patchsieve::cli {

// Every stage writes its artifacts under `out_dir` and appends its resolved
// configuration to `out_dir`/run_config.json, so a directory always records
// how its contents were produced. All stages return 0 on success; on failure
// they print one JSON error line naming the stage to stderr and return 1.

struct MineArgs {
    std::string sources_path;
    std::string keywords_path;  // empty = embedded default set
    std::string cache_dir;      // required for remote sources
    std::string out_dir;
    std::size_t limit = 0;      // commits per repo, 0 = unbounded
    std::size_t parallelism = 1;
};
int cmd_mine(const MineArgs& args);

struct ExtractArgs {
    std::string manifest_path;  // vfc_manifest.jsonl from mine
    std::string repos_path;     // repo_paths.json from mine
    std::string out_dir;
};
int cmd_extract(const ExtractArgs& args);

struct FilterArgs {
    std::string changes_path;
    std::string patterns_path;  // empty = embedded default library
    std::string out_dir;
};
int cmd_filter(const FilterArgs& args);

struct ScoreArgs {
    std::string changes_path;
    std::string manifest_path;  // commit messages come from here
    std::string out_dir;
    std::string provider = "stub";  // "stub" or "http"
    std::string base_url;           // http provider only
    std::string model;              // http provider only
    std::string variant = "range04";
    std::size_t parallelism = 4;
    int max_attempts = 3;
    int backoff_ms = 1000;
    double rate_per_second = 0;  // 0 = unlimited
    int runs = 1;
    std::size_t context_budget = extractor::kDefaultContextBudget;
    bool include_anonymous = false;
};
int cmd_score(const ScoreArgs& args);

struct CurateArgs {
    std::string changes_path;
    std::string scores_path;
    std::string manifest_path;  // commit timestamps and keyword set id
    std::string out_dir;        // dataset lands in out_dir/dataset
    int threshold = 3;
    std::uint64_t split_seed = 1;
    double ratio_train = 7.0;
    double ratio_validation = 1.5;
    double ratio_test = 1.5;
    bool flat = false;
    bool heuristics_enabled = true;
};
int cmd_curate(const CurateArgs& args);

struct EvaluateArgs {
    std::string scores_path;  // optional; enables prediction metrics
    std::string labels_path;  // optional; enables correctness/kappa/taxonomy
    std::string out_dir;
    int cut = evaluator::kDefaultBinarizationCut;
    std::string sample_from;  // optional JSONL with change_id/pair_id fields
    std::size_t sample_n = 0;
    std::uint64_t sample_seed = 1;
};
int cmd_evaluate(const EvaluateArgs& args);

struct RunArgs {
    std::string sources_path;
    std::string keywords_path;
    std::string patterns_path;
    std::string cache_dir;
    std::string out_dir;
    std::size_t limit = 0;
    std::size_t mine_parallelism = 1;
    std::string provider = "stub";
    std::string base_url;
    std::string model;
    std::string variant = "range04";
    std::size_t score_parallelism = 4;
    int max_attempts = 3;
    int backoff_ms = 1000;
    double rate_per_second = 0;
    int runs = 1;
    std::size_t context_budget = extractor::kDefaultContextBudget;
    bool include_anonymous = false;
    int threshold = 3;
    std::uint64_t split_seed = 1;
    double ratio_train = 7.0;
    double ratio_validation = 1.5;
    double ratio_test = 1.5;
    bool flat = false;
    bool no_heuristics = false;
};
int cmd_run(const RunArgs& args);

}  // namespace patchsieve::cli
