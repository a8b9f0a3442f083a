// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/extractor/extractor.hpp"
#include "patchsieve/scorer/types.hpp"

namespace patchsieve::curator {

// One vulnerable/benign training pair derived from a scored function change.
// The pair id is the originating change id, so it stays stable across runs.
struct CuratedPair {
    std::string pair_id;
    std::string repo_id;
    std::string sha;
    std::string file_path;
    std::string function_name;
    extractor::LanguageTag language = extractor::LanguageTag::Unknown;
    int score = 0;
    std::string vulnerable_source;
    std::string benign_source;
    // Commit timestamp used for duplicate resolution. Not serialized; pairs
    // with no known timestamp sort after all dated ones.
    std::int64_t timestamp = INT64_MAX;
};

struct ScoredChange {
    extractor::FunctionChange change;
    scorer::ScoreRecord score;
};

struct CurateDiagnostics {
    std::size_t scored_input = 0;
    std::size_t below_threshold = 0;
    std::size_t added_function_excluded = 0;
    std::size_t duplicates_collapsed = 0;
};

// (repo_id, sha) -> commit timestamp (unix seconds).
using TimestampMap = std::map<std::pair<std::string, std::string>, std::int64_t>;

// Keeps changes whose score is >= threshold. The threshold is inclusive and
// must lie in [1, max score for the scoring mode]; asking for a threshold
// above 1 on binary scores is a configuration error.
std::vector<ScoredChange> apply_threshold(const std::vector<ScoredChange>& scored,
                                          int threshold,
                                          scorer::PromptMode mode);

// Turns kept changes into pairs: before-source becomes the vulnerable side,
// after-source the benign side. Changes with an empty before side (functions
// added by the fix) cannot form a pair; they are excluded, counted, and
// returned through `added_functions` for a separate artifact.
std::vector<CuratedPair> build_pairs(const std::vector<ScoredChange>& kept,
                                     const TimestampMap& timestamps,
                                     std::vector<extractor::FunctionChange>* added_functions,
                                     CurateDiagnostics* diag);

// Collapses pairs whose (vulnerable, benign) sources are identical after
// normalization, keeping the pair with the earliest commit timestamp. Output
// order follows the first occurrence of each surviving key.
std::vector<CuratedPair> deduplicate(const std::vector<CuratedPair>& pairs,
                                     CurateDiagnostics* diag);

struct SplitRatios {
    double train = 7.0;
    double validation = 1.5;
    double test = 1.5;
};

struct SplitResult {
    std::vector<CuratedPair> train;
    std::vector<CuratedPair> validation;
    std::vector<CuratedPair> test;
};

// Splits pairs into train/validation/test by ratio. All pairs from the same
// commit land in the same partition: distinct (repo_id, sha) groups are
// shuffled with the seed and assigned to partitions until each cut is
// reached. Fewer than three groups cannot populate three partitions and is
// an error.
SplitResult split_pairs(const std::vector<CuratedPair>& pairs,
                        const SplitRatios& ratios,
                        std::uint64_t seed);

struct DatasetManifest {
    int threshold = 0;
    bool heuristics_enabled = true;
    std::size_t pair_count = 0;
    // Each pair contributes a vulnerable and a benign function.
    std::size_t function_count = 0;
    std::map<std::string, std::size_t> per_language_counts;
    std::string keyword_set_id;
    std::string provider_id;
    std::string variant;
    std::uint64_t split_seed = 0;
    std::string created_at;
};

core::json pair_to_json(const CuratedPair& pair, const std::string& partition);
CuratedPair pair_from_json(const core::json& j, const std::string& where);

core::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const core::json& j, const std::string& where);

// Writes train/validation/test JSONL files, the manifest, and the excluded
// added-function sidecar into `dir`. With `flat` set, each partition also
// gets a *_flat.jsonl with two labeled records per pair (vulnerable = 1,
// benign = 0) for classifier training.
void write_dataset(const SplitResult& split,
                   DatasetManifest manifest,
                   const std::filesystem::path& dir,
                   bool flat,
                   const std::vector<extractor::FunctionChange>& added_functions);

// Reads one partition file written by write_dataset.
std::vector<CuratedPair> read_pairs(const std::filesystem::path& path);

// Fills pair_count, function_count, and per_language_counts from the split.
void fill_manifest_counts(DatasetManifest& manifest, const SplitResult& split);

std::string current_utc_timestamp();

}  // namespace patchsieve::curator
