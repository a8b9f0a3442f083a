// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/extractor/types.hpp"
#include "patchsieve/miner/types.hpp"

namespace patchsieve::extractor {

// Walks every changed file of the commit, diffs it against the parent, and
// returns one FunctionChange per function whose content differs. Counters and
// per-file skips accumulate into `report`.
std::vector<FunctionChange> extract_commit(const std::filesystem::path& repo_path,
                                           const miner::VfcMatch& vfc, ExtractReport& report);

core::json change_to_json(const FunctionChange& change);
FunctionChange change_from_json(const core::json& j, const std::string& where);
core::json report_to_json(const ExtractReport& report);

// Sibling context for downstream prompts: every other change of the same
// commit, ordered by (file_path, function_name), included whole while the
// budget lasts. Sides that were deleted fall back to the before source.
std::string assemble_context(const FunctionChange& target,
                             const std::vector<FunctionChange>& commit_changes,
                             std::size_t char_budget, bool* truncated = nullptr);

inline constexpr std::size_t kDefaultContextBudget = 8000;

}  // namespace patchsieve::extractor
