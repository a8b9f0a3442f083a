// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/miner/types.hpp"

namespace patchsieve::miner {

struct MineOptions {
    std::string cache_dir;        // required for remote sources
    std::size_t limit = 0;        // per-repo commit cap, 0 = unbounded
    std::size_t parallelism = 1;  // concurrent sources
};

// Case-insensitive substring match of every keyword against the message.
// Returns the matched keywords (keyword-set order) or nullopt.
std::optional<std::vector<std::string>> is_vfc(const std::string& message, const KeywordSet& keywords);

// Enumerates every source, filters by is_vfc and merges deterministically:
// repo_id ascending, then timestamp descending, then sha. Throws only when
// every source fails; per-source failures land in the report.
std::vector<VfcMatch> mine(const std::vector<RepoSource>& sources, const KeywordSet& keywords,
                           const MineOptions& options, MineReport& report);

json vfc_to_json(const VfcMatch& match);
VfcMatch vfc_from_json(const json& j, const std::string& path, size_t line);

std::vector<RepoSource> load_sources(const std::string& path);

}  // namespace patchsieve::miner
