// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace patchsieve::miner {

struct RepoSource {
    std::string id;
    std::string location;              // clone URL or local path
    std::string default_branch;        // empty = repository HEAD
};

struct CommitRecord {
    std::string repo_id;
    std::string sha;                   // 40 lowercase hex chars
    std::string message;               // full commit message
    std::string parent_sha;            // empty for a root commit
    std::int64_t timestamp = 0;        // committer time, seconds since epoch UTC
    std::vector<std::string> changed_paths;
};

struct VfcMatch {
    CommitRecord commit;
    std::vector<std::string> matched_keywords;
    std::string keyword_set_id;
};

// One keyword configuration; loaded from a file (one keyword per line,
// '#' comments) or built from the embedded default set.
struct KeywordSet {
    std::string id;
    std::vector<std::string> keywords;  // stored lowercased, original order
};

struct SourceDiagnostics {
    std::string repo_id;
    bool succeeded = false;
    std::string error;                 // set when !succeeded
    std::size_t commits_seen = 0;      // first-parent commits scanned
    std::size_t merges_skipped = 0;
    std::size_t empty_skipped = 0;     // commits with no changed paths
    std::size_t corrupt_skipped = 0;
    std::size_t vfc_count = 0;
};

struct MineReport {
    std::vector<SourceDiagnostics> sources;

    std::size_t failed_sources() const {
        std::size_t n = 0;
        for (const auto& s : sources)
            if (!s.succeeded) ++n;
        return n;
    }
};

}  // namespace patchsieve::miner
