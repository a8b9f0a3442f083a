// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "patchsieve/miner/types.hpp"

namespace patchsieve::miner {

struct EnumerationResult {
    std::vector<CommitRecord> commits;   // newest first, merges and empty diffs excluded
    std::size_t commits_seen = 0;
    std::size_t merges_skipped = 0;
    std::size_t empty_skipped = 0;
    std::size_t corrupt_skipped = 0;
};

class GitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Resolves a source to a local repository path. Remote locations (scheme:// or
// scp-like git@host:...) are cloned bare into cache_dir/<id>.git and reused on
// later runs; local paths are used in place.
std::string resolve_repository(const RepoSource& source, const std::string& cache_dir);

// First-parent history of `branch` (HEAD when empty), newest first, with
// changed paths computed against the first parent. limit = 0 means unbounded.
EnumerationResult enumerate_repository(const std::string& repo_path, const std::string& branch,
                                       std::size_t limit);

// Contents of `path` at `rev`; nullopt when the file does not exist there.
std::optional<std::string> read_blob(const std::string& repo_path, const std::string& rev,
                                     const std::string& path);

bool is_remote_location(const std::string& location);

}  // namespace patchsieve::miner
