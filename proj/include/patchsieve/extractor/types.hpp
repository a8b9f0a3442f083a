// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "patchsieve/extractor/language.hpp"

namespace patchsieve::extractor {

// 1-based inclusive line range in one version of a file.
struct LineSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

// One function whose body differs between a commit and its parent. Sides that
// do not exist (function added or removed) carry an empty source and no span.
struct FunctionChange {
    std::string change_id;
    std::string repo_id;
    std::string sha;
    std::string file_path;
    LanguageTag language = LanguageTag::Unknown;
    std::string function_name;
    std::string before_source;
    std::string after_source;
    std::optional<LineSpan> before_span;
    std::optional<LineSpan> after_span;
};

struct SkippedFile {
    std::string sha;
    std::string path;
    std::string reason;
};

struct ExtractReport {
    std::size_t commits_processed = 0;
    std::size_t files_seen = 0;
    std::size_t files_unknown_language = 0;
    std::size_t files_skipped_binary = 0;
    std::size_t files_skipped_unparseable = 0;
    std::size_t files_unreadable = 0;
    // Every hunk falls into exactly one of the next three buckets.
    std::size_t hunks_total = 0;
    std::size_t hunks_attributed = 0;
    std::size_t hunks_outside_function = 0;
    std::size_t hunks_noop_suppressed = 0;
    std::size_t whitespace_only_dropped = 0;
    std::size_t changes_emitted = 0;
    std::vector<SkippedFile> skipped_files;
};

}  // namespace patchsieve::extractor
