// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>
#include <vector>

namespace patchsieve::extractor {

// One maximal run of non-matching lines. Line numbers are 1-based;
// a pure insertion has before_count == 0 with before_start naming the line
// AFTER which the insertion happens (0 = insertion at file start), and
// symmetrically for pure deletions.
struct DiffHunk {
    std::size_t before_start = 0;
    std::size_t before_count = 0;
    std::size_t after_start = 0;
    std::size_t after_count = 0;
};

// Myers line diff. Falls back to one whole-region hunk when the edit
// distance exceeds an internal cap, which keeps memory bounded on
// pathological inputs.
std::vector<DiffHunk> diff_lines(const std::vector<std::string>& before,
                                 const std::vector<std::string>& after);

}  // namespace patchsieve::extractor
