// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>

#include "patchsieve/miner/types.hpp"

namespace patchsieve::miner {

// The shipped default set. The id is "default-v1"; swapping the set means
// swapping the file, so every manifest records which set produced it.
KeywordSet default_keyword_set();

// File format: UTF-8, one keyword per line, '#' starts a comment. A comment
// of the form "# id: NAME" names the set; otherwise the id is derived from
// the file's content hash.
KeywordSet load_keyword_set(const std::string& path);

}  // namespace patchsieve::miner
