// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/miner/keywords.hpp"

#include <stdexcept>

#include "patchsieve/core/hashing.hpp"
#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/core/text.hpp"

namespace patchsieve::miner {

KeywordSet default_keyword_set() {
    return KeywordSet{
        "default-v1",
        {"vulnerab", "security", "cve-", "xss", "sql injection", "injection", "exploit",
         "attack", "overflow", "csrf", "xxe", "denial of service", "rce"},
    };
}

KeywordSet load_keyword_set(const std::string& path) {
    std::string content = read_file(path);
    KeywordSet set;
    for (const auto& raw : split_lines(content)) {
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string comment = trim(line.substr(1));
            if (comment.rfind("id:", 0) == 0 && set.id.empty())
                set.id = trim(comment.substr(3));
            continue;
        }
        set.keywords.push_back(lower_ascii(line));
    }
    if (set.keywords.empty())
        throw std::runtime_error("keyword file has no keywords: " + path);
    if (set.id.empty()) set.id = "file-" + sha256_hex(content).substr(0, 12);
    return set;
}

}  // namespace patchsieve::miner
