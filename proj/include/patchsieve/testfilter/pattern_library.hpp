// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/extractor/language.hpp"

namespace patchsieve::testfilter {

struct LanguagePatterns {
    std::string key;  // "java", "cpp", "csharp", "javascript", "python"
    std::vector<std::string> patterns;
};

// Regex heuristics for recognizing test code: per-language patterns that fire
// on function bodies, plus name indicators that fire on file base names.
// Ordering is significant; the first match wins and is reported.
struct PatternLibrary {
    std::vector<LanguagePatterns> function_patterns;
    std::vector<std::string> test_indicators;

    const std::vector<std::string>* patterns_for(const std::string& key) const;
};

PatternLibrary default_pattern_library();

// C and C++ share the "cpp" key; unknown languages get an empty key and are
// never matched against function patterns.
std::string pattern_key_for(extractor::LanguageTag lang);

core::json library_to_json(const PatternLibrary& lib);
PatternLibrary library_from_json(const core::json& j, const std::string& where);
PatternLibrary load_pattern_library(const std::filesystem::path& path);

}  // namespace patchsieve::testfilter
