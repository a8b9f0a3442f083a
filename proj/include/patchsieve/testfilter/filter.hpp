// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <optional>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/extractor/types.hpp"
#include "patchsieve/testfilter/pattern_library.hpp"

namespace patchsieve::testfilter {

enum class FilterReason { Kept, TestFile, TestFunction };

const char* reason_name(FilterReason reason);
FilterReason reason_from_name(const std::string& name);

struct FilterDecision {
    std::string change_id;
    FilterReason reason = FilterReason::Kept;
    std::string matched_pattern;  // the regex that fired; empty when kept
};

// Drops test code from a change stream. A change is discarded when its file
// base name matches a test indicator, or when either source side matches a
// test function pattern for its language. Patterns run in library order and
// the first hit decides.
class TestFilter {
  public:
    explicit TestFilter(const PatternLibrary& lib);

    std::optional<std::string> match_test_file(const std::string& file_path) const;
    std::optional<std::string> match_test_function(const std::string& source,
                                                   extractor::LanguageTag lang) const;
    FilterDecision decide(const extractor::FunctionChange& change) const;

    // Partition: every input lands either in `kept` or is explained by a
    // non-Kept decision; decisions cover all inputs in order.
    std::pair<std::vector<extractor::FunctionChange>, std::vector<FilterDecision>> apply(
        const std::vector<extractor::FunctionChange>& changes) const;

    static std::string file_base_name(const std::string& file_path);

  private:
    struct CompiledSet {
        std::string key;
        std::vector<std::pair<std::string, std::regex>> patterns;
    };
    std::vector<CompiledSet> function_patterns_;
    std::vector<std::pair<std::string, std::regex>> indicators_;
};

core::json decision_to_json(const FilterDecision& d);
FilterDecision decision_from_json(const core::json& j, const std::string& where);

}  // namespace patchsieve::testfilter
