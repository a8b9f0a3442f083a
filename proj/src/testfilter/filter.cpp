// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/testfilter/filter.hpp"

#include <stdexcept>

namespace patchsieve::testfilter {

const char* reason_name(FilterReason reason) {
    switch (reason) {
        case FilterReason::Kept: return "Kept";
        case FilterReason::TestFile: return "TestFile";
        case FilterReason::TestFunction: return "TestFunction";
    }
    return "Kept";
}

FilterReason reason_from_name(const std::string& name) {
    if (name == "Kept") return FilterReason::Kept;
    if (name == "TestFile") return FilterReason::TestFile;
    if (name == "TestFunction") return FilterReason::TestFunction;
    throw std::invalid_argument("unknown filter reason: " + name);
}

TestFilter::TestFilter(const PatternLibrary& lib) {
    constexpr auto flags = std::regex::ECMAScript | std::regex::multiline;
    for (const auto& lp : lib.function_patterns) {
        CompiledSet set;
        set.key = lp.key;
        for (const auto& p : lp.patterns) set.patterns.emplace_back(p, std::regex(p, flags));
        function_patterns_.push_back(std::move(set));
    }
    for (const auto& p : lib.test_indicators) indicators_.emplace_back(p, std::regex(p, flags));
}

std::string TestFilter::file_base_name(const std::string& file_path) {
    std::size_t slash = file_path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? file_path : file_path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

std::optional<std::string> TestFilter::match_test_file(const std::string& file_path) const {
    std::string base = file_base_name(file_path);
    for (const auto& [text, re] : indicators_)
        if (std::regex_search(base, re)) return text;
    return std::nullopt;
}

std::optional<std::string> TestFilter::match_test_function(const std::string& source,
                                                           extractor::LanguageTag lang) const {
    std::string key = pattern_key_for(lang);
    if (key.empty()) return std::nullopt;
    for (const auto& set : function_patterns_) {
        if (set.key != key) continue;
        for (const auto& [text, re] : set.patterns)
            if (std::regex_search(source, re)) return text;
    }
    return std::nullopt;
}

FilterDecision TestFilter::decide(const extractor::FunctionChange& change) const {
    FilterDecision d;
    d.change_id = change.change_id;
    if (auto hit = match_test_file(change.file_path)) {
        d.reason = FilterReason::TestFile;
        d.matched_pattern = *hit;
        return d;
    }
    if (auto hit = match_test_function(change.before_source, change.language)) {
        d.reason = FilterReason::TestFunction;
        d.matched_pattern = *hit;
        return d;
    }
    if (auto hit = match_test_function(change.after_source, change.language)) {
        d.reason = FilterReason::TestFunction;
        d.matched_pattern = *hit;
        return d;
    }
    d.reason = FilterReason::Kept;
    return d;
}

std::pair<std::vector<extractor::FunctionChange>, std::vector<FilterDecision>> TestFilter::apply(
    const std::vector<extractor::FunctionChange>& changes) const {
    std::vector<extractor::FunctionChange> kept;
    std::vector<FilterDecision> decisions;
    decisions.reserve(changes.size());
    for (const auto& change : changes) {
        FilterDecision d = decide(change);
        if (d.reason == FilterReason::Kept) kept.push_back(change);
        decisions.push_back(std::move(d));
    }
    return {std::move(kept), std::move(decisions)};
}

core::json decision_to_json(const FilterDecision& d) {
    core::json j;
    j["change_id"] = d.change_id;
    j["reason"] = reason_name(d.reason);
    j["matched_pattern"] = d.matched_pattern;
    return j;
}

FilterDecision decision_from_json(const core::json& j, const std::string& where) {
    FilterDecision d;
    d.change_id = core::require_string(j, "change_id", where);
    d.reason = reason_from_name(core::require_string(j, "reason", where));
    d.matched_pattern = core::require_string(j, "matched_pattern", where);
    return d;
}

}  // namespace patchsieve::testfilter
