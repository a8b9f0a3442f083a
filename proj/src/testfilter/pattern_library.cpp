// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/testfilter/pattern_library.hpp"

namespace patchsieve::testfilter {

const std::vector<std::string>* PatternLibrary::patterns_for(const std::string& key) const {
    for (const auto& lp : function_patterns)
        if (lp.key == key) return &lp.patterns;
    return nullptr;
}

PatternLibrary default_pattern_library() {
    PatternLibrary lib;
    lib.function_patterns = {
        {"java",
         {
             R"re(@Test\s+.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(@Before\s+.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(@After\s+.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(@BeforeEach\s+.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(@AfterEach\s+.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
         }},
        {"cpp",
         {
             R"re(TEST\s*\(\s*(\w+)\s*,\s*(\w+)\s*\))re",
             R"re(TEST_F\s*\(\s*(\w+)\s*,\s*(\w+)\s*\))re",
             R"re(TEST_P\s*\(\s*(\w+)\s*,\s*(\w+)\s*\))re",
         }},
        {"csharp",
         {
             R"re(\[Test(?:Case)?\]\s*.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(\[TestMethod\]\s*.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(\[Fact\]\s*.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
             R"re(\[Theory\]\s*.*?(?:public\s+)?void\s+(\w+)\s*\([^\)]*\))re",
         }},
        {"javascript",
         {
             R"re(test\s*\(\s*[\'"].*?[\'"]\s*,\s*(?:function|\([^\)]*\)\s*=>))re",
             R"re(it\s*\(\s*[\'"].*?[\'"]\s*,\s*(?:function|\([^\)]*\)\s*=>))re",
             R"re(describe\s*\(\s*[\'"].*?[\'"]\s*,\s*(?:function|\([^\)]*\)\s*=>))re",
             R"re(beforeEach\s*\(\s*(?:function|\([^\)]*\)\s*=>))re",
             R"re(afterEach\s*\(\s*(?:function|\([^\)]*\)\s*=>))re",
         }},
        {"python",
         {
             R"re(@pytest\.mark\..*?\s*def\s+(\w+)\s*\([^\)]*\):)re",
             R"re(@unittest\..*?\s*def\s+(\w+)\s*\([^\)]*\):)re",
             R"re(def\s+(test_\w+)\s*\([^\)]*\):)re",
             R"re(@pytest\.fixture\s*.*?def\s+(\w+)\s*\([^\)]*\):)re",
             R"re(@pytest\.(?:mark\.)?parametrize\s*.*?def\s+(\w+)\s*\([^\)]*\):)re",
         }},
    };
    lib.test_indicators = {
        R"re(^test)re", R"re(test$)re", R"re(Test)re",  R"re(_test$)re",
        R"re(^test_)re", R"re(_Test$)re", R"re(^Test)re",
    };
    return lib;
}

std::string pattern_key_for(extractor::LanguageTag lang) {
    using extractor::LanguageTag;
    switch (lang) {
        case LanguageTag::Java: return "java";
        case LanguageTag::C:
        case LanguageTag::Cpp: return "cpp";
        case LanguageTag::CSharp: return "csharp";
        case LanguageTag::JavaScript: return "javascript";
        case LanguageTag::Python: return "python";
        default: return "";
    }
}

core::json library_to_json(const PatternLibrary& lib) {
    core::json fp;
    for (const auto& lp : lib.function_patterns) fp[lp.key] = lp.patterns;
    core::json j;
    j["function_patterns"] = fp;
    j["test_indicators"] = lib.test_indicators;
    return j;
}

PatternLibrary library_from_json(const core::json& j, const std::string& where) {
    PatternLibrary lib;
    const auto& fp = core::require_field(j, "function_patterns", where);
    if (!fp.is_object()) throw core::SchemaError(where + ": function_patterns must be an object");
    for (const auto& [key, value] : fp.items()) {
        LanguagePatterns lp;
        lp.key = key;
        for (const auto& p : value) lp.patterns.push_back(p.get<std::string>());
        lib.function_patterns.push_back(std::move(lp));
    }
    const auto& ind = core::require_field(j, "test_indicators", where);
    if (!ind.is_array()) throw core::SchemaError(where + ": test_indicators must be an array");
    for (const auto& p : ind) lib.test_indicators.push_back(p.get<std::string>());
    return lib;
}

PatternLibrary load_pattern_library(const std::filesystem::path& path) {
    auto j = core::json::parse(core::read_file(path));
    return library_from_json(j, path.string());
}

}  // namespace patchsieve::testfilter
