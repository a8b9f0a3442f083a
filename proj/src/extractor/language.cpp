// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/extractor/language.hpp"

#include <algorithm>

#include "patchsieve/core/text.hpp"

namespace patchsieve::extractor {

LanguageTag detect_language(std::string_view path) {
    size_t slash = path.find_last_of('/');
    std::string_view base = slash == std::string_view::npos ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0) return LanguageTag::Unknown;
    std::string ext = lower_ascii(base.substr(dot + 1));

    if (ext == "java") return LanguageTag::Java;
    if (ext == "py") return LanguageTag::Python;
    if (ext == "c" || ext == "h") return LanguageTag::C;
    if (ext == "cc" || ext == "cpp" || ext == "cxx" || ext == "hpp" || ext == "hh")
        return LanguageTag::Cpp;
    if (ext == "cs") return LanguageTag::CSharp;
    if (ext == "js" || ext == "jsx" || ext == "mjs") return LanguageTag::JavaScript;
    return LanguageTag::Unknown;
}

std::string_view language_name(LanguageTag tag) {
    switch (tag) {
        case LanguageTag::Java: return "Java";
        case LanguageTag::Python: return "Python";
        case LanguageTag::C: return "C";
        case LanguageTag::Cpp: return "Cpp";
        case LanguageTag::CSharp: return "CSharp";
        case LanguageTag::JavaScript: return "JavaScript";
        case LanguageTag::Unknown: break;
    }
    return "Unknown";
}

LanguageTag language_from_name(std::string_view name) {
    if (name == "Java") return LanguageTag::Java;
    if (name == "Python") return LanguageTag::Python;
    if (name == "C") return LanguageTag::C;
    if (name == "Cpp") return LanguageTag::Cpp;
    if (name == "CSharp") return LanguageTag::CSharp;
    if (name == "JavaScript") return LanguageTag::JavaScript;
    return LanguageTag::Unknown;
}

}  // namespace patchsieve::extractor
