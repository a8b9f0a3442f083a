// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>
#include <string_view>

namespace patchsieve::extractor {

enum class LanguageTag { Java, Python, C, Cpp, CSharp, JavaScript, Unknown };

// Extension-based mapping: .java, .py, .c/.h (C), .cc/.cpp/.cxx/.hpp/.hh (C++),
// .cs, .js/.jsx/.mjs. Everything else is Unknown.
LanguageTag detect_language(std::string_view path);

std::string_view language_name(LanguageTag tag);
LanguageTag language_from_name(std::string_view name);

}  // namespace patchsieve::extractor
