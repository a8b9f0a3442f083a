// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "patchsieve/extractor/language.hpp"

namespace patchsieve::extractor {

// One function definition found in a source file. Lines are 1-based and the
// span is inclusive; it starts at the first annotation, decorator, or
// signature token and ends at the closing brace (or last body line for
// Python). Anonymous functions get a name of the form "<anon:LINE>".
struct FunctionRecord {
    std::string name;
    std::string qualified_name;
    int arity = 0;
    std::size_t start_line = 0;
    std::size_t end_line = 0;
};

struct FileIndex {
    std::vector<FunctionRecord> functions;
    bool parse_ok = true;
    std::string error;
};

// Heuristic scanner: comments/strings are masked, then function boundaries
// are located by brace matching (Java, C, C++, C#, JavaScript) or by
// indentation (Python). Unknown language yields an empty index.
FileIndex index_functions(const std::string& source, LanguageTag lang);

// Index into `functions` of the innermost record whose span contains `line`,
// or nullopt when no function covers it.
std::optional<std::size_t> innermost_enclosing(const std::vector<FunctionRecord>& functions,
                                               std::size_t line);

}  // namespace patchsieve::extractor
