// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace patchsieve {

std::string lower_ascii(std::string_view s);
std::string trim(std::string_view s);

// Splits on '\n'; lines do not include the terminator. A trailing newline
// does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view text);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view text);

// Normalization used for no-op and duplicate detection: LF line endings,
// trailing whitespace stripped from every line.
std::string normalize_for_compare(std::string_view text);

// Normalizes line endings and strips leading/trailing blank lines (lines
// that are empty or whitespace-only). Interior whitespace is preserved.
std::string normalize_for_dedup(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool contains_ci(std::string_view haystack_lower, std::string_view needle_lower);

}  // namespace patchsieve

namespace patchsieve {
namespace core = ::patchsieve;
}
