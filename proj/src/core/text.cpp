// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/core/text.hpp"

#include <algorithm>
#include <cctype>

namespace patchsieve {

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string normalize_newlines(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            out.push_back('\n');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string normalize_for_compare(std::string_view text) {
    std::string lf = normalize_newlines(text);
    std::vector<std::string> lines = split_lines(lf);
    for (auto& line : lines) {
        size_t e = line.size();
        while (e > 0 && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
        line.resize(e);
    }
    return join(lines, "\n");
}

std::string normalize_for_dedup(std::string_view text) {
    std::vector<std::string> lines = split_lines(normalize_newlines(text));
    auto blank = [](const std::string& line) {
        return line.find_first_not_of(" \t") == std::string::npos;
    };
    size_t b = 0, e = lines.size();
    while (b < e && blank(lines[b])) ++b;
    while (e > b && blank(lines[e - 1])) --e;
    return join({lines.begin() + b, lines.begin() + e}, "\n");
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool contains_ci(std::string_view haystack_lower, std::string_view needle_lower) {
    return haystack_lower.find(needle_lower) != std::string_view::npos;
}

}  // namespace patchsieve
