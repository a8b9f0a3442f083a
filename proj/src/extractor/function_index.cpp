// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/extractor/function_index.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <string_view>
#include <unordered_set>

#include "patchsieve/core/text.hpp"

namespace patchsieve::extractor {

namespace {

constexpr std::size_t npos = std::string::npos;

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool is_brace_language(LanguageTag lang) {
    switch (lang) {
        case LanguageTag::Java:
        case LanguageTag::C:
        case LanguageTag::Cpp:
        case LanguageTag::CSharp:
        case LanguageTag::JavaScript:
            return true;
        default:
            return false;
    }
}

const std::unordered_set<std::string_view>& control_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "if",       "else",    "for",     "while",   "do",      "switch", "case",
        "return",   "new",     "throw",   "catch",   "try",     "sizeof", "typeof",
        "typeid",   "decltype", "alignof", "static_assert", "synchronized", "lock",
        "using",    "foreach", "fixed",   "when",    "assert",  "await",  "yield",
        "in",       "of",      "instanceof", "delete",
    };
    return kws;
}

const std::unordered_set<std::string_view>& modifier_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "public",   "private",  "protected", "static",   "final",    "abstract",
        "sealed",   "partial",  "internal",  "export",   "default",  "const",
        "native",   "strictfp", "synchronized", "friend", "typedef", "extern",
        "virtual",  "inline",   "constexpr", "explicit", "mutable",  "unsafe",
        "readonly", "volatile", "transient", "async",    "new",      "override",
    };
    return kws;
}

const std::unordered_set<std::string_view>& container_keywords() {
    static const std::unordered_set<std::string_view> kws = {
        "class", "struct", "interface", "enum", "namespace", "union", "record",
    };
    return kws;
}

// ---------------------------------------------------------------------------
// Masking: comments and string literals become spaces (newlines kept) so the
// boundary scan never trips on braces or quotes inside them.
// ---------------------------------------------------------------------------

void blank_range(std::string& out, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to && i < out.size(); ++i)
        if (out[i] != '\n') out[i] = ' ';
}

std::string mask_c_family(const std::string& s, bool preprocessor, bool csharp) {
    std::string out = s;
    const std::size_t n = s.size();
    std::size_t i = 0;
    bool line_start = true;
    while (i < n) {
        char c = s[i];
        if (c == '\n') {
            line_start = true;
            ++i;
            continue;
        }
        if (preprocessor && line_start && c == '#') {
            std::size_t j = i;
            while (j < n) {
                if (s[j] == '\n') {
                    std::size_t p = j;
                    if (p > i && s[p - 1] == '\r') --p;
                    if (p > i && s[p - 1] == '\\') {
                        ++j;
                        continue;
                    }
                    break;
                }
                ++j;
            }
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (!is_space(c)) line_start = false;
        if (c == '/' && i + 1 < n && s[i + 1] == '/') {
            std::size_t j = i;
            while (j < n && s[j] != '\n') ++j;
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (c == '/' && i + 1 < n && s[i + 1] == '*') {
            std::size_t j = i + 2;
            while (j + 1 < n && !(s[j] == '*' && s[j + 1] == '/')) ++j;
            j = (j + 1 < n) ? j + 2 : n;
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (c == 'R' && i + 1 < n && s[i + 1] == '"' && (i == 0 || !is_ident_char(s[i - 1]))) {
            std::size_t d0 = i + 2;
            std::size_t d1 = d0;
            while (d1 < n && s[d1] != '(' && s[d1] != '"' && s[d1] != '\n' && d1 - d0 < 16) ++d1;
            if (d1 < n && s[d1] == '(') {
                std::string close = ")" + s.substr(d0, d1 - d0) + "\"";
                std::size_t j = s.find(close, d1 + 1);
                j = (j == npos) ? n : j + close.size();
                blank_range(out, i, j);
                i = j;
                continue;
            }
        }
        if (csharp && (c == '@' || c == '$') && i + 1 < n && s[i + 1] == '"') {
            std::size_t j = i + 2;
            while (j < n) {
                if (s[j] == '"') {
                    if (j + 1 < n && s[j + 1] == '"') {
                        j += 2;
                        continue;
                    }
                    ++j;
                    break;
                }
                ++j;
            }
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            while (j < n && s[j] != c && s[j] != '\n') {
                if (s[j] == '\\' && j + 1 < n) ++j;
                ++j;
            }
            if (j < n && s[j] == c) ++j;
            blank_range(out, i, j);
            i = j;
            continue;
        }
        ++i;
    }
    return out;
}

std::string mask_javascript(const std::string& s) {
    std::string out = s;
    const std::size_t n = s.size();
    std::size_t i = 0;
    char last_code = 0;
    std::string last_word;
    auto note_code = [&](char c) {
        if (is_space(c)) return;
        if (is_ident_char(c)) {
            if (last_code != 0 && is_ident_char(last_code))
                last_word.push_back(c);
            else
                last_word.assign(1, c);
        } else {
            last_word.clear();
        }
        last_code = c;
    };
    while (i < n) {
        char c = s[i];
        if (c == '/' && i + 1 < n && s[i + 1] == '/') {
            std::size_t j = i;
            while (j < n && s[j] != '\n') ++j;
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (c == '/' && i + 1 < n && s[i + 1] == '*') {
            std::size_t j = i + 2;
            while (j + 1 < n && !(s[j] == '*' && s[j + 1] == '/')) ++j;
            j = (j + 1 < n) ? j + 2 : n;
            blank_range(out, i, j);
            i = j;
            continue;
        }
        if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            while (j < n && s[j] != c && s[j] != '\n') {
                if (s[j] == '\\' && j + 1 < n) ++j;
                ++j;
            }
            if (j < n && s[j] == c) ++j;
            blank_range(out, i, j);
            i = j;
            last_code = '"';
            last_word.clear();
            continue;
        }
        if (c == '`') {
            std::size_t j = i + 1;
            while (j < n) {
                if (s[j] == '\\' && j + 1 < n) {
                    j += 2;
                    continue;
                }
                if (s[j] == '`') {
                    ++j;
                    break;
                }
                ++j;
            }
            blank_range(out, i, j);
            i = j;
            last_code = '"';
            last_word.clear();
            continue;
        }
        if (c == '/') {
            static const std::unordered_set<std::string_view> regex_words = {
                "return", "case", "typeof", "in", "of", "new", "delete", "void",
                "instanceof", "do", "else",
            };
            bool expr_pos = last_code == 0 ||
                            std::strchr("(,=:[!&|?{};+-*%<>~^", last_code) != nullptr ||
                            (is_ident_char(last_code) && regex_words.count(last_word) > 0);
            if (expr_pos) {
                std::size_t j = i + 1;
                bool in_class = false;
                bool closed = false;
                while (j < n && s[j] != '\n') {
                    if (s[j] == '\\' && j + 1 < n) {
                        j += 2;
                        continue;
                    }
                    if (s[j] == '[')
                        in_class = true;
                    else if (s[j] == ']')
                        in_class = false;
                    else if (s[j] == '/' && !in_class) {
                        ++j;
                        closed = true;
                        break;
                    }
                    ++j;
                }
                if (closed) {
                    while (j < n && is_ident_char(s[j])) ++j;
                    blank_range(out, i, j);
                    i = j;
                    last_code = '"';
                    last_word.clear();
                    continue;
                }
            }
        }
        note_code(c);
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shared scan helpers over masked text
// ---------------------------------------------------------------------------

std::vector<std::size_t> line_starts_of(const std::string& s) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] == '\n') starts.push_back(i + 1);
    return starts;
}

std::size_t line_of(const std::vector<std::size_t>& starts, std::size_t pos) {
    auto it = std::upper_bound(starts.begin(), starts.end(), pos);
    return static_cast<std::size_t>(it - starts.begin());
}

std::size_t skip_ws_back(std::string_view m, std::size_t lo, std::size_t pos) {
    while (pos > lo && is_space(m[pos - 1])) --pos;
    return pos;
}

// Reads the identifier ending just before `pos` (exclusive); returns its
// start, or `pos` when there is none.
std::size_t ident_start_back(std::string_view m, std::size_t lo, std::size_t pos) {
    std::size_t q = pos;
    while (q > lo && is_ident_char(m[q - 1])) --q;
    return q;
}

std::size_t match_paren_forward(std::string_view m, std::size_t open, std::size_t limit) {
    int depth = 0;
    for (std::size_t i = open; i < limit; ++i) {
        if (m[i] == '(') ++depth;
        else if (m[i] == ')') {
            --depth;
            if (depth == 0) return i;
        }
    }
    return npos;
}

std::size_t match_paren_back(std::string_view m, std::size_t lo, std::size_t close) {
    int depth = 0;
    for (std::size_t i = close + 1; i > lo;) {
        --i;
        if (m[i] == ')') ++depth;
        else if (m[i] == '(') {
            --depth;
            if (depth == 0) return i;
        }
    }
    return npos;
}

int count_arity(std::string_view m, std::size_t open, std::size_t close, bool c_style_void) {
    int depth = 0;
    int segments = 0;
    bool seg_nonempty = false;
    std::string first_seg;
    for (std::size_t i = open + 1; i < close; ++i) {
        char c = m[i];
        if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
        else if (c == ')' || c == ']' || c == '}' || c == '>') {
            if (depth > 0) --depth;
        }
        else if (c == ',' && depth == 0) {
            if (seg_nonempty) ++segments;
            seg_nonempty = false;
            continue;
        }
        if (!is_space(c)) {
            seg_nonempty = true;
            if (segments == 0) first_seg.push_back(c);
        }
    }
    if (seg_nonempty) ++segments;
    if (c_style_void && segments == 1 && first_seg == "void") return 0;
    return segments;
}

struct IdentBefore {
    std::string name;
    std::size_t name_start = npos;
    bool ok = false;
    bool anon_function_kw = false;  // JavaScript `function (...)`
};

IdentBefore ident_before_paren(std::string_view m, std::size_t lo, std::size_t paren,
                               LanguageTag lang) {
    IdentBefore r;
    std::size_t q = skip_ws_back(m, lo, paren);
    // JavaScript generator star: function* name( / function* (
    if (lang == LanguageTag::JavaScript && q > lo && m[q - 1] == '*')
        q = skip_ws_back(m, lo, q - 1);
    // generic argument list between name and parens: Foo<T>(...)
    if ((lang == LanguageTag::Cpp || lang == LanguageTag::CSharp || lang == LanguageTag::Java) &&
        q > lo && m[q - 1] == '>') {
        int depth = 0;
        std::size_t i = q;
        bool closed = false;
        while (i > lo && q - i < 512) {
            --i;
            char c = m[i];
            if (c == '>') ++depth;
            else if (c == '<') {
                --depth;
                if (depth == 0) {
                    closed = true;
                    break;
                }
            } else if (c == ';' || c == '{' || c == '}') {
                break;
            }
        }
        if (closed)
            q = skip_ws_back(m, lo, i);
        else if (lang != LanguageTag::Cpp)
            return r;
    }
    std::size_t start = ident_start_back(m, lo, q);
    if (start == q) {
        // C++ operator overloads: punctuation then the word `operator`
        if (lang == LanguageTag::Cpp) {
            std::size_t p = q;
            while (p > lo && std::strchr("+-*/%^&|~!=<>[]", m[p - 1])) --p;
            if (p < q) {
                std::size_t w = skip_ws_back(m, lo, p);
                std::size_t ws = ident_start_back(m, lo, w);
                if (w - ws == 8 && m.substr(ws, 8) == "operator") {
                    r.name = std::string(m.substr(ws, q - ws));
                    r.name_start = ws;
                    r.ok = true;
                    return r;
                }
            }
        }
        return r;
    }
    std::string word(m.substr(start, q - start));
    if (word == "function" && lang == LanguageTag::JavaScript) {
        r.anon_function_kw = true;
        r.name_start = start;
        return r;
    }
    if (control_keywords().count(word)) {
        if ((word == "new" || word == "delete") && lang == LanguageTag::Cpp) {
            std::size_t w = skip_ws_back(m, lo, start);
            std::size_t ws = ident_start_back(m, lo, w);
            if (w - ws == 8 && m.substr(ws, 8) == "operator") {
                r.name = "operator " + word;
                r.name_start = ws;
                r.ok = true;
                return r;
            }
        }
        return r;
    }
    std::string name = word;
    std::size_t name_start = start;
    if (name_start > lo && m[name_start - 1] == '~') {
        name = "~" + name;
        --name_start;
    }
    // C++ qualified definitions: Outer::name, Outer::~Outer
    if (lang == LanguageTag::Cpp || lang == LanguageTag::C) {
        while (name_start > lo + 1 && m[name_start - 1] == ':' && m[name_start - 2] == ':') {
            std::size_t seg_end = name_start - 2;
            std::size_t seg_start = ident_start_back(m, lo, seg_end);
            if (seg_start == seg_end) break;
            name = std::string(m.substr(seg_start, seg_end - seg_start)) + "::" + name;
            name_start = seg_start;
        }
    }
    std::size_t before = skip_ws_back(m, lo, name_start);
    if (before > lo) {
        char prev = m[before - 1];
        if (prev == '@' || prev == '.') return r;
        if (prev == '>' && before > lo + 1 && m[before - 2] == '-') return r;
    }
    std::size_t wend = before;
    std::size_t wstart = ident_start_back(m, lo, wend);
    if (wend > wstart) {
        std::string prev_word(m.substr(wstart, wend - wstart));
        if (prev_word == "new") return r;
    }
    r.name = std::move(name);
    r.name_start = name_start;
    r.ok = true;
    return r;
}

// ---------------------------------------------------------------------------
// Brace-language scanner
// ---------------------------------------------------------------------------

struct Pending {
    enum class Kind { Function, Container, Anonymous };
    Kind kind = Kind::Anonymous;
    std::string name;
    int arity = 0;
};

std::vector<std::string_view> tokenize(std::string_view sig) {
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < sig.size()) {
        if (is_space(sig[i])) {
            ++i;
            continue;
        }
        if (is_ident_char(sig[i]) || sig[i] == '@') {
            std::size_t j = i + (sig[i] == '@' ? 1 : 0);
            while (j < sig.size() && is_ident_char(sig[j])) ++j;
            toks.push_back(sig.substr(i, j - i));
            i = j;
        } else {
            toks.push_back(sig.substr(i, 1));
            ++i;
        }
    }
    return toks;
}

// Detects `class Foo`, `namespace ns`, `enum class E : int`, `record Point(..)`.
std::optional<Pending> detect_container(std::string_view sig) {
    auto toks = tokenize(sig);
    std::size_t i = 0;
    while (i < toks.size()) {
        std::string_view t = toks[i];
        if (t.size() > 1 && t[0] == '@') {
            ++i;
            if (i < toks.size() && toks[i] == "(") {
                int depth = 0;
                while (i < toks.size()) {
                    if (toks[i] == "(") ++depth;
                    else if (toks[i] == ")" && --depth == 0) {
                        ++i;
                        break;
                    }
                    ++i;
                }
            }
            continue;
        }
        if (t == "[") {
            int depth = 0;
            while (i < toks.size()) {
                if (toks[i] == "[") ++depth;
                else if (toks[i] == "]" && --depth == 0) {
                    ++i;
                    break;
                }
                ++i;
            }
            continue;
        }
        if (t == "template") {
            ++i;
            if (i < toks.size() && toks[i] == "<") {
                int depth = 0;
                while (i < toks.size()) {
                    if (toks[i] == "<") ++depth;
                    else if (toks[i] == ">" && --depth == 0) {
                        ++i;
                        break;
                    }
                    ++i;
                }
            }
            continue;
        }
        if (modifier_keywords().count(t)) {
            ++i;
            continue;
        }
        break;
    }
    if (i >= toks.size()) return std::nullopt;
    std::string_view kw = toks[i];
    if (!container_keywords().count(kw)) return std::nullopt;
    ++i;
    if ((kw == "enum") && i < toks.size() && (toks[i] == "class" || toks[i] == "struct")) ++i;
    std::string name;
    if (i < toks.size() && is_ident_char(toks[i][0])) {
        name = std::string(toks[i]);
        ++i;
    }
    if (kw != "record") {
        for (std::size_t j = i; j < toks.size(); ++j)
            if (toks[j] == "(") return std::nullopt;
    }
    Pending p;
    p.kind = Pending::Kind::Container;
    p.name = std::move(name);
    return p;
}

bool trailer_clean(std::string_view m, std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
        if (m[i] == ';' || m[i] == '=') return false;
    return true;
}

std::optional<Pending> find_c_candidate(std::string_view m, std::size_t sig_start,
                                        std::size_t brace, LanguageTag lang) {
    std::size_t p = sig_start;
    int bracket_depth = 0;
    while (p < brace) {
        char c = m[p];
        if (c == '[') {
            ++bracket_depth;
            ++p;
            continue;
        }
        if (c == ']') {
            if (bracket_depth > 0) --bracket_depth;
            ++p;
            continue;
        }
        if (c == '(') {
            std::size_t close = match_paren_forward(m, p, brace);
            if (close == npos) {
                ++p;
                continue;
            }
            if (bracket_depth == 0) {
                auto id = ident_before_paren(m, sig_start, p, lang);
                if (id.ok && trailer_clean(m, close + 1, brace)) {
                    Pending out;
                    out.kind = Pending::Kind::Function;
                    out.name = id.name;
                    out.arity = count_arity(m, p, close,
                                            lang == LanguageTag::C || lang == LanguageTag::Cpp);
                    return out;
                }
            }
            p = close + 1;
            continue;
        }
        ++p;
    }
    return std::nullopt;
}

// `const handler = async (req, res) => {` and friends; `pos` is just past the
// expression start, walking back over `=` / `:` to a dotted name.
std::string js_assignment_name(std::string_view m, std::size_t lo, std::size_t pos) {
    std::size_t q = skip_ws_back(m, lo, pos);
    std::size_t ws = ident_start_back(m, lo, q);
    if (q - ws == 5 && m.substr(ws, 5) == "async") q = skip_ws_back(m, lo, ws);
    if (q == lo) return {};
    char c = m[q - 1];
    if (c == '=') {
        if (q >= lo + 2 && std::strchr("=!<>+-*/%&|^", m[q - 2])) return {};
        --q;
    } else if (c == ':') {
        --q;
    } else {
        return {};
    }
    q = skip_ws_back(m, lo, q);
    std::string name;
    while (true) {
        std::size_t start = ident_start_back(m, lo, q);
        if (start == q) return {};
        name = std::string(m.substr(start, q - start)) + (name.empty() ? "" : "." + name);
        if (start > lo && m[start - 1] == '.')
            q = start - 1;
        else
            break;
    }
    return name;
}

std::optional<Pending> find_js_candidate(std::string_view m, std::size_t sig_start,
                                         std::size_t brace, std::size_t sig_line) {
    std::size_t end = skip_ws_back(m, sig_start, brace);
    if (end == sig_start) return std::nullopt;
    auto anon_name = [sig_line]() { return "<anon:" + std::to_string(sig_line) + ">"; };

    // Arrow body: `... => {`
    if (end >= sig_start + 2 && m[end - 1] == '>' && m[end - 2] == '=') {
        std::size_t q = skip_ws_back(m, sig_start, end - 2);
        Pending out;
        out.kind = Pending::Kind::Function;
        if (q > sig_start && m[q - 1] == ')') {
            std::size_t open = match_paren_back(m, sig_start, q - 1);
            if (open == npos) return std::nullopt;
            out.arity = count_arity(m, open, q - 1, false);
            out.name = js_assignment_name(m, sig_start, open);
        } else {
            std::size_t start = ident_start_back(m, sig_start, q);
            if (start == q) return std::nullopt;
            out.arity = 1;
            out.name = js_assignment_name(m, sig_start, start);
        }
        if (out.name.empty()) out.name = anon_name();
        return out;
    }

    if (m[end - 1] != ')') return std::nullopt;
    std::size_t open = match_paren_back(m, sig_start, end - 1);
    if (open == npos) return std::nullopt;
    auto id = ident_before_paren(m, sig_start, open, LanguageTag::JavaScript);
    if (!id.ok && !id.anon_function_kw) return std::nullopt;
    Pending out;
    out.kind = Pending::Kind::Function;
    out.arity = count_arity(m, open, end - 1, false);
    if (id.anon_function_kw) {
        out.name = js_assignment_name(m, sig_start, id.name_start);
        if (out.name.empty()) out.name = anon_name();
        return out;
    }
    // Named declaration or method shorthand; reject bare control statements.
    out.name = id.name;
    // `function foo(` keeps foo; `foo(` could also be a method shorthand or a
    // class method, both of which we want.
    return out;
}

struct Frame {
    Pending::Kind kind = Pending::Kind::Anonymous;
    std::size_t fn_index = npos;
    bool contributes_path = false;
};

FileIndex scan_brace_language(const std::string& source, LanguageTag lang) {
    FileIndex index;
    std::string masked;
    if (lang == LanguageTag::JavaScript)
        masked = mask_javascript(source);
    else
        masked = mask_c_family(source, lang == LanguageTag::C || lang == LanguageTag::Cpp ||
                                            lang == LanguageTag::CSharp,
                               lang == LanguageTag::CSharp);
    auto starts = line_starts_of(masked);
    std::string_view m = masked;
    const std::size_t n = m.size();

    std::vector<Frame> frames;
    std::vector<std::string> path;
    std::size_t sig_start = 0;
    int paren_depth = 0;
    const bool js = lang == LanguageTag::JavaScript;

    auto first_nonws = [&](std::size_t from, std::size_t to) {
        while (from < to && is_space(m[from])) ++from;
        return from;
    };

    for (std::size_t i = 0; i < n; ++i) {
        char c = m[i];
        if (c == '(') {
            ++paren_depth;
            continue;
        }
        if (c == ')') {
            if (paren_depth > 0) --paren_depth;
            continue;
        }
        if (c == ';') {
            if (paren_depth == 0) sig_start = i + 1;
            continue;
        }
        if (c == ':' && paren_depth == 0 && !js) {
            // access labels and case labels reset the signature window
            std::size_t q = skip_ws_back(m, sig_start, i);
            std::size_t ws = ident_start_back(m, sig_start, q);
            std::string_view word = m.substr(ws, q - ws);
            bool label = word == "public" || word == "private" || word == "protected" ||
                         word == "default";
            if (!label) {
                std::size_t f = first_nonws(sig_start, i);
                std::size_t fe = f;
                while (fe < i && is_ident_char(m[fe])) ++fe;
                label = m.substr(f, fe - f) == "case";
            }
            if (label) sig_start = i + 1;
            continue;
        }
        if (c == '{') {
            if (!js && paren_depth > 0) continue;  // brace-init inside arguments
            std::size_t f = first_nonws(sig_start, i);
            std::size_t sig_line = line_of(starts, f < i ? f : i);
            Pending pending;
            bool decided = false;
            if (f < i) {
                std::string_view sig = m.substr(sig_start, i - sig_start);
                if (auto cont = detect_container(sig)) {
                    pending = *cont;
                    decided = true;
                } else if (js) {
                    if (auto cand = find_js_candidate(m, sig_start, i, sig_line)) {
                        pending = *cand;
                        decided = true;
                    }
                } else if (auto cand = find_c_candidate(m, sig_start, i, lang)) {
                    pending = *cand;
                    decided = true;
                }
            }
            Frame frame;
            frame.kind = decided ? pending.kind : Pending::Kind::Anonymous;
            if (frame.kind == Pending::Kind::Function) {
                FunctionRecord rec;
                rec.name = pending.name;
                rec.arity = pending.arity;
                rec.start_line = sig_line;
                rec.end_line = sig_line;
                rec.qualified_name =
                    path.empty() ? rec.name : core::join(path, ".") + "." + rec.name;
                frame.fn_index = index.functions.size();
                index.functions.push_back(std::move(rec));
                if (pending.name.rfind("<anon:", 0) != 0) {
                    path.push_back(pending.name);
                    frame.contributes_path = true;
                }
            } else if (frame.kind == Pending::Kind::Container && !pending.name.empty()) {
                path.push_back(pending.name);
                frame.contributes_path = true;
            }
            frames.push_back(frame);
            sig_start = i + 1;
            continue;
        }
        if (c == '}') {
            if (!js && paren_depth > 0) continue;
            if (frames.empty()) {
                index.parse_ok = false;
                index.error = "unbalanced closing brace at line " +
                              std::to_string(line_of(starts, i));
                return index;
            }
            Frame frame = frames.back();
            frames.pop_back();
            if (frame.contributes_path) path.pop_back();
            if (frame.fn_index != npos)
                index.functions[frame.fn_index].end_line = line_of(starts, i);
            sig_start = i + 1;
            continue;
        }
    }
    if (!frames.empty()) {
        index.parse_ok = false;
        index.error = "unbalanced braces at end of file";
        index.functions.clear();
    }
    return index;
}

// ---------------------------------------------------------------------------
// Python scanner
// ---------------------------------------------------------------------------

struct PyLine {
    std::string masked;
    bool starts_in_string = false;
    bool starts_in_parens = false;
    bool continuation_backslash = false;  // previous line ended with backslash
    bool has_string_content = false;
};

std::vector<PyLine> mask_python(const std::vector<std::string>& lines) {
    std::vector<PyLine> out;
    out.reserve(lines.size());
    enum class St { Code, Triple };
    St state = St::Code;
    char triple_q = 0;
    int depth = 0;
    bool backslash = false;
    for (const auto& raw : lines) {
        PyLine pl;
        pl.starts_in_string = state == St::Triple;
        pl.starts_in_parens = depth > 0;
        pl.continuation_backslash = backslash;
        backslash = false;
        std::string masked = raw;
        const std::size_t n = raw.size();
        std::size_t i = 0;
        while (i < n) {
            char c = raw[i];
            if (state == St::Triple) {
                pl.has_string_content = true;
                if (c == '\\' && i + 1 < n) {
                    masked[i] = ' ';
                    masked[i + 1] = ' ';
                    i += 2;
                    continue;
                }
                if (c == triple_q && raw.compare(i, 3, std::string(3, triple_q)) == 0) {
                    masked[i] = masked[i + 1] = masked[i + 2] = ' ';
                    i += 3;
                    state = St::Code;
                    continue;
                }
                masked[i] = ' ';
                ++i;
                continue;
            }
            if (c == '#') {
                for (std::size_t j = i; j < n; ++j) masked[j] = ' ';
                break;
            }
            if (c == '"' || c == '\'') {
                if (i + 2 < n && raw[i + 1] == c && raw[i + 2] == c) {
                    masked[i] = masked[i + 1] = masked[i + 2] = ' ';
                    i += 3;
                    state = St::Triple;
                    triple_q = c;
                    pl.has_string_content = true;
                    continue;
                }
                std::size_t j = i + 1;
                while (j < n && raw[j] != c) {
                    if (raw[j] == '\\' && j + 1 < n) ++j;
                    ++j;
                }
                if (j < n) ++j;
                for (std::size_t k = i; k < j; ++k) masked[k] = ' ';
                pl.has_string_content = true;
                i = j;
                continue;
            }
            if (c == '(' || c == '[' || c == '{') ++depth;
            else if (c == ')' || c == ']' || c == '}') {
                if (depth > 0) --depth;
            }
            ++i;
        }
        if (state == St::Code) {
            std::size_t last = masked.find_last_not_of(" \t\r");
            if (last != npos && masked[last] == '\\') backslash = true;
        }
        pl.masked = std::move(masked);
        out.push_back(std::move(pl));
    }
    return out;
}

std::size_t indent_of(const std::string& line) {
    std::size_t col = 0;
    for (char c : line) {
        if (c == ' ')
            ++col;
        else if (c == '\t')
            col = (col / 8 + 1) * 8;
        else
            break;
    }
    return col;
}

bool line_blank(const std::string& masked) {
    return masked.find_first_not_of(" \t\r") == npos;
}

FileIndex scan_python(const std::string& source) {
    FileIndex index;
    auto lines = core::split_lines(source);
    auto masked = mask_python(lines);

    struct PyFrame {
        std::size_t indent;
        std::string name;
        bool is_def;
        std::size_t fn_index;
        std::size_t last_content;
    };
    std::vector<PyFrame> frames;
    std::vector<std::size_t> decorators;  // first lines of pending decorators

    auto finalize = [&](const PyFrame& f) {
        if (f.is_def) index.functions[f.fn_index].end_line = f.last_content;
    };
    auto qualified = [&](const std::string& name) {
        std::string q;
        for (const auto& f : frames) {
            q += f.name;
            q += '.';
        }
        return q + name;
    };

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::size_t lineno = li + 1;
        const PyLine& pl = masked[li];
        bool code_blank = line_blank(pl.masked);
        if (pl.starts_in_string || pl.starts_in_parens || pl.continuation_backslash) {
            if (!code_blank || pl.has_string_content || !line_blank(lines[li]))
                for (auto& f : frames) f.last_content = lineno;
            continue;
        }
        if (code_blank) continue;  // blank or comment-only

        std::size_t indent = indent_of(pl.masked);
        while (!frames.empty() && frames.back().indent >= indent) {
            finalize(frames.back());
            frames.pop_back();
        }
        for (auto& f : frames) f.last_content = lineno;

        std::string stripped = core::trim(pl.masked);
        if (!stripped.empty() && stripped[0] == '@') {
            decorators.push_back(lineno);
            continue;
        }

        bool is_async = stripped.rfind("async ", 0) == 0;
        std::string head = is_async ? core::trim(stripped.substr(5)) : stripped;
        bool is_def = head.rfind("def ", 0) == 0 || head == "def";
        bool is_class = head.rfind("class ", 0) == 0 || head == "class";
        if (!is_def && !is_class) {
            decorators.clear();
            continue;
        }

        std::size_t kw_len = is_def ? 3 : 5;
        std::string rest = core::trim(head.substr(std::min(kw_len, head.size())));
        std::string name;
        std::size_t p = 0;
        while (p < rest.size() && is_ident_char(rest[p])) ++p;
        name = rest.substr(0, p);
        if (name.empty()) {
            decorators.clear();
            continue;
        }

        int arity = 0;
        if (is_def) {
            // Join continuation lines until the parameter list closes.
            std::string joined = pl.masked;
            std::size_t open = joined.find('(');
            std::size_t extra = li + 1;
            while (open != npos && match_paren_forward(joined, open, joined.size()) == npos &&
                   extra < lines.size() && extra < li + 200) {
                joined += '\n';
                joined += masked[extra].masked;
                ++extra;
            }
            if (open != npos) {
                std::size_t close = match_paren_forward(joined, open, joined.size());
                if (close != npos) arity = count_arity(joined, open, close, false);
            }
        }

        std::size_t start = decorators.empty() ? lineno : decorators.front();
        std::string qname = qualified(name);
        PyFrame frame{indent, name, is_def, npos, lineno};
        if (is_def) {
            FunctionRecord rec;
            rec.name = name;
            rec.qualified_name = qname;
            rec.arity = arity;
            rec.start_line = start;
            rec.end_line = lineno;
            frame.fn_index = index.functions.size();
            index.functions.push_back(std::move(rec));
        }
        frames.push_back(std::move(frame));
        decorators.clear();
    }
    while (!frames.empty()) {
        finalize(frames.back());
        frames.pop_back();
    }
    return index;
}

}  // namespace

FileIndex index_functions(const std::string& source, LanguageTag lang) {
    if (lang == LanguageTag::Python) return scan_python(source);
    if (is_brace_language(lang)) return scan_brace_language(source, lang);
    return {};
}

std::optional<std::size_t> innermost_enclosing(const std::vector<FunctionRecord>& functions,
                                               std::size_t line) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < functions.size(); ++i) {
        const auto& f = functions[i];
        if (line < f.start_line || line > f.end_line) continue;
        if (!best) {
            best = i;
            continue;
        }
        const auto& b = functions[*best];
        if (f.start_line > b.start_line ||
            (f.start_line == b.start_line && f.end_line < b.end_line))
            best = i;
    }
    return best;
}

}  // namespace patchsieve::extractor
