// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/extractor/extractor.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "patchsieve/core/hashing.hpp"
#include "patchsieve/core/text.hpp"
#include "patchsieve/extractor/diff.hpp"
#include "patchsieve/extractor/function_index.hpp"
#include "patchsieve/miner/git_repo.hpp"

namespace patchsieve::extractor {

namespace {

struct FunctionPair {
    std::optional<std::size_t> before_idx;
    std::optional<std::size_t> after_idx;
};

// Functions pair by (qualified name, arity); repeated keys pair in source
// order so overloads keep a stable one-to-one match.
std::vector<FunctionPair> pair_functions(const std::vector<FunctionRecord>& before,
                                         const std::vector<FunctionRecord>& after,
                                         std::vector<std::size_t>& pair_of_before,
                                         std::vector<std::size_t>& pair_of_after) {
    std::vector<FunctionPair> pairs;
    std::map<std::pair<std::string, int>, std::vector<std::size_t>> by_key;
    pair_of_before.assign(before.size(), 0);
    for (std::size_t i = 0; i < before.size(); ++i) {
        FunctionPair p;
        p.before_idx = i;
        pair_of_before[i] = pairs.size();
        by_key[{before[i].qualified_name, before[i].arity}].push_back(pairs.size());
        pairs.push_back(p);
    }
    std::map<std::pair<std::string, int>, std::size_t> used;
    pair_of_after.assign(after.size(), 0);
    for (std::size_t j = 0; j < after.size(); ++j) {
        auto key = std::make_pair(after[j].qualified_name, after[j].arity);
        auto it = by_key.find(key);
        std::size_t occurrence = used[key]++;
        if (it != by_key.end() && occurrence < it->second.size()) {
            std::size_t pi = it->second[occurrence];
            pairs[pi].after_idx = j;
            pair_of_after[j] = pi;
        } else {
            FunctionPair p;
            p.after_idx = j;
            pair_of_after[j] = pairs.size();
            pairs.push_back(p);
        }
    }
    return pairs;
}

// Hunks landing inside an anonymous function are attributed to the nearest
// enclosing named function; the anonymous record itself only wins when no
// named function contains the line (top-level callbacks).
std::optional<std::size_t> attributed_function(const std::vector<FunctionRecord>& functions,
                                               std::size_t line) {
    auto fi = innermost_enclosing(functions, line);
    if (!fi || functions[*fi].name.rfind("<anon:", 0) != 0) return fi;
    std::optional<std::size_t> named;
    for (std::size_t i = 0; i < functions.size(); ++i) {
        const auto& f = functions[i];
        if (f.name.rfind("<anon:", 0) == 0) continue;
        if (line < f.start_line || line > f.end_line) continue;
        if (!named || f.start_line > functions[*named].start_line ||
            (f.start_line == functions[*named].start_line &&
             f.end_line < functions[*named].end_line))
            named = i;
    }
    return named ? named : fi;
}

std::string slice_lines(const std::vector<std::string>& lines, const FunctionRecord& rec) {
    if (rec.start_line == 0 || rec.start_line > lines.size()) return {};
    std::size_t end = std::min(rec.end_line, lines.size());
    std::vector<std::string> out(lines.begin() + static_cast<std::ptrdiff_t>(rec.start_line - 1),
                                 lines.begin() + static_cast<std::ptrdiff_t>(end));
    return core::join(out, "\n");
}

core::json span_to_json(const std::optional<LineSpan>& span) {
    if (!span) return nullptr;
    return core::json{{"start", span->start}, {"end", span->end}};
}

std::optional<LineSpan> span_from_json(const core::json& j) {
    if (j.is_null()) return std::nullopt;
    LineSpan s;
    s.start = j.at("start").get<std::size_t>();
    s.end = j.at("end").get<std::size_t>();
    return s;
}

}  // namespace

std::vector<FunctionChange> extract_commit(const std::filesystem::path& repo_path,
                                           const miner::VfcMatch& vfc, ExtractReport& report) {
    std::vector<FunctionChange> changes;
    const auto& commit = vfc.commit;
    ++report.commits_processed;

    for (const auto& path : commit.changed_paths) {
        ++report.files_seen;
        LanguageTag lang = detect_language(path);
        if (lang == LanguageTag::Unknown) {
            ++report.files_unknown_language;
            continue;
        }
        std::optional<std::string> before_blob;
        if (!commit.parent_sha.empty())
            before_blob = miner::read_blob(repo_path, commit.parent_sha, path);
        std::optional<std::string> after_blob = miner::read_blob(repo_path, commit.sha, path);
        if (!before_blob && !after_blob) {
            ++report.files_unreadable;
            report.skipped_files.push_back({commit.sha, path, "unreadable in both versions"});
            continue;
        }
        std::string before = core::normalize_newlines(before_blob.value_or(""));
        std::string after = core::normalize_newlines(after_blob.value_or(""));
        if (before == after) continue;
        if (before.find('\0') != std::string::npos || after.find('\0') != std::string::npos) {
            ++report.files_skipped_binary;
            report.skipped_files.push_back({commit.sha, path, "binary content"});
            continue;
        }

        FileIndex before_index = index_functions(before, lang);
        FileIndex after_index = index_functions(after, lang);
        if (!before_index.parse_ok || !after_index.parse_ok) {
            ++report.files_skipped_unparseable;
            std::string why = !before_index.parse_ok ? before_index.error : after_index.error;
            report.skipped_files.push_back({commit.sha, path, why});
            continue;
        }

        auto before_lines = core::split_lines(before);
        auto after_lines = core::split_lines(after);
        auto hunks = diff_lines(before_lines, after_lines);

        std::vector<std::size_t> pair_of_before, pair_of_after;
        auto pairs = pair_functions(before_index.functions, after_index.functions,
                                    pair_of_before, pair_of_after);

        std::vector<std::set<std::size_t>> hunk_pairs(hunks.size());
        std::set<std::size_t> touched;
        for (std::size_t h = 0; h < hunks.size(); ++h) {
            ++report.hunks_total;
            const auto& hunk = hunks[h];
            for (std::size_t l = 0; l < hunk.before_count; ++l) {
                auto fi = attributed_function(before_index.functions, hunk.before_start + l);
                if (fi) hunk_pairs[h].insert(pair_of_before[*fi]);
            }
            for (std::size_t l = 0; l < hunk.after_count; ++l) {
                auto fi = attributed_function(after_index.functions, hunk.after_start + l);
                if (fi) hunk_pairs[h].insert(pair_of_after[*fi]);
            }
            if (hunk_pairs[h].empty())
                ++report.hunks_outside_function;
            else
                touched.insert(hunk_pairs[h].begin(), hunk_pairs[h].end());
        }

        std::set<std::size_t> suppressed;
        for (std::size_t pi : touched) {
            const auto& pair = pairs[pi];
            const FunctionRecord* brec =
                pair.before_idx ? &before_index.functions[*pair.before_idx] : nullptr;
            const FunctionRecord* arec =
                pair.after_idx ? &after_index.functions[*pair.after_idx] : nullptr;
            std::string before_src = brec ? slice_lines(before_lines, *brec) : std::string();
            std::string after_src = arec ? slice_lines(after_lines, *arec) : std::string();
            if (core::normalize_for_compare(before_src) == core::normalize_for_compare(after_src)) {
                suppressed.insert(pi);
                ++report.whitespace_only_dropped;
                continue;
            }
            FunctionChange change;
            change.repo_id = commit.repo_id;
            change.sha = commit.sha;
            change.file_path = path;
            change.language = lang;
            change.function_name = brec ? brec->qualified_name : arec->qualified_name;
            change.before_source = std::move(before_src);
            change.after_source = std::move(after_src);
            if (brec) change.before_span = LineSpan{brec->start_line, brec->end_line};
            if (arec) change.after_span = LineSpan{arec->start_line, arec->end_line};
            change.change_id =
                core::content_id({change.repo_id, change.sha, change.file_path,
                                  change.function_name, change.before_source,
                                  change.after_source});
            changes.push_back(std::move(change));
            ++report.changes_emitted;
        }

        for (std::size_t h = 0; h < hunks.size(); ++h) {
            if (hunk_pairs[h].empty()) continue;
            bool all_suppressed = true;
            for (std::size_t pi : hunk_pairs[h])
                if (!suppressed.count(pi)) all_suppressed = false;
            if (all_suppressed)
                ++report.hunks_noop_suppressed;
            else
                ++report.hunks_attributed;
        }
    }
    return changes;
}

core::json change_to_json(const FunctionChange& change) {
    core::json j;
    j["change_id"] = change.change_id;
    j["repo_id"] = change.repo_id;
    j["sha"] = change.sha;
    j["file_path"] = change.file_path;
    j["language"] = language_name(change.language);
    j["function_name"] = change.function_name;
    j["before_source"] = change.before_source;
    j["after_source"] = change.after_source;
    j["before_span"] = span_to_json(change.before_span);
    j["after_span"] = span_to_json(change.after_span);
    return j;
}

FunctionChange change_from_json(const core::json& j, const std::string& where) {
    FunctionChange c;
    c.change_id = core::require_string(j, "change_id", where);
    c.repo_id = core::require_string(j, "repo_id", where);
    c.sha = core::require_string(j, "sha", where);
    c.file_path = core::require_string(j, "file_path", where);
    c.language = language_from_name(core::require_string(j, "language", where));
    c.function_name = core::require_string(j, "function_name", where);
    c.before_source = core::require_string(j, "before_source", where);
    c.after_source = core::require_string(j, "after_source", where);
    c.before_span = span_from_json(core::require_field(j, "before_span", where));
    c.after_span = span_from_json(core::require_field(j, "after_span", where));
    return c;
}

core::json report_to_json(const ExtractReport& report) {
    core::json j;
    j["commits_processed"] = report.commits_processed;
    j["files_seen"] = report.files_seen;
    j["files_unknown_language"] = report.files_unknown_language;
    j["files_skipped_binary"] = report.files_skipped_binary;
    j["files_skipped_unparseable"] = report.files_skipped_unparseable;
    j["files_unreadable"] = report.files_unreadable;
    j["hunks_total"] = report.hunks_total;
    j["hunks_attributed"] = report.hunks_attributed;
    j["hunks_outside_function"] = report.hunks_outside_function;
    j["hunks_noop_suppressed"] = report.hunks_noop_suppressed;
    j["whitespace_only_dropped"] = report.whitespace_only_dropped;
    j["changes_emitted"] = report.changes_emitted;
    core::json skipped = core::json::array();
    for (const auto& s : report.skipped_files)
        skipped.push_back({{"sha", s.sha}, {"path", s.path}, {"reason", s.reason}});
    j["skipped_files"] = skipped;
    return j;
}

std::string assemble_context(const FunctionChange& target,
                             const std::vector<FunctionChange>& commit_changes,
                             std::size_t char_budget, bool* truncated) {
    std::vector<const FunctionChange*> siblings;
    for (const auto& c : commit_changes)
        if (c.change_id != target.change_id) siblings.push_back(&c);
    std::sort(siblings.begin(), siblings.end(),
              [](const FunctionChange* a, const FunctionChange* b) {
                  if (a->file_path != b->file_path) return a->file_path < b->file_path;
                  return a->function_name < b->function_name;
              });
    std::string out;
    bool dropped = false;
    for (const auto* sib : siblings) {
        const std::string& body =
            sib->after_source.empty() ? sib->before_source : sib->after_source;
        std::string block = "File: " + sib->file_path + "\nFunction: " + sib->function_name +
                            "\n" + body;
        std::size_t extra = block.size() + (out.empty() ? 0 : 2);
        if (out.size() + extra > char_budget) {
            dropped = true;
            continue;
        }
        if (!out.empty()) out += "\n\n";
        out += block;
    }
    if (truncated) *truncated = dropped;
    return out;
}

}  // namespace patchsieve::extractor
