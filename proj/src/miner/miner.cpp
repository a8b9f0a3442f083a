// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/miner/miner.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

#include "patchsieve/core/text.hpp"
#include "patchsieve/miner/git_repo.hpp"

namespace patchsieve::miner {

std::optional<std::vector<std::string>> is_vfc(const std::string& message, const KeywordSet& keywords) {
    std::string lower = lower_ascii(message);
    std::vector<std::string> matched;
    for (const auto& kw : keywords.keywords) {
        if (contains_ci(lower, kw)) matched.push_back(kw);
    }
    if (matched.empty()) return std::nullopt;
    return matched;
}

namespace {

void mine_one_source(const RepoSource& source, const KeywordSet& keywords,
                     const MineOptions& options, std::vector<VfcMatch>& matches,
                     SourceDiagnostics& diag) {
    diag.repo_id = source.id;
    std::string repo_path = resolve_repository(source, options.cache_dir);
    EnumerationResult enumeration = enumerate_repository(repo_path, source.default_branch, options.limit);
    diag.commits_seen = enumeration.commits_seen;
    diag.merges_skipped = enumeration.merges_skipped;
    diag.empty_skipped = enumeration.empty_skipped;
    diag.corrupt_skipped = enumeration.corrupt_skipped;

    for (auto& commit : enumeration.commits) {
        commit.repo_id = source.id;
        auto matched = is_vfc(commit.message, keywords);
        if (!matched) continue;
        matches.push_back(VfcMatch{std::move(commit), std::move(*matched), keywords.id});
    }
    diag.vfc_count = matches.size();
    diag.succeeded = true;
}

}  // namespace

std::vector<VfcMatch> mine(const std::vector<RepoSource>& sources, const KeywordSet& keywords,
                           const MineOptions& options, MineReport& report) {
    if (sources.empty()) throw std::runtime_error("mine: no sources configured");
    if (keywords.keywords.empty()) throw std::runtime_error("mine: keyword set is empty");

    {
        std::set<std::string> ids;
        for (const auto& s : sources) {
            if (s.location.empty())
                throw std::runtime_error("mine: source '" + s.id + "' has an empty location");
            if (!ids.insert(s.id).second)
                throw std::runtime_error("mine: duplicate source id '" + s.id + "'");
        }
    }

    std::vector<std::vector<VfcMatch>> per_source(sources.size());
    report.sources.assign(sources.size(), SourceDiagnostics{});

    std::size_t workers = std::max<std::size_t>(1, std::min(options.parallelism, sources.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= sources.size()) break;
            try {
                mine_one_source(sources[i], keywords, options, per_source[i], report.sources[i]);
            } catch (const std::exception& e) {
                report.sources[i].repo_id = sources[i].id;
                report.sources[i].succeeded = false;
                report.sources[i].error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    if (report.failed_sources() == sources.size()) {
        std::string msg = "mine: all sources failed:";
        for (const auto& s : report.sources) msg += "\n  " + s.repo_id + ": " + s.error;
        throw std::runtime_error(msg);
    }

    std::vector<VfcMatch> all;
    for (auto& v : per_source)
        for (auto& m : v) all.push_back(std::move(m));
    std::stable_sort(all.begin(), all.end(), [](const VfcMatch& a, const VfcMatch& b) {
        if (a.commit.repo_id != b.commit.repo_id) return a.commit.repo_id < b.commit.repo_id;
        if (a.commit.timestamp != b.commit.timestamp) return a.commit.timestamp > b.commit.timestamp;
        return a.commit.sha < b.commit.sha;
    });
    return all;
}

json vfc_to_json(const VfcMatch& match) {
    json j;
    j["repo_id"] = match.commit.repo_id;
    j["sha"] = match.commit.sha;
    j["message"] = match.commit.message;
    j["parent_sha"] = match.commit.parent_sha;
    j["timestamp"] = match.commit.timestamp;
    j["changed_paths"] = match.commit.changed_paths;
    j["matched_keywords"] = match.matched_keywords;
    j["keyword_set_id"] = match.keyword_set_id;
    return j;
}

VfcMatch vfc_from_json(const json& j, const std::string& path, size_t line) {
    VfcMatch m;
    m.commit.repo_id = require_string(j, "repo_id", path, line);
    m.commit.sha = require_string(j, "sha", path, line);
    m.commit.message = require_string(j, "message", path, line);
    m.commit.parent_sha = require_string(j, "parent_sha", path, line);
    m.commit.timestamp = require_int(j, "timestamp", path, line);
    for (const auto& p : require_field(j, "changed_paths", path, line))
        m.commit.changed_paths.push_back(p.get<std::string>());
    for (const auto& k : require_field(j, "matched_keywords", path, line))
        m.matched_keywords.push_back(k.get<std::string>());
    m.keyword_set_id = require_string(j, "keyword_set_id", path, line);
    return m;
}

std::vector<RepoSource> load_sources(const std::string& path) {
    std::vector<RepoSource> sources;
    for_each_jsonl(path, [&](const json& j, size_t line) {
        RepoSource s;
        s.id = require_string(j, "id", path, line);
        s.location = require_string(j, "location", path, line);
        if (j.contains("default_branch") && !j["default_branch"].is_null())
            s.default_branch = j["default_branch"].get<std::string>();
        sources.push_back(std::move(s));
    });
    return sources;
}

}  // namespace patchsieve::miner
