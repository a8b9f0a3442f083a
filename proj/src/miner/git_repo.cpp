// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/miner/git_repo.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>

#include "patchsieve/core/subprocess.hpp"
#include "patchsieve/core/text.hpp"

namespace fs = std::filesystem;

namespace patchsieve::miner {

namespace {

constexpr char kRecordSep = '\x01';
constexpr char kFieldSep = '\x1f';
constexpr char kBodyEnd = '\x02';

bool is_full_sha(const std::string& s) {
    if (s.size() != 40) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) || (c >= 'a' && c <= 'f');
    });
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    return s;
}

}  // namespace

bool is_remote_location(const std::string& location) {
    if (location.find("://") != std::string::npos) return true;
    // scp-like syntax: user@host:path
    size_t at = location.find('@');
    size_t colon = location.find(':');
    return at != std::string::npos && colon != std::string::npos && colon > at;
}

std::string resolve_repository(const RepoSource& source, const std::string& cache_dir) {
    if (!is_remote_location(source.location)) {
        if (!fs::exists(source.location))
            throw GitError("repository path does not exist: " + source.location);
        return source.location;
    }
    if (cache_dir.empty())
        throw GitError("remote repository requires a cache directory: " + source.location);
    fs::create_directories(cache_dir);
    fs::path target = fs::path(cache_dir) / (source.id + ".git");
    if (fs::exists(target)) return target.string();  // reuse earlier clone

    auto res = run_command({"git", "clone", "--quiet", "--bare", source.location, target.string()});
    if (!res.ok())
        throw GitError("clone failed for " + source.location + ": " + rstrip(res.err));
    return target.string();
}

EnumerationResult enumerate_repository(const std::string& repo_path, const std::string& branch,
                                       std::size_t limit) {
    std::vector<std::string> argv = {
        "git", "-C", repo_path, "-c", "core.quotepath=false",
        "log",  "--first-parent", "--name-only",
        "--format=%x01%H%x1f%P%x1f%ct%x1f%B%x02",
    };
    if (limit > 0) argv.push_back("-n" + std::to_string(limit));
    argv.push_back(branch.empty() ? "HEAD" : branch);

    auto res = run_command(argv);
    if (!res.ok()) {
        std::string err = rstrip(res.err);
        // An empty repository has no HEAD to walk; that is an empty stream,
        // not an error.
        if (err.find("does not have any commits") != std::string::npos ||
            err.find("unknown revision") != std::string::npos ||
            err.find("bad default revision") != std::string::npos)
            return {};
        throw GitError("git log failed in " + repo_path + ": " + err);
    }

    EnumerationResult result;
    size_t pos = 0;
    const std::string& out = res.out;
    while (true) {
        size_t rec_start = out.find(kRecordSep, pos);
        if (rec_start == std::string::npos) break;
        size_t rec_end = out.find(kRecordSep, rec_start + 1);
        std::string record = out.substr(rec_start + 1, (rec_end == std::string::npos ? out.size() : rec_end) - rec_start - 1);
        pos = rec_end == std::string::npos ? out.size() : rec_end;

        ++result.commits_seen;
        size_t body_end = record.find(kBodyEnd);
        if (body_end == std::string::npos) {
            ++result.corrupt_skipped;
            continue;
        }
        auto fields = split_on(record.substr(0, body_end), kFieldSep);
        if (fields.size() != 4 || !is_full_sha(fields[0])) {
            ++result.corrupt_skipped;
            continue;
        }

        std::vector<std::string> parents;
        for (const auto& p : split_on(fields[1], ' '))
            if (!p.empty()) parents.push_back(p);
        if (parents.size() > 1) {
            ++result.merges_skipped;
            continue;
        }

        std::int64_t ts = 0;
        try {
            ts = std::stoll(fields[2]);
        } catch (...) {
            ++result.corrupt_skipped;
            continue;
        }

        CommitRecord commit;
        commit.sha = fields[0];
        commit.parent_sha = parents.empty() ? "" : parents[0];
        commit.timestamp = ts;
        commit.message = rstrip(fields[3]);

        for (const auto& line : split_lines(record.substr(body_end + 1))) {
            if (!line.empty()) commit.changed_paths.push_back(line);
        }
        if (commit.changed_paths.empty()) {
            ++result.empty_skipped;
            continue;
        }
        result.commits.push_back(std::move(commit));
        if (rec_end == std::string::npos) break;
    }
    return result;
}

std::optional<std::string> read_blob(const std::string& repo_path, const std::string& rev,
                                     const std::string& path) {
    auto res = run_command({"git", "-C", repo_path, "-c", "core.quotepath=false", "show",
                            rev + ":" + path});
    if (!res.ok()) return std::nullopt;
    return res.out;
}

}  // namespace patchsieve::miner
