// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/curator/curator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "patchsieve/core/shuffle.hpp"
#include "patchsieve/core/text.hpp"

namespace patchsieve::curator {

std::vector<ScoredChange> apply_threshold(const std::vector<ScoredChange>& scored,
                                          int threshold,
                                          scorer::PromptMode mode) {
    int max_score = scorer::max_score_for(mode);
    if (threshold < 1 || threshold > max_score) {
        throw std::invalid_argument("threshold " + std::to_string(threshold) +
                                    " out of range [1, " + std::to_string(max_score) +
                                    "] for mode " + std::string(scorer::prompt_mode_name(mode)));
    }
    std::vector<ScoredChange> kept;
    for (const auto& sc : scored) {
        if (sc.score.score >= threshold) kept.push_back(sc);
    }
    return kept;
}

std::vector<CuratedPair> build_pairs(const std::vector<ScoredChange>& kept,
                                     const TimestampMap& timestamps,
                                     std::vector<extractor::FunctionChange>* added_functions,
                                     CurateDiagnostics* diag) {
    std::vector<CuratedPair> pairs;
    pairs.reserve(kept.size());
    for (const auto& sc : kept) {
        const auto& ch = sc.change;
        if (ch.before_source.empty()) {
            // A function introduced by the fix has no vulnerable version.
            if (added_functions) added_functions->push_back(ch);
            if (diag) diag->added_function_excluded++;
            continue;
        }
        CuratedPair p;
        p.pair_id = ch.change_id;
        p.repo_id = ch.repo_id;
        p.sha = ch.sha;
        p.file_path = ch.file_path;
        p.function_name = ch.function_name;
        p.language = ch.language;
        p.score = sc.score.score;
        p.vulnerable_source = ch.before_source;
        p.benign_source = ch.after_source;
        auto it = timestamps.find({ch.repo_id, ch.sha});
        if (it != timestamps.end()) p.timestamp = it->second;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

std::vector<CuratedPair> deduplicate(const std::vector<CuratedPair>& pairs,
                                     CurateDiagnostics* diag) {
    // Key on the normalized sources of both sides; '\x01' cannot appear in
    // normalized text, so it is a safe separator.
    std::unordered_map<std::string, std::size_t> survivor_by_key;
    std::vector<CuratedPair> out;
    for (const auto& p : pairs) {
        std::string key = core::normalize_for_dedup(p.vulnerable_source);
        key.push_back('\x01');
        key += core::normalize_for_dedup(p.benign_source);
        auto it = survivor_by_key.find(key);
        if (it == survivor_by_key.end()) {
            survivor_by_key.emplace(std::move(key), out.size());
            out.push_back(p);
            continue;
        }
        if (diag) diag->duplicates_collapsed++;
        // Earliest commit wins; ties keep the first occurrence.
        if (p.timestamp < out[it->second].timestamp) out[it->second] = p;
    }
    return out;
}

SplitResult split_pairs(const std::vector<CuratedPair>& pairs,
                        const SplitRatios& ratios,
                        std::uint64_t seed) {
    if (ratios.train <= 0 || ratios.validation <= 0 || ratios.test <= 0) {
        throw std::invalid_argument("split ratios must all be positive");
    }

    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        groups[{pairs[i].repo_id, pairs[i].sha}].push_back(i);
    }
    if (groups.size() < 3) {
        throw std::runtime_error("need at least 3 distinct commits to split, have " +
                                 std::to_string(groups.size()));
    }

    // Map iteration gives the keys in sorted order; the shuffle is the only
    // source of randomness.
    std::vector<std::pair<std::string, std::string>> keys;
    keys.reserve(groups.size());
    for (const auto& [k, v] : groups) keys.push_back(k);
    std::mt19937_64 gen(seed);
    core::fisher_yates(keys, gen);

    double total = ratios.train + ratios.validation + ratios.test;
    std::size_t n = pairs.size();
    auto cut = [&](double fraction) {
        return static_cast<std::size_t>(
            std::floor(static_cast<double>(n) * fraction / total + 1e-9));
    };
    std::size_t train_cut = cut(ratios.train);
    std::size_t val_cut = cut(ratios.train + ratios.validation);

    SplitResult result;
    std::size_t assigned = 0;
    for (const auto& key : keys) {
        const auto& members = groups[key];
        std::vector<CuratedPair>* target;
        if (assigned < train_cut) {
            target = &result.train;
        } else if (assigned < val_cut) {
            target = &result.validation;
        } else {
            target = &result.test;
        }
        for (std::size_t idx : members) target->push_back(pairs[idx]);
        assigned += members.size();
    }
    return result;
}

core::json pair_to_json(const CuratedPair& pair, const std::string& partition) {
    core::json j;
    j["pair_id"] = pair.pair_id;
    j["repo_id"] = pair.repo_id;
    j["sha"] = pair.sha;
    j["file_path"] = pair.file_path;
    j["function_name"] = pair.function_name;
    j["language"] = extractor::language_name(pair.language);
    j["score"] = pair.score;
    j["vulnerable_source"] = pair.vulnerable_source;
    j["benign_source"] = pair.benign_source;
    if (!partition.empty()) j["partition"] = partition;
    return j;
}

CuratedPair pair_from_json(const core::json& j, const std::string& where) {
    CuratedPair p;
    p.pair_id = core::require_string(j, "pair_id", where);
    p.repo_id = core::require_string(j, "repo_id", where);
    p.sha = core::require_string(j, "sha", where);
    p.file_path = core::require_string(j, "file_path", where);
    p.function_name = core::require_string(j, "function_name", where);
    p.language = extractor::language_from_name(core::require_string(j, "language", where));
    p.score = static_cast<int>(core::require_int(j, "score", where));
    p.vulnerable_source = core::require_string(j, "vulnerable_source", where);
    p.benign_source = core::require_string(j, "benign_source", where);
    return p;
}

core::json manifest_to_json(const DatasetManifest& m) {
    core::json j;
    j["threshold"] = m.threshold;
    j["heuristics_enabled"] = m.heuristics_enabled;
    j["pair_count"] = m.pair_count;
    j["function_count"] = m.function_count;
    core::json langs = core::json::object();
    for (const auto& [name, count] : m.per_language_counts) langs[name] = count;
    j["per_language_counts"] = langs;
    j["keyword_set_id"] = m.keyword_set_id;
    j["provider_id"] = m.provider_id;
    j["variant"] = m.variant;
    j["split_seed"] = m.split_seed;
    j["created_at"] = m.created_at;
    return j;
}

DatasetManifest manifest_from_json(const core::json& j, const std::string& where) {
    DatasetManifest m;
    m.threshold = static_cast<int>(core::require_int(j, "threshold", where));
    core::require_field(j, "heuristics_enabled", where);
    m.heuristics_enabled = j.at("heuristics_enabled").get<bool>();
    m.pair_count = static_cast<std::size_t>(core::require_int(j, "pair_count", where));
    m.function_count = static_cast<std::size_t>(core::require_int(j, "function_count", where));
    core::require_field(j, "per_language_counts", where);
    for (const auto& [name, count] : j.at("per_language_counts").items()) {
        m.per_language_counts[name] = count.get<std::size_t>();
    }
    m.keyword_set_id = core::require_string(j, "keyword_set_id", where);
    m.provider_id = core::require_string(j, "provider_id", where);
    m.variant = core::require_string(j, "variant", where);
    core::require_field(j, "split_seed", where);
    m.split_seed = j.at("split_seed").get<std::uint64_t>();
    m.created_at = core::require_string(j, "created_at", where);
    return m;
}

namespace {

void write_partition(const std::filesystem::path& dir,
                     const std::string& name,
                     const std::vector<CuratedPair>& pairs,
                     bool flat) {
    core::JsonlWriter writer((dir / (name + ".jsonl")).string());
    for (const auto& p : pairs) writer.write(pair_to_json(p, name));
    writer.close();
    if (!flat) return;

    core::JsonlWriter fw((dir / (name + "_flat.jsonl")).string());
    for (const auto& p : pairs) {
        for (int label : {1, 0}) {
            core::json j;
            j["pair_id"] = p.pair_id;
            j["label"] = label;
            j["source"] = label == 1 ? p.vulnerable_source : p.benign_source;
            j["language"] = extractor::language_name(p.language);
            j["repo_id"] = p.repo_id;
            j["sha"] = p.sha;
            j["file_path"] = p.file_path;
            j["function_name"] = p.function_name;
            fw.write(j);
        }
    }
    fw.close();
}

}  // namespace

void fill_manifest_counts(DatasetManifest& manifest, const SplitResult& split) {
    manifest.pair_count = 0;
    manifest.per_language_counts.clear();
    for (const auto* part : {&split.train, &split.validation, &split.test}) {
        manifest.pair_count += part->size();
        for (const auto& p : *part) {
            manifest.per_language_counts[std::string(extractor::language_name(p.language))]++;
        }
    }
    manifest.function_count = 2 * manifest.pair_count;
}

std::string current_utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_dataset(const SplitResult& split,
                   DatasetManifest manifest,
                   const std::filesystem::path& dir,
                   bool flat,
                   const std::vector<extractor::FunctionChange>& added_functions) {
    std::filesystem::create_directories(dir);
    write_partition(dir, "train", split.train, flat);
    write_partition(dir, "validation", split.validation, flat);
    write_partition(dir, "test", split.test, flat);

    fill_manifest_counts(manifest, split);
    if (manifest.created_at.empty()) manifest.created_at = current_utc_timestamp();
    core::write_file((dir / "manifest.json").string(),
                     manifest_to_json(manifest).dump(2) + "\n");

    core::JsonlWriter aw((dir / "added_functions.jsonl").string());
    for (const auto& ch : added_functions) aw.write(extractor::change_to_json(ch));
    aw.close();
}

std::vector<CuratedPair> read_pairs(const std::filesystem::path& path) {
    std::vector<CuratedPair> pairs;
    core::for_each_jsonl(path.string(), [&](const core::json& j, std::size_t line) {
        pairs.push_back(pair_from_json(j, path.string() + ":" + std::to_string(line)));
    });
    return pairs;
}

}  // namespace patchsieve::curator
