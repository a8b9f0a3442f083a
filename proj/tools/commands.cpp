// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/curator/curator.hpp"
#include "patchsieve/miner/git_repo.hpp"
#include "patchsieve/miner/keywords.hpp"
#include "patchsieve/miner/miner.hpp"
#include "patchsieve/scorer/provider.hpp"
#include "patchsieve/scorer/scorer.hpp"
#include "patchsieve/testfilter/filter.hpp"

namespace fs = std::filesystem;

namespace patchsieve::cli {

namespace {

// One JSON line on stderr so callers can parse failures mechanically.
int fail(const std::string& stage, const std::string& message,
         const std::string& resume_hint = "") {
    core::json err;
    err["stage"] = stage;
    err["error"] = message;
    if (!resume_hint.empty()) err["resume"] = resume_hint;
    std::cerr << err.dump() << "\n";
    return 1;
}

template <typename Fn>
int run_stage(const std::string& stage, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        return fail(stage, e.what());
    }
}

void require_file(const std::string& stage_flag, const std::string& path) {
    if (path.empty()) throw std::runtime_error(stage_flag + " is required");
    if (!fs::exists(path)) throw std::runtime_error(stage_flag + " does not exist: " + path);
}

// run_config.json accumulates one entry per executed stage, so the file in
// an output directory always describes everything that produced it. Re-runs
// of a stage overwrite the stage's entry in place.
void record_stage_config(const std::string& out_dir, const std::string& stage,
                         const core::json& config) {
    fs::path p = fs::path(out_dir) / "run_config.json";
    core::json doc = core::json::object();
    if (fs::exists(p)) doc = core::json::parse(core::read_file(p.string()));
    doc[stage] = config;
    core::write_file(p.string(), doc.dump(2) + "\n");
}

std::vector<extractor::FunctionChange> read_changes(const std::string& path) {
    std::vector<extractor::FunctionChange> changes;
    core::for_each_jsonl(path, [&](const core::json& j, std::size_t line) {
        changes.push_back(
            extractor::change_from_json(j, path + ":" + std::to_string(line)));
    });
    return changes;
}

std::vector<miner::VfcMatch> read_manifest(const std::string& path) {
    std::vector<miner::VfcMatch> vfcs;
    core::for_each_jsonl(path, [&](const core::json& j, std::size_t line) {
        vfcs.push_back(miner::vfc_from_json(j, path, line));
    });
    return vfcs;
}

std::vector<scorer::ScoreRecord> read_scores(const std::string& path) {
    std::vector<scorer::ScoreRecord> scores;
    core::for_each_jsonl(path, [&](const core::json& j, std::size_t line) {
        scores.push_back(scorer::score_from_json(j, path + ":" + std::to_string(line)));
    });
    return scores;
}

bool is_anonymous(const std::string& function_name) {
    return function_name.find("<anon:") != std::string::npos;
}

std::unique_ptr<scorer::Provider> make_provider(const std::string& kind,
                                                const std::string& base_url,
                                                const std::string& model,
                                                scorer::PromptMode mode) {
    if (kind == "stub") {
        return std::make_unique<scorer::StubProvider>(scorer::max_score_for(mode));
    }
    if (kind == "http") {
        if (base_url.empty() || model.empty())
            throw std::runtime_error("http provider needs --base-url and --model");
        scorer::HttpProviderConfig config;
        config.base_url = base_url;
        config.model = model;
        config.id = "http:" + model;
        return std::make_unique<scorer::HttpProvider>(config);
    }
    throw std::runtime_error("unknown provider '" + kind + "', expected stub or http");
}

}  // namespace

int cmd_mine(const MineArgs& args) {
    return run_stage("mine", [&] {
        require_file("--sources", args.sources_path);
        if (!args.keywords_path.empty()) require_file("--keywords", args.keywords_path);
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        fs::create_directories(args.out_dir);

        miner::KeywordSet keywords = args.keywords_path.empty()
                                         ? miner::default_keyword_set()
                                         : miner::load_keyword_set(args.keywords_path);
        auto sources = miner::load_sources(args.sources_path);

        miner::MineOptions options;
        options.cache_dir = args.cache_dir;
        options.limit = args.limit;
        options.parallelism = args.parallelism;
        miner::MineReport report;
        auto matches = miner::mine(sources, keywords, options, report);

        fs::path out(args.out_dir);
        core::JsonlWriter manifest((out / "vfc_manifest.jsonl").string());
        for (const auto& m : matches) manifest.write(miner::vfc_to_json(m));
        manifest.close();

        core::json rdoc;
        rdoc["keyword_set_id"] = keywords.id;
        rdoc["vfc_count"] = matches.size();
        core::json sources_json = core::json::array();
        for (const auto& s : report.sources) {
            core::json sj;
            sj["repo_id"] = s.repo_id;
            sj["succeeded"] = s.succeeded;
            if (!s.succeeded) sj["error"] = s.error;
            sj["commits_seen"] = s.commits_seen;
            sj["merges_skipped"] = s.merges_skipped;
            sj["empty_skipped"] = s.empty_skipped;
            sj["corrupt_skipped"] = s.corrupt_skipped;
            sj["vfc_count"] = s.vfc_count;
            sources_json.push_back(sj);
        }
        rdoc["sources"] = sources_json;
        rdoc["failed_sources"] = report.failed_sources();
        core::write_file((out / "mine_report.json").string(), rdoc.dump(2) + "\n");

        // Resolved local paths, so later stages can read blobs without
        // re-learning where each repository lives. Resolution is cached, so
        // this does not clone twice.
        core::json repo_paths = core::json::object();
        for (const auto& s : sources) {
            try {
                repo_paths[s.id] = miner::resolve_repository(s, args.cache_dir);
            } catch (const miner::GitError&) {
                // Failed sources are already reported above.
            }
        }
        core::write_file((out / "repo_paths.json").string(), repo_paths.dump(2) + "\n");

        core::json config;
        config["sources"] = args.sources_path;
        config["keywords"] = args.keywords_path;
        config["keyword_set_id"] = keywords.id;
        config["cache_dir"] = args.cache_dir;
        config["limit"] = args.limit;
        config["parallelism"] = args.parallelism;
        record_stage_config(args.out_dir, "mine", config);
    });
}

int cmd_extract(const ExtractArgs& args) {
    return run_stage("extract", [&] {
        require_file("--manifest", args.manifest_path);
        require_file("--repos", args.repos_path);
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        fs::create_directories(args.out_dir);

        core::json repo_paths = core::json::parse(core::read_file(args.repos_path));
        auto vfcs = read_manifest(args.manifest_path);

        extractor::ExtractReport report;
        fs::path out(args.out_dir);
        core::JsonlWriter changes_out((out / "changes.jsonl").string());
        for (const auto& vfc : vfcs) {
            const std::string& repo_id = vfc.commit.repo_id;
            if (!repo_paths.contains(repo_id))
                throw std::runtime_error("no repository path recorded for '" + repo_id +
                                         "' in " + args.repos_path);
            auto changes = extractor::extract_commit(
                repo_paths[repo_id].get<std::string>(), vfc, report);
            for (const auto& c : changes) changes_out.write(extractor::change_to_json(c));
        }
        changes_out.close();
        core::write_file((out / "extract_diagnostics.json").string(),
                         extractor::report_to_json(report).dump(2) + "\n");

        core::json config;
        config["manifest"] = args.manifest_path;
        config["repos"] = args.repos_path;
        record_stage_config(args.out_dir, "extract", config);
    });
}

int cmd_filter(const FilterArgs& args) {
    return run_stage("filter", [&] {
        require_file("--changes", args.changes_path);
        if (!args.patterns_path.empty()) require_file("--patterns", args.patterns_path);
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        fs::create_directories(args.out_dir);

        testfilter::PatternLibrary library =
            args.patterns_path.empty() ? testfilter::default_pattern_library()
                                       : testfilter::load_pattern_library(args.patterns_path);
        testfilter::TestFilter filter(library);
        auto changes = read_changes(args.changes_path);
        auto [kept, decisions] = filter.apply(changes);

        fs::path out(args.out_dir);
        core::JsonlWriter kept_out((out / "changes_kept.jsonl").string());
        for (const auto& c : kept) kept_out.write(extractor::change_to_json(c));
        kept_out.close();
        core::JsonlWriter decisions_out((out / "filter_decisions.jsonl").string());
        for (const auto& d : decisions) decisions_out.write(testfilter::decision_to_json(d));
        decisions_out.close();

        std::size_t test_file = 0, test_function = 0;
        for (const auto& d : decisions) {
            if (d.reason == testfilter::FilterReason::TestFile) test_file++;
            if (d.reason == testfilter::FilterReason::TestFunction) test_function++;
        }
        core::json rdoc;
        rdoc["input"] = changes.size();
        rdoc["kept"] = kept.size();
        rdoc["dropped_test_file"] = test_file;
        rdoc["dropped_test_function"] = test_function;
        core::write_file((out / "filter_report.json").string(), rdoc.dump(2) + "\n");

        core::json config;
        config["changes"] = args.changes_path;
        config["patterns"] =
            args.patterns_path.empty() ? "embedded-default" : args.patterns_path;
        record_stage_config(args.out_dir, "filter", config);
    });
}

int cmd_score(const ScoreArgs& args) {
    return run_stage("score", [&] {
        require_file("--changes", args.changes_path);
        require_file("--manifest", args.manifest_path);
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        fs::create_directories(args.out_dir);

        scorer::PromptVariant variant = scorer::variant_from_id(args.variant);
        auto all_changes = read_changes(args.changes_path);

        // Nameless lambdas and blocks score poorly as standalone units, so
        // they stay out of the batch unless explicitly requested.
        std::vector<extractor::FunctionChange> changes;
        std::size_t anonymous_skipped = 0;
        for (auto& c : all_changes) {
            if (!args.include_anonymous && is_anonymous(c.function_name)) {
                anonymous_skipped++;
                continue;
            }
            changes.push_back(std::move(c));
        }

        scorer::CommitMessageMap messages;
        for (const auto& vfc : read_manifest(args.manifest_path)) {
            messages[{vfc.commit.repo_id, vfc.commit.sha}] = vfc.commit.message;
        }

        auto provider =
            make_provider(args.provider, args.base_url, args.model, variant.output_mode);

        scorer::ScoreOptions opts;
        opts.variant = variant;
        opts.parallelism = args.parallelism;
        opts.max_attempts = args.max_attempts;
        opts.backoff = std::chrono::milliseconds(args.backoff_ms);
        opts.rate_per_second = args.rate_per_second;
        opts.runs = args.runs;
        opts.context_budget = args.context_budget;
        fs::path out(args.out_dir);
        opts.checkpoint_path = out / "scores.checkpoint.jsonl";

        auto result = scorer::score_changes(*provider, changes, messages, opts);

        core::JsonlWriter scores_out((out / "scores.jsonl").string());
        for (const auto& r : result.records) scores_out.write(scorer::score_to_json(r));
        scores_out.close();

        core::json rdoc;
        rdoc["scored"] = result.records.size();
        rdoc["provider_id"] = provider->id();
        rdoc["variant"] = args.variant;
        rdoc["provider_calls"] = result.provider_calls;
        rdoc["resumed_from_checkpoint"] = result.resumed_from_checkpoint;
        rdoc["anonymous_skipped"] = anonymous_skipped;
        core::json failures = core::json::array();
        for (const auto& f : result.failures) {
            failures.push_back({{"change_id", f.change_id}, {"error", f.error}});
        }
        rdoc["failures"] = failures;
        core::write_file((out / "score_report.json").string(), rdoc.dump(2) + "\n");

        core::json config;
        config["changes"] = args.changes_path;
        config["manifest"] = args.manifest_path;
        config["provider"] = args.provider;
        config["base_url"] = args.base_url;
        config["model"] = args.model;
        config["variant"] = args.variant;
        config["parallelism"] = args.parallelism;
        config["max_attempts"] = args.max_attempts;
        config["backoff_ms"] = args.backoff_ms;
        config["rate_per_second"] = args.rate_per_second;
        config["runs"] = args.runs;
        config["context_budget"] = args.context_budget;
        config["include_anonymous"] = args.include_anonymous;
        record_stage_config(args.out_dir, "score", config);
    });
}

int cmd_curate(const CurateArgs& args) {
    return run_stage("curate", [&] {
        require_file("--changes", args.changes_path);
        require_file("--scores", args.scores_path);
        require_file("--manifest", args.manifest_path);
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        fs::create_directories(args.out_dir);

        auto changes = read_changes(args.changes_path);
        auto scores = read_scores(args.scores_path);
        auto vfcs = read_manifest(args.manifest_path);

        std::map<std::string, const extractor::FunctionChange*> by_id;
        for (const auto& c : changes) by_id[c.change_id] = &c;

        std::string provider_id, variant;
        std::vector<curator::ScoredChange> scored;
        for (const auto& s : scores) {
            if (provider_id.empty()) {
                provider_id = s.provider_id;
                variant = s.variant;
            } else if (s.provider_id != provider_id || s.variant != variant) {
                throw std::runtime_error("scores mix providers or variants: " + provider_id +
                                         "/" + variant + " vs " + s.provider_id + "/" +
                                         s.variant);
            }
            auto it = by_id.find(s.change_id);
            if (it == by_id.end())
                throw std::runtime_error("score for unknown change " + s.change_id);
            scored.push_back({*it->second, s});
        }
        if (scored.empty()) throw std::runtime_error("no scores to curate");

        scorer::PromptMode mode = scorer::variant_from_id(variant).output_mode;
        curator::CurateDiagnostics diag;
        diag.scored_input = scored.size();
        auto kept = curator::apply_threshold(scored, args.threshold, mode);
        diag.below_threshold = scored.size() - kept.size();

        curator::TimestampMap timestamps;
        std::string keyword_set_id;
        for (const auto& vfc : vfcs) {
            timestamps[{vfc.commit.repo_id, vfc.commit.sha}] = vfc.commit.timestamp;
            if (keyword_set_id.empty()) keyword_set_id = vfc.keyword_set_id;
        }

        std::vector<extractor::FunctionChange> added_functions;
        auto pairs = curator::build_pairs(kept, timestamps, &added_functions, &diag);
        auto unique_pairs = curator::deduplicate(pairs, &diag);

        curator::SplitRatios ratios;
        ratios.train = args.ratio_train;
        ratios.validation = args.ratio_validation;
        ratios.test = args.ratio_test;
        auto split = curator::split_pairs(unique_pairs, ratios, args.split_seed);

        curator::DatasetManifest manifest;
        manifest.threshold = args.threshold;
        manifest.heuristics_enabled = args.heuristics_enabled;
        manifest.keyword_set_id = keyword_set_id;
        manifest.provider_id = provider_id;
        manifest.variant = variant;
        manifest.split_seed = args.split_seed;
        fs::path dataset_dir = fs::path(args.out_dir) / "dataset";
        curator::write_dataset(split, manifest, dataset_dir, args.flat, added_functions);

        core::json rdoc;
        rdoc["scored_input"] = diag.scored_input;
        rdoc["below_threshold"] = diag.below_threshold;
        rdoc["added_function_excluded"] = diag.added_function_excluded;
        rdoc["duplicates_collapsed"] = diag.duplicates_collapsed;
        rdoc["pairs"] = unique_pairs.size();
        rdoc["train"] = split.train.size();
        rdoc["validation"] = split.validation.size();
        rdoc["test"] = split.test.size();
        core::write_file((fs::path(args.out_dir) / "curate_report.json").string(),
                         rdoc.dump(2) + "\n");

        core::json config;
        config["changes"] = args.changes_path;
        config["scores"] = args.scores_path;
        config["manifest"] = args.manifest_path;
        config["threshold"] = args.threshold;
        config["split_seed"] = args.split_seed;
        config["ratios"] = {args.ratio_train, args.ratio_validation, args.ratio_test};
        config["flat"] = args.flat;
        config["heuristics_enabled"] = args.heuristics_enabled;
        record_stage_config(args.out_dir, "curate", config);
    });
}

int cmd_evaluate(const EvaluateArgs& args) {
    return run_stage("evaluate", [&] {
        if (args.out_dir.empty()) throw std::runtime_error("--out-dir is required");
        if (args.scores_path.empty() && args.labels_path.empty() && args.sample_from.empty())
            throw std::runtime_error(
                "nothing to evaluate: pass --labels, --scores, or --sample-from");
        fs::create_directories(args.out_dir);
        fs::path out(args.out_dir);

        core::json rdoc;
        rdoc["cut"] = args.cut;

        std::vector<evaluator::GroundTruthLabel> labels;
        std::vector<evaluator::GroundTruthLabel> adjudicated;
        if (!args.labels_path.empty()) {
            require_file("--labels", args.labels_path);
            core::for_each_jsonl(args.labels_path, [&](const core::json& j, std::size_t line) {
                labels.push_back(evaluator::label_from_json(
                    j, args.labels_path + ":" + std::to_string(line)));
            });
            if (labels.empty()) throw std::runtime_error("no labels in " + args.labels_path);
            adjudicated = evaluator::adjudicate(labels);
            rdoc["label_count"] = labels.size();
            rdoc["labeled_changes"] = adjudicated.size();
            rdoc["correctness"] = evaluator::compute_correctness(adjudicated);
            rdoc["taxonomy"] = evaluator::taxonomy_to_json(evaluator::taxonomy_report(adjudicated));

            // Agreement is computed between the two busiest annotators over
            // the changes they both labeled; adjudication records stay out.
            std::map<std::string, std::map<std::string, bool>> by_annotator;
            for (const auto& l : labels) {
                if (!l.adjudicated) by_annotator[l.annotator_id][l.change_id] = l.is_vuln_fix;
            }
            std::vector<std::pair<std::size_t, std::string>> ranked;
            for (const auto& [id, m] : by_annotator) ranked.push_back({m.size(), id});
            std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
                return a.first != b.first ? a.first > b.first : a.second < b.second;
            });
            if (ranked.size() >= 2) {
                const auto& first = by_annotator[ranked[0].second];
                const auto& second = by_annotator[ranked[1].second];
                std::vector<bool> va, vb;
                for (const auto& [id, value] : first) {
                    auto it = second.find(id);
                    if (it == second.end()) continue;
                    va.push_back(value);
                    vb.push_back(it->second);
                }
                if (!va.empty()) {
                    auto kappa = evaluator::cohen_kappa(va, vb);
                    core::json kj = evaluator::kappa_to_json(kappa);
                    kj["annotators"] = {ranked[0].second, ranked[1].second};
                    kj["n"] = va.size();
                    rdoc["kappa"] = kj;
                }
            }
        }

        if (!args.scores_path.empty()) {
            require_file("--scores", args.scores_path);
            if (args.labels_path.empty())
                throw std::runtime_error("--scores needs --labels to compare against");
            auto scores = read_scores(args.scores_path);
            std::map<std::string, bool> label_map;
            for (const auto& l : adjudicated) label_map[l.change_id] = l.is_vuln_fix;
            // Scores outside the labeled set carry no signal here; restrict
            // predictions to the audited changes.
            std::vector<scorer::ScoreRecord> overlapping;
            for (const auto& s : scores) {
                if (label_map.count(s.change_id)) overlapping.push_back(s);
            }
            auto predictions = evaluator::binarize_scores(overlapping, args.cut);
            auto metrics = evaluator::compute_metrics(predictions, label_map);
            rdoc["metrics"] = evaluator::metrics_to_json(metrics);
        }

        if (!args.sample_from.empty()) {
            require_file("--sample-from", args.sample_from);
            if (args.sample_n == 0)
                throw std::runtime_error("--sample-n must be positive with --sample-from");
            std::vector<std::string> ids;
            core::for_each_jsonl(args.sample_from, [&](const core::json& j, std::size_t line) {
                std::string where = args.sample_from + ":" + std::to_string(line);
                if (j.contains("change_id")) {
                    ids.push_back(j.at("change_id").get<std::string>());
                } else if (j.contains("pair_id")) {
                    ids.push_back(j.at("pair_id").get<std::string>());
                } else {
                    throw core::SchemaError(where + ": no change_id or pair_id field");
                }
            });
            auto sample = evaluator::sample_for_audit(ids, args.sample_n, args.sample_seed);
            core::write_file((out / "audit_sample.json").string(),
                             evaluator::audit_sample_to_json(sample).dump(2) + "\n");
            rdoc["audit_sample"] = {{"population", sample.population},
                                    {"sample_size", sample.change_ids.size()},
                                    {"margin_of_error_95", sample.moe_95}};
        }

        core::write_file((out / "evaluation_report.json").string(), rdoc.dump(2) + "\n");

        core::json config;
        config["scores"] = args.scores_path;
        config["labels"] = args.labels_path;
        config["cut"] = args.cut;
        config["sample_from"] = args.sample_from;
        config["sample_n"] = args.sample_n;
        config["sample_seed"] = args.sample_seed;
        record_stage_config(args.out_dir, "evaluate", config);
    });
}

int cmd_run(const RunArgs& args) {
    const std::string resume_hint =
        "fix the cause and re-run the same command with the same --out-dir; "
        "finished stages are deterministic and scoring resumes from its checkpoint";

    MineArgs mine;
    mine.sources_path = args.sources_path;
    mine.keywords_path = args.keywords_path;
    mine.cache_dir = args.cache_dir;
    mine.out_dir = args.out_dir;
    mine.limit = args.limit;
    mine.parallelism = args.mine_parallelism;
    if (cmd_mine(mine) != 0) return fail("run", "mine stage failed", resume_hint);

    fs::path out(args.out_dir);
    ExtractArgs extract;
    extract.manifest_path = (out / "vfc_manifest.jsonl").string();
    extract.repos_path = (out / "repo_paths.json").string();
    extract.out_dir = args.out_dir;
    if (cmd_extract(extract) != 0) return fail("run", "extract stage failed", resume_hint);

    std::string score_input = (out / "changes.jsonl").string();
    if (!args.no_heuristics) {
        FilterArgs filter;
        filter.changes_path = (out / "changes.jsonl").string();
        filter.patterns_path = args.patterns_path;
        filter.out_dir = args.out_dir;
        if (cmd_filter(filter) != 0) return fail("run", "filter stage failed", resume_hint);
        score_input = (out / "changes_kept.jsonl").string();
    }

    ScoreArgs score;
    score.changes_path = score_input;
    score.manifest_path = extract.manifest_path;
    score.out_dir = args.out_dir;
    score.provider = args.provider;
    score.base_url = args.base_url;
    score.model = args.model;
    score.variant = args.variant;
    score.parallelism = args.score_parallelism;
    score.max_attempts = args.max_attempts;
    score.backoff_ms = args.backoff_ms;
    score.rate_per_second = args.rate_per_second;
    score.runs = args.runs;
    score.context_budget = args.context_budget;
    score.include_anonymous = args.include_anonymous;
    if (cmd_score(score) != 0) return fail("run", "score stage failed", resume_hint);

    CurateArgs curate;
    curate.changes_path = score_input;
    curate.scores_path = (out / "scores.jsonl").string();
    curate.manifest_path = extract.manifest_path;
    curate.out_dir = args.out_dir;
    curate.threshold = args.threshold;
    curate.split_seed = args.split_seed;
    curate.ratio_train = args.ratio_train;
    curate.ratio_validation = args.ratio_validation;
    curate.ratio_test = args.ratio_test;
    curate.flat = args.flat;
    curate.heuristics_enabled = !args.no_heuristics;
    if (cmd_curate(curate) != 0) return fail("run", "curate stage failed", resume_hint);

    return 0;
}

}  // namespace patchsieve::cli
