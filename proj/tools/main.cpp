// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = patchsieve::cli;

int main(int argc, char** argv) {
    CLI::App app{"patchsieve: mine, extract, filter, score, and curate "
                 "vulnerability-fix datasets from git history"};
    app.require_subcommand(1);

    cli::MineArgs mine;
    auto* mine_cmd = app.add_subcommand("mine", "Find fix commits by keyword");
    mine_cmd->add_option("--sources", mine.sources_path, "JSONL list of repositories")
        ->required();
    mine_cmd->add_option("--keywords", mine.keywords_path,
                         "Keyword file (default: embedded set)");
    mine_cmd->add_option("--cache-dir", mine.cache_dir, "Clone cache for remote sources");
    mine_cmd->add_option("--out-dir", mine.out_dir, "Output directory")->required();
    mine_cmd->add_option("--limit", mine.limit, "Max commits per repository");
    mine_cmd->add_option("--parallelism", mine.parallelism, "Concurrent repositories");

    cli::ExtractArgs extract;
    auto* extract_cmd =
        app.add_subcommand("extract", "Extract changed functions from fix commits");
    extract_cmd->add_option("--manifest", extract.manifest_path, "vfc_manifest.jsonl")
        ->required();
    extract_cmd->add_option("--repos", extract.repos_path, "repo_paths.json")->required();
    extract_cmd->add_option("--out-dir", extract.out_dir, "Output directory")->required();

    cli::FilterArgs filter;
    auto* filter_cmd = app.add_subcommand("filter", "Drop test code from changes");
    filter_cmd->add_option("--changes", filter.changes_path, "changes.jsonl")->required();
    filter_cmd->add_option("--patterns", filter.patterns_path,
                           "Pattern library JSON (default: embedded set)");
    filter_cmd->add_option("--out-dir", filter.out_dir, "Output directory")->required();

    cli::ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Score changes with a model provider");
    score_cmd->add_option("--changes", score.changes_path, "Changes JSONL")->required();
    score_cmd->add_option("--manifest", score.manifest_path, "vfc_manifest.jsonl")
        ->required();
    score_cmd->add_option("--out-dir", score.out_dir, "Output directory")->required();
    score_cmd->add_option("--provider", score.provider, "stub or http");
    score_cmd->add_option("--base-url", score.base_url, "HTTP provider endpoint");
    score_cmd->add_option("--model", score.model, "HTTP provider model name");
    score_cmd->add_option("--variant", score.variant,
                          "Prompt variant id, e.g. range04, range04-nomsg-noctx, binary");
    score_cmd->add_option("--parallelism", score.parallelism, "Concurrent provider calls");
    score_cmd->add_option("--max-attempts", score.max_attempts, "Attempts per change");
    score_cmd->add_option("--backoff-ms", score.backoff_ms, "Initial retry backoff");
    score_cmd->add_option("--rate", score.rate_per_second, "Provider calls per second");
    score_cmd->add_option("--runs", score.runs, "Majority-vote runs per change");
    score_cmd->add_option("--context-budget", score.context_budget,
                          "Sibling context budget in characters");
    score_cmd->add_flag("--include-anonymous", score.include_anonymous,
                        "Score nameless functions too");

    cli::CurateArgs curate;
    auto* curate_cmd = app.add_subcommand("curate", "Build the pair dataset");
    curate_cmd->add_option("--changes", curate.changes_path, "Changes JSONL")->required();
    curate_cmd->add_option("--scores", curate.scores_path, "scores.jsonl")->required();
    curate_cmd->add_option("--manifest", curate.manifest_path, "vfc_manifest.jsonl")
        ->required();
    curate_cmd->add_option("--out-dir", curate.out_dir, "Output directory")->required();
    curate_cmd->add_option("--threshold", curate.threshold, "Minimum score kept (1-4)");
    curate_cmd->add_option("--split-seed", curate.split_seed, "Split shuffle seed");
    curate_cmd->add_option("--ratio-train", curate.ratio_train, "Train ratio");
    curate_cmd->add_option("--ratio-validation", curate.ratio_validation,
                           "Validation ratio");
    curate_cmd->add_option("--ratio-test", curate.ratio_test, "Test ratio");
    curate_cmd->add_flag("--flat", curate.flat, "Also write flattened labeled records");
    curate_cmd->add_flag("!--no-heuristics", curate.heuristics_enabled,
                         "Mark the dataset as built without test filtering");

    cli::EvaluateArgs evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Quality metrics and audits");
    evaluate_cmd->add_option("--scores", evaluate.scores_path, "scores.jsonl");
    evaluate_cmd->add_option("--labels", evaluate.labels_path, "Ground-truth JSONL");
    evaluate_cmd->add_option("--out-dir", evaluate.out_dir, "Output directory")->required();
    evaluate_cmd->add_option("--cut", evaluate.cut, "Score binarization cut (1-4)");
    evaluate_cmd->add_option("--sample-from", evaluate.sample_from,
                             "JSONL to draw an audit sample from");
    evaluate_cmd->add_option("--sample-n", evaluate.sample_n, "Audit sample size");
    evaluate_cmd->add_option("--sample-seed", evaluate.sample_seed, "Audit sample seed");

    cli::RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Full pipeline: mine through curate");
    run_cmd->add_option("--sources", run.sources_path, "JSONL list of repositories")
        ->required();
    run_cmd->add_option("--keywords", run.keywords_path, "Keyword file");
    run_cmd->add_option("--patterns", run.patterns_path, "Pattern library JSON");
    run_cmd->add_option("--cache-dir", run.cache_dir, "Clone cache for remote sources");
    run_cmd->add_option("--out-dir", run.out_dir, "Output directory")->required();
    run_cmd->add_option("--limit", run.limit, "Max commits per repository");
    run_cmd->add_option("--mine-parallelism", run.mine_parallelism,
                        "Concurrent repositories");
    run_cmd->add_option("--provider", run.provider, "stub or http");
    run_cmd->add_option("--base-url", run.base_url, "HTTP provider endpoint");
    run_cmd->add_option("--model", run.model, "HTTP provider model name");
    run_cmd->add_option("--variant", run.variant, "Prompt variant id");
    run_cmd->add_option("--parallelism", run.score_parallelism,
                        "Concurrent provider calls");
    run_cmd->add_option("--max-attempts", run.max_attempts, "Attempts per change");
    run_cmd->add_option("--backoff-ms", run.backoff_ms, "Initial retry backoff");
    run_cmd->add_option("--rate", run.rate_per_second, "Provider calls per second");
    run_cmd->add_option("--runs", run.runs, "Majority-vote runs per change");
    run_cmd->add_option("--context-budget", run.context_budget,
                        "Sibling context budget in characters");
    run_cmd->add_flag("--include-anonymous", run.include_anonymous,
                      "Score nameless functions too");
    run_cmd->add_option("--threshold", run.threshold, "Minimum score kept (1-4)");
    run_cmd->add_option("--split-seed", run.split_seed, "Split shuffle seed");
    run_cmd->add_option("--ratio-train", run.ratio_train, "Train ratio");
    run_cmd->add_option("--ratio-validation", run.ratio_validation, "Validation ratio");
    run_cmd->add_option("--ratio-test", run.ratio_test, "Test ratio");
    run_cmd->add_flag("--flat", run.flat, "Also write flattened labeled records");
    run_cmd->add_flag("--no-heuristics", run.no_heuristics, "Skip the test-code filter");

    CLI11_PARSE(app, argc, argv);

    if (mine_cmd->parsed()) return cli::cmd_mine(mine);
    if (extract_cmd->parsed()) return cli::cmd_extract(extract);
    if (filter_cmd->parsed()) return cli::cmd_filter(filter);
    if (score_cmd->parsed()) return cli::cmd_score(score);
    if (curate_cmd->parsed()) return cli::cmd_curate(curate);
    if (evaluate_cmd->parsed()) return cli::cmd_evaluate(evaluate);
    if (run_cmd->parsed()) return cli::cmd_run(run);
    return 0;
}
