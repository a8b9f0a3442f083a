// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include <doctest.h>

#include <chrono>
#include <cstdlib>

#include "fixture_repo.hpp"
#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/scorer/prompt.hpp"
#include "patchsieve/scorer/rate_limiter.hpp"
#include "patchsieve/scorer/scorer.hpp"

using namespace patchsieve;
using namespace patchsieve::scorer;
using extractor::FunctionChange;
using patchsieve::testsupport::TempDir;

namespace {

std::string data_dir() {
    return PATCHSIEVE_TEST_DATA_DIR;
}

PromptInputs golden_inputs() {
    PromptInputs in;
    in.commit_message = "Fix buffer overflow in header parser (CVE-2024-0001)";
    in.original_code =
        "int parse(char *buf) {\n"
        "    char tmp[8];\n"
        "    strcpy(tmp, buf);\n"
        "    return 0;\n"
        "}";
    in.revised_code =
        "int parse(char *buf) {\n"
        "    char tmp[8];\n"
        "    strncpy(tmp, buf, sizeof tmp - 1);\n"
        "    tmp[7] = '\\0';\n"
        "    return 0;\n"
        "}";
    in.context =
        "File: src/net.c\n"
        "Function: read_header\n"
        "int read_header(void) {\n"
        "    return parse(global_buf);\n"
        "}";
    return in;
}

FunctionChange make_change(const std::string& id, const std::string& sha = "sha1") {
    FunctionChange c;
    c.change_id = id;
    c.repo_id = "repo";
    c.sha = sha;
    c.file_path = "src/" + id + ".c";
    c.language = extractor::LanguageTag::C;
    c.function_name = "fn_" + id;
    c.before_source = "int " + id + "(void) {\n    return 0;\n}";
    c.after_source = "int " + id + "(void) {\n    return 1;\n}";
    return c;
}

ScoreOptions fast_options() {
    ScoreOptions opts;
    opts.parallelism = 1;
    opts.backoff = std::chrono::milliseconds(0);
    return opts;
}

}  // namespace

TEST_CASE("parse_score takes a bare final line first") {
    CHECK(parse_score("...therefore I assign\n3", 4) == 3);
    CHECK(parse_score("2", 4) == 2);
    CHECK(parse_score("  4  \n", 4) == 4);
    CHECK(parse_score("reasoning...\n\n0\n\n", 4) == 0);
}

TEST_CASE("parse_score falls back to the last standalone integer") {
    CHECK(parse_score("Score: 4 out of 4.", 4) == 4);
    CHECK(parse_score("The score is 3.\nThat is final.", 4) == 3);
    CHECK(parse_score("I rate this 2, maybe 3", 4) == 3);
    CHECK(parse_score("4.", 4) == 4);
}

TEST_CASE("parse_score ignores embedded and out-of-range numbers") {
    CHECK(parse_score("The change is a refactor.", 4) == -1);
    CHECK(parse_score("version v2 only", 4) == -1);
    CHECK(parse_score("pi is 3.14", 4) == -1);
    CHECK(parse_score("7", 4) == -1);
    CHECK(parse_score("score is 9", 4) == -1);
    CHECK(parse_score("", 4) == -1);
    CHECK(parse_score("3", 1) == -1);
    CHECK(parse_score("1", 1) == 1);
    CHECK(parse_score("utf8\n12345678901", 4) == -1);
}

TEST_CASE("variant ids round trip") {
    CHECK(variant_id(PromptVariant{}) == "range04");
    CHECK(variant_id(PromptVariant{PromptMode::Range04, false, true}) == "range04-nomsg");
    CHECK(variant_id(PromptVariant{PromptMode::Range04, true, false}) == "range04-noctx");
    CHECK(variant_id(PromptVariant{PromptMode::Range04, false, false}) == "range04-nomsg-noctx");
    CHECK(variant_id(PromptVariant{PromptMode::Binary, true, true}) == "binary");
    CHECK(variant_id(PromptVariant{PromptMode::Binary, false, false}) == "binary-nomsg-noctx");

    for (const char* id : {"range04", "range04-nomsg", "range04-noctx", "range04-nomsg-noctx",
                           "binary", "binary-nomsg", "binary-noctx", "binary-nomsg-noctx"}) {
        CHECK(variant_id(variant_from_id(id)) == id);
    }
    CHECK_THROWS_AS(variant_from_id("range05"), std::invalid_argument);
    CHECK_THROWS_AS(variant_from_id("range04-nope"), std::invalid_argument);
    CHECK_THROWS_AS(variant_from_id(""), std::invalid_argument);
}

TEST_CASE("prompt mode helpers") {
    CHECK(max_score_for(PromptMode::Range04) == 4);
    CHECK(max_score_for(PromptMode::Binary) == 1);
    CHECK(prompt_mode_from_name("range04") == PromptMode::Range04);
    CHECK(prompt_mode_from_name("binary") == PromptMode::Binary);
    CHECK_THROWS_AS(prompt_mode_from_name("other"), std::invalid_argument);
}

TEST_CASE("prompts match the frozen goldens for every variant") {
    PromptInputs in = golden_inputs();
    for (PromptMode mode : {PromptMode::Range04, PromptMode::Binary}) {
        for (bool msg : {true, false}) {
            for (bool ctx : {true, false}) {
                PromptVariant v{mode, msg, ctx};
                std::string id = variant_id(v);
                CAPTURE(id);
                std::string expected =
                    core::read_file(data_dir() + "/prompts/" + id + ".golden.txt");
                CHECK(build_prompt(v, in) == expected);
            }
        }
    }
}

TEST_CASE("prompt text carries the expected template sentences") {
    PromptInputs in = golden_inputs();
    std::string full = build_prompt(PromptVariant{}, in);
    CHECK(full.find("The length of the code snippet should not influence your assessment") !=
          std::string::npos);
    CHECK(full.find("Commit Message:") != std::string::npos);
    CHECK(full.find("Here are the other functions in the same commit:") != std::string::npos);

    std::string binary = build_prompt(PromptVariant{PromptMode::Binary, true, true}, in);
    CHECK(binary.find("output 1, otherwise output 0") != std::string::npos);

    std::string bare = build_prompt(PromptVariant{PromptMode::Range04, false, false}, in);
    CHECK(bare.find("Commit Message:") == std::string::npos);
    CHECK(bare.find("other functions in the same commit") == std::string::npos);
}

TEST_CASE("absent sides and empty context have placeholder text") {
    PromptInputs in = golden_inputs();
    in.original_code.clear();
    in.context.clear();
    std::string p = build_prompt(PromptVariant{}, in);
    CHECK(p.find("Original code snippet (code before changes):\n"
                 "(function absent in this version)") != std::string::npos);
    CHECK(p.find("Here are the other functions in the same commit:\n(none)") !=
          std::string::npos);
}

TEST_CASE("score record json round trip") {
    ScoreRecord r;
    r.change_id = "c1";
    r.score = 3;
    r.provider_id = "stub";
    r.variant = "range04-nomsg";
    r.attempts = 2;
    r.raw_response = "thinking...\n3";
    auto j = score_to_json(r);
    auto back = score_from_json(j, "test");
    CHECK(back.change_id == r.change_id);
    CHECK(back.score == r.score);
    CHECK(back.provider_id == r.provider_id);
    CHECK(back.variant == r.variant);
    CHECK(back.attempts == r.attempts);
    CHECK(back.raw_response == r.raw_response);
}

TEST_CASE("batch scoring returns records in input order") {
    StubProvider stub;
    std::vector<FunctionChange> changes;
    for (int i = 0; i < 10; ++i) changes.push_back(make_change("c" + std::to_string(i)));
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:2 refactor";

    ScoreOptions opts = fast_options();
    opts.parallelism = 4;
    auto result = score_changes(stub, changes, messages, opts);
    REQUIRE(result.records.size() == 10);
    CHECK(result.failures.empty());
    CHECK(result.provider_calls == 10);
    CHECK(stub.call_count() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(result.records[i].change_id == changes[i].change_id);
        CHECK(result.records[i].score == 2);
        CHECK(result.records[i].provider_id == "stub");
        CHECK(result.records[i].variant == "range04");
        CHECK(result.records[i].attempts == 1);
    }
}

TEST_CASE("hash fallback scores stay in range and are deterministic") {
    StubProvider stub;
    auto change = make_change("solo");
    ScoreOptions opts = fast_options();
    auto first = score_changes(stub, {change}, {}, opts);
    StubProvider stub2;
    auto second = score_changes(stub2, {change}, {}, opts);
    REQUIRE(first.records.size() == 1);
    CHECK(first.records[0].score >= 0);
    CHECK(first.records[0].score <= 4);
    REQUIRE(second.records.size() == 1);
    CHECK(first.records[0].score == second.records[0].score);
}

TEST_CASE("transient failures are retried and attempts recorded") {
    StubProvider stub;
    stub.fail_next(1, ProviderError::Kind::Transient);
    auto change = make_change("r1");
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:4";
    auto result = score_changes(stub, {change}, messages, fast_options());
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].attempts == 2);
    CHECK(result.provider_calls == 2);
}

TEST_CASE("a malformed response consumes an attempt and is retried") {
    StubProvider stub;
    stub.push_response("The change is a refactor.");
    stub.push_response("2");
    auto change = make_change("m1");
    auto result = score_changes(stub, {change}, {}, fast_options());
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].score == 2);
    CHECK(result.records[0].attempts == 2);
    CHECK(result.records[0].raw_response == "2");
}

TEST_CASE("exhausted retries on malformed responses fail the change") {
    StubProvider stub;
    stub.push_response("no digits here");
    stub.push_response("still none");
    stub.push_response("nope");
    auto change = make_change("m2");
    auto result = score_changes(stub, {change}, {}, fast_options());
    CHECK(result.records.empty());
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].change_id == "m2");
    CHECK(result.failures[0].error.find("unparseable response") == 0);
    CHECK(result.provider_calls == 3);
}

TEST_CASE("exhausted transient failures produce a failure entry") {
    StubProvider stub;
    stub.fail_next(3, ProviderError::Kind::Transient);
    auto change = make_change("t1");
    auto result = score_changes(stub, {change}, {}, fast_options());
    CHECK(result.records.empty());
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].error == "injected failure");
    CHECK(result.provider_calls == 3);
}

TEST_CASE("one failing change does not poison the rest") {
    StubProvider stub;
    stub.fail_next(3, ProviderError::Kind::Transient);
    std::vector<FunctionChange> changes;
    for (int i = 0; i < 10; ++i) changes.push_back(make_change("p" + std::to_string(i)));
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:1";
    auto result = score_changes(stub, changes, messages, fast_options());
    CHECK(result.records.size() == 9);
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].change_id == "p0");
}

TEST_CASE("fatal provider errors abort the batch") {
    StubProvider stub;
    stub.fail_next(1, ProviderError::Kind::Fatal);
    auto change = make_change("f1");
    CHECK_THROWS_AS(score_changes(stub, {change}, {}, fast_options()), ProviderError);
}

TEST_CASE("an oversized prompt retries once without the context block") {
    StubProvider stub;
    stub.fail_next(1, ProviderError::Kind::PromptTooLong);
    // Two changes of the same commit so the target has sibling context.
    auto a = make_change("big1");
    auto b = make_change("big2");
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:3";
    auto result = score_changes(stub, {a, b}, messages, fast_options());
    REQUIRE(result.records.size() == 2);
    auto prompts = stub.prompts();
    REQUIRE(prompts.size() == 3);
    CHECK(prompts[0].find("fn_big2") != std::string::npos);
    CHECK(prompts[1].find("fn_big2") == std::string::npos);
    CHECK(prompts[1].find("Here are the other functions in the same commit:\n(none)") !=
          std::string::npos);
}

TEST_CASE("an oversized prompt with no context to drop fails the change") {
    StubProvider stub;
    stub.fail_next(1, ProviderError::Kind::PromptTooLong);
    auto change = make_change("big3");
    auto result = score_changes(stub, {change}, {}, fast_options());
    CHECK(result.records.empty());
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].change_id == "big3");
}

TEST_CASE("majority voting across runs picks the most common score") {
    StubProvider stub;
    stub.push_response("2");
    stub.push_response("3");
    stub.push_response("3");
    auto change = make_change("v1");
    ScoreOptions opts = fast_options();
    opts.runs = 3;
    auto result = score_changes(stub, {change}, {}, opts);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].score == 3);
    CHECK(result.records[0].attempts == 3);
}

TEST_CASE("majority ties resolve to the smaller score") {
    StubProvider stub;
    stub.push_response("1");
    stub.push_response("2");
    auto change = make_change("v2");
    ScoreOptions opts = fast_options();
    opts.runs = 2;
    auto result = score_changes(stub, {change}, {}, opts);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].score == 1);
}

TEST_CASE("checkpointed batches resume with zero provider calls") {
    TempDir tmp("ps-score");
    auto checkpoint = tmp.path() / "scores.checkpoint.jsonl";
    std::vector<FunctionChange> changes;
    for (int i = 0; i < 4; ++i) changes.push_back(make_change("k" + std::to_string(i)));
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:2";

    ScoreOptions opts = fast_options();
    opts.checkpoint_path = checkpoint;

    StubProvider first;
    auto run1 = score_changes(first, changes, messages, opts);
    REQUIRE(run1.records.size() == 4);
    CHECK(run1.provider_calls == 4);
    CHECK(run1.resumed_from_checkpoint == 0);

    StubProvider second;
    auto run2 = score_changes(second, changes, messages, opts);
    REQUIRE(run2.records.size() == 4);
    CHECK(run2.provider_calls == 0);
    CHECK(second.call_count() == 0);
    CHECK(run2.resumed_from_checkpoint == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(run2.records[i].change_id == run1.records[i].change_id);
        CHECK(run2.records[i].score == run1.records[i].score);
    }
}

TEST_CASE("a partial checkpoint only scores the missing changes") {
    TempDir tmp("ps-score");
    auto checkpoint = tmp.path() / "scores.checkpoint.jsonl";
    std::vector<FunctionChange> changes;
    for (int i = 0; i < 6; ++i) changes.push_back(make_change("q" + std::to_string(i)));
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:1";

    ScoreOptions opts = fast_options();
    opts.checkpoint_path = checkpoint;

    std::vector<FunctionChange> head(changes.begin(), changes.begin() + 2);
    StubProvider first;
    score_changes(first, head, messages, opts);

    StubProvider second;
    auto result = score_changes(second, changes, messages, opts);
    REQUIRE(result.records.size() == 6);
    CHECK(result.resumed_from_checkpoint == 2);
    CHECK(result.provider_calls == 4);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(result.records[i].change_id == changes[i].change_id);
}

TEST_CASE("checkpoints from another provider or variant are rejected") {
    TempDir tmp("ps-score");
    auto checkpoint = tmp.path() / "scores.checkpoint.jsonl";
    auto change = make_change("x1");
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:1";

    ScoreOptions opts = fast_options();
    opts.checkpoint_path = checkpoint;
    StubProvider stub;
    score_changes(stub, {change}, messages, opts);

    StubProvider other(4, "other");
    bool provider_rejected = false;
    try {
        score_changes(other, {change}, messages, opts);
    } catch (const std::runtime_error& e) {
        provider_rejected =
            std::string(e.what()).find("checkpoint written by provider") != std::string::npos;
    }
    CHECK(provider_rejected);

    StubProvider again;
    opts.variant = PromptVariant{PromptMode::Binary, true, true};
    bool variant_rejected = false;
    try {
        score_changes(again, {change}, messages, opts);
    } catch (const std::runtime_error& e) {
        variant_rejected =
            std::string(e.what()).find("checkpoint written for variant") != std::string::npos;
    }
    CHECK(variant_rejected);
}

TEST_CASE("scoring an empty batch is a no-op") {
    StubProvider stub;
    auto result = score_changes(stub, {}, {}, fast_options());
    CHECK(result.records.empty());
    CHECK(result.failures.empty());
    CHECK(result.provider_calls == 0);
}

TEST_CASE("binary variant scores parse against the binary range") {
    StubProvider stub(1);
    auto change = make_change("b1");
    CommitMessageMap messages;
    messages[{"repo", "sha1"}] = "stub-score:1";
    ScoreOptions opts = fast_options();
    opts.variant = PromptVariant{PromptMode::Binary, true, true};
    auto result = score_changes(stub, {change}, messages, opts);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].score == 1);
    CHECK(result.records[0].variant == "binary");
}

TEST_CASE("rate limiter spaces acquisitions out") {
    RateLimiter limiter(200.0, 1.0);
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 5; ++i) limiter.acquire();
    auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() >= 10);

    RateLimiter unlimited(0);
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) unlimited.acquire();
    auto fast = std::chrono::steady_clock::now() - t0;
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(fast).count() < 500);
}
