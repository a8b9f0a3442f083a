// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixture_repo.hpp"
#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/curator/curator.hpp"

using namespace patchsieve;
using namespace patchsieve::curator;
using extractor::FunctionChange;
using extractor::LanguageTag;
using patchsieve::testsupport::TempDir;

namespace {

ScoredChange make_scored(const std::string& id, int score,
                         const std::string& sha = "sha1",
                         LanguageTag lang = LanguageTag::C) {
    ScoredChange sc;
    sc.change.change_id = id;
    sc.change.repo_id = "repo";
    sc.change.sha = sha;
    sc.change.file_path = "src/" + id + ".c";
    sc.change.language = lang;
    sc.change.function_name = "fn_" + id;
    sc.change.before_source = "int " + id + "(void) {\n    return 0;\n}";
    sc.change.after_source = "int " + id + "(void) {\n    return 1;\n}";
    sc.score.change_id = id;
    sc.score.score = score;
    sc.score.provider_id = "stub";
    sc.score.variant = "range04";
    return sc;
}

CuratedPair make_pair(const std::string& id, const std::string& sha,
                      const std::string& vulnerable, const std::string& benign,
                      std::int64_t timestamp = INT64_MAX) {
    CuratedPair p;
    p.pair_id = id;
    p.repo_id = "repo";
    p.sha = sha;
    p.file_path = "src/" + id + ".c";
    p.function_name = "fn_" + id;
    p.language = LanguageTag::C;
    p.score = 4;
    p.vulnerable_source = vulnerable;
    p.benign_source = benign;
    p.timestamp = timestamp;
    return p;
}

std::set<std::string> shas_of(const std::vector<CuratedPair>& pairs) {
    std::set<std::string> out;
    for (const auto& p : pairs) out.insert(p.sha);
    return out;
}

}  // namespace

TEST_CASE("threshold bounds are validated per scoring mode") {
    std::vector<ScoredChange> scored = {make_scored("a", 2)};
    CHECK_THROWS_AS(apply_threshold(scored, 0, scorer::PromptMode::Range04),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_threshold(scored, 5, scorer::PromptMode::Range04),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_threshold(scored, 2, scorer::PromptMode::Binary),
                    std::invalid_argument);
    CHECK_NOTHROW(apply_threshold(scored, 1, scorer::PromptMode::Binary));
    CHECK_NOTHROW(apply_threshold(scored, 4, scorer::PromptMode::Range04));
}

TEST_CASE("raising the threshold keeps a nested subset") {
    std::vector<ScoredChange> scored;
    for (int s = 0; s <= 4; ++s)
        for (int k = 0; k < 2; ++k)
            scored.push_back(make_scored("s" + std::to_string(s) + "_" + std::to_string(k), s));

    std::vector<std::set<std::string>> kept_ids;
    for (int t = 1; t <= 4; ++t) {
        auto kept = apply_threshold(scored, t, scorer::PromptMode::Range04);
        CHECK(kept.size() == static_cast<std::size_t>(2 * (5 - t)));
        for (const auto& sc : kept) CHECK(sc.score.score >= t);
        std::set<std::string> ids;
        for (const auto& sc : kept) ids.insert(sc.change.change_id);
        kept_ids.push_back(ids);
    }
    for (std::size_t i = 1; i < kept_ids.size(); ++i) {
        CHECK(std::includes(kept_ids[i - 1].begin(), kept_ids[i - 1].end(),
                            kept_ids[i].begin(), kept_ids[i].end()));
    }
}

TEST_CASE("pairs map before to vulnerable and after to benign") {
    auto sc = make_scored("m1", 4);
    TimestampMap ts;
    ts[{"repo", "sha1"}] = 1700000000;
    CurateDiagnostics diag;
    std::vector<FunctionChange> added;
    auto pairs = build_pairs({sc}, ts, &added, &diag);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].pair_id == "m1");
    CHECK(pairs[0].vulnerable_source == sc.change.before_source);
    CHECK(pairs[0].benign_source == sc.change.after_source);
    CHECK(pairs[0].score == 4);
    CHECK(pairs[0].timestamp == 1700000000);
    CHECK(added.empty());
    CHECK(diag.added_function_excluded == 0);
}

TEST_CASE("functions added by the fix cannot form a pair") {
    auto normal = make_scored("n1", 3);
    auto added_fn = make_scored("n2", 3);
    added_fn.change.before_source.clear();
    CurateDiagnostics diag;
    std::vector<FunctionChange> added;
    auto pairs = build_pairs({normal, added_fn}, {}, &added, &diag);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].pair_id == "n1");
    CHECK(pairs[0].timestamp == INT64_MAX);
    REQUIRE(added.size() == 1);
    CHECK(added[0].change_id == "n2");
    CHECK(diag.added_function_excluded == 1);
}

TEST_CASE("duplicate pairs collapse to the earliest commit") {
    auto late = make_pair("late", "sha_a", "int f() {\n  return g();\n}", "int f() {\n  return h();\n}", 200);
    auto early = make_pair("early", "sha_b",
                           "int f() {\r\n  return g();\r\n}\r\n\r\n",
                           "\nint f() {\n  return h();\n}", 100);
    auto other = make_pair("other", "sha_c", "void k() {}", "void k() { init(); }", 150);

    CurateDiagnostics diag;
    auto out = deduplicate({late, early, other}, &diag);
    REQUIRE(out.size() == 2);
    CHECK(out[0].pair_id == "early");
    CHECK(out[1].pair_id == "other");
    CHECK(diag.duplicates_collapsed == 1);
}

TEST_CASE("duplicate ties keep the first occurrence") {
    auto a = make_pair("a", "sha_a", "int f() { return 1; }", "int f() { return 2; }", 100);
    auto b = make_pair("b", "sha_b", "int f() { return 1; }", "int f() { return 2; }", 100);
    auto out = deduplicate({a, b}, nullptr);
    REQUIRE(out.size() == 1);
    CHECK(out[0].pair_id == "a");
}

TEST_CASE("an undated duplicate loses to a dated one") {
    auto undated = make_pair("undated", "sha_a", "x();", "y();");
    auto dated = make_pair("dated", "sha_b", "x();", "y();", 5);
    auto out = deduplicate({undated, dated}, nullptr);
    REQUIRE(out.size() == 1);
    CHECK(out[0].pair_id == "dated");
}

TEST_CASE("interior whitespace still distinguishes pairs") {
    auto tight = make_pair("tight", "sha_a", "int f() {return 1;}", "int f() {return 2;}", 1);
    auto spaced = make_pair("spaced", "sha_b", "int f() { return 1; }", "int f() { return 2; }", 2);
    auto out = deduplicate({tight, spaced}, nullptr);
    CHECK(out.size() == 2);
}

TEST_CASE("splits are deterministic and keep commits whole") {
    std::vector<CuratedPair> pairs;
    for (int g = 0; g < 6; ++g) {
        std::string sha = "sha" + std::to_string(g);
        int members = g == 0 ? 3 : 1;
        for (int m = 0; m < members; ++m) {
            pairs.push_back(make_pair("p" + std::to_string(g) + "_" + std::to_string(m), sha,
                                      "vuln" + sha + std::to_string(m), "benign", 10 + g));
        }
    }

    auto first = split_pairs(pairs, SplitRatios{}, 42);
    auto second = split_pairs(pairs, SplitRatios{}, 42);
    auto ids = [](const std::vector<CuratedPair>& v) {
        std::vector<std::string> out;
        for (const auto& p : v) out.push_back(p.pair_id);
        return out;
    };
    CHECK(ids(first.train) == ids(second.train));
    CHECK(ids(first.validation) == ids(second.validation));
    CHECK(ids(first.test) == ids(second.test));

    CHECK(first.train.size() + first.validation.size() + first.test.size() == pairs.size());

    auto train_shas = shas_of(first.train);
    auto val_shas = shas_of(first.validation);
    auto test_shas = shas_of(first.test);
    for (const auto& s : train_shas) {
        CHECK(val_shas.count(s) == 0);
        CHECK(test_shas.count(s) == 0);
    }
    for (const auto& s : val_shas) CHECK(test_shas.count(s) == 0);
}

TEST_CASE("split ratios are honored with uniform groups") {
    std::vector<CuratedPair> pairs;
    for (int g = 0; g < 20; ++g) {
        std::string sha = "sha" + std::to_string(g);
        pairs.push_back(make_pair("p" + std::to_string(g), sha, "v" + sha, "b", g));
    }
    auto split = split_pairs(pairs, SplitRatios{}, 7);
    CHECK(split.train.size() == 14);
    CHECK(split.validation.size() == 3);
    CHECK(split.test.size() == 3);
}

TEST_CASE("splitting needs three distinct commits and positive ratios") {
    std::vector<CuratedPair> pairs = {
        make_pair("a", "sha1", "v1", "b1", 1),
        make_pair("b", "sha1", "v2", "b2", 1),
        make_pair("c", "sha2", "v3", "b3", 2),
    };
    CHECK_THROWS_AS(split_pairs(pairs, SplitRatios{}, 1), std::runtime_error);
    pairs.push_back(make_pair("d", "sha3", "v4", "b4", 3));
    CHECK_NOTHROW(split_pairs(pairs, SplitRatios{}, 1));
    CHECK_THROWS_AS(split_pairs(pairs, SplitRatios{7, 0, 3}, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_pairs(pairs, SplitRatios{-1, 1, 1}, 1), std::invalid_argument);
}

TEST_CASE("pair json round trips and tags the partition") {
    auto p = make_pair("j1", "shaX", "int f() { return 0; }", "int f() { return 1; }", 99);
    p.language = LanguageTag::Python;
    p.score = 3;
    auto j = pair_to_json(p, "train");
    CHECK(j.at("partition") == "train");
    CHECK(j.at("language") == "Python");
    auto back = pair_from_json(j, "test");
    CHECK(back.pair_id == p.pair_id);
    CHECK(back.repo_id == p.repo_id);
    CHECK(back.sha == p.sha);
    CHECK(back.file_path == p.file_path);
    CHECK(back.function_name == p.function_name);
    CHECK(back.language == LanguageTag::Python);
    CHECK(back.score == 3);
    CHECK(back.vulnerable_source == p.vulnerable_source);
    CHECK(back.benign_source == p.benign_source);

    auto bare = pair_to_json(p, "");
    CHECK(bare.find("partition") == bare.end());
}

TEST_CASE("manifest json round trips") {
    DatasetManifest m;
    m.threshold = 3;
    m.heuristics_enabled = false;
    m.pair_count = 10;
    m.function_count = 20;
    m.per_language_counts = {{"C", 6}, {"Python", 4}};
    m.keyword_set_id = "default-v1";
    m.provider_id = "stub";
    m.variant = "range04";
    m.split_seed = 42;
    m.created_at = "2026-01-01T00:00:00Z";
    auto back = manifest_from_json(manifest_to_json(m), "test");
    CHECK(back.threshold == 3);
    CHECK(back.heuristics_enabled == false);
    CHECK(back.pair_count == 10);
    CHECK(back.function_count == 20);
    CHECK(back.per_language_counts == m.per_language_counts);
    CHECK(back.keyword_set_id == "default-v1");
    CHECK(back.provider_id == "stub");
    CHECK(back.variant == "range04");
    CHECK(back.split_seed == 42);
    CHECK(back.created_at == "2026-01-01T00:00:00Z");
}

TEST_CASE("manifest counts derive from the split") {
    SplitResult split;
    auto c_pair = make_pair("c1", "s1", "v", "b", 1);
    auto py_pair = make_pair("p1", "s2", "v2", "b2", 2);
    py_pair.language = LanguageTag::Python;
    auto py_pair2 = make_pair("p2", "s3", "v3", "b3", 3);
    py_pair2.language = LanguageTag::Python;
    split.train = {c_pair, py_pair};
    split.validation = {py_pair2};

    DatasetManifest m;
    fill_manifest_counts(m, split);
    CHECK(m.pair_count == 3);
    CHECK(m.function_count == 6);
    CHECK(m.per_language_counts.at("C") == 1);
    CHECK(m.per_language_counts.at("Python") == 2);
}

TEST_CASE("datasets write and read back through the partition files") {
    TempDir tmp("ps-curate");
    SplitResult split;
    split.train = {make_pair("t1", "s1", "v1", "b1", 1), make_pair("t2", "s2", "v2", "b2", 2)};
    split.validation = {make_pair("v1", "s3", "v3", "b3", 3)};
    split.test = {make_pair("x1", "s4", "v4", "b4", 4)};

    DatasetManifest manifest;
    manifest.threshold = 2;
    manifest.keyword_set_id = "default-v1";
    manifest.provider_id = "stub";
    manifest.variant = "range04";
    manifest.split_seed = 9;
    manifest.created_at = "2026-02-02T00:00:00Z";

    FunctionChange added;
    added.change_id = "added1";
    added.repo_id = "repo";
    added.sha = "s1";
    added.file_path = "src/new.c";
    added.language = LanguageTag::C;
    added.function_name = "fresh";
    added.after_source = "void fresh(void) {}";

    write_dataset(split, manifest, tmp.path() / "out", /*flat=*/true, {added});

    auto train = read_pairs(tmp.path() / "out" / "train.jsonl");
    REQUIRE(train.size() == 2);
    CHECK(train[0].pair_id == "t1");
    CHECK(train[1].pair_id == "t2");
    CHECK(read_pairs(tmp.path() / "out" / "validation.jsonl").size() == 1);
    CHECK(read_pairs(tmp.path() / "out" / "test.jsonl").size() == 1);

    auto manifest_json =
        core::json::parse(core::read_file((tmp.path() / "out" / "manifest.json").string()));
    auto m = manifest_from_json(manifest_json, "manifest");
    CHECK(m.pair_count == 4);
    CHECK(m.function_count == 8);
    CHECK(m.per_language_counts.at("C") == 4);
    CHECK(m.created_at == "2026-02-02T00:00:00Z");

    std::size_t added_rows = 0;
    core::for_each_jsonl((tmp.path() / "out" / "added_functions.jsonl").string(),
                         [&](const core::json& j, std::size_t) {
                             ++added_rows;
                             CHECK(j.at("change_id") == "added1");
                         });
    CHECK(added_rows == 1);

    std::vector<core::json> flat;
    core::for_each_jsonl((tmp.path() / "out" / "train_flat.jsonl").string(),
                         [&](const core::json& j, std::size_t) { flat.push_back(j); });
    REQUIRE(flat.size() == 4);
    CHECK(flat[0].at("pair_id") == "t1");
    CHECK(flat[0].at("label") == 1);
    CHECK(flat[0].at("source") == "v1");
    CHECK(flat[1].at("pair_id") == "t1");
    CHECK(flat[1].at("label") == 0);
    CHECK(flat[1].at("source") == "b1");
    CHECK(flat[2].at("label") == 1);
    CHECK(flat[3].at("label") == 0);
}

TEST_CASE("partition files omit the flat variant unless requested") {
    TempDir tmp("ps-curate");
    SplitResult split;
    split.train = {make_pair("t1", "s1", "v1", "b1", 1)};
    DatasetManifest manifest;
    manifest.keyword_set_id = "default-v1";
    manifest.provider_id = "stub";
    manifest.variant = "range04";
    manifest.created_at = "2026-02-02T00:00:00Z";
    write_dataset(split, manifest, tmp.path() / "out", /*flat=*/false, {});
    CHECK(std::filesystem::exists(tmp.path() / "out" / "train.jsonl"));
    CHECK_FALSE(std::filesystem::exists(tmp.path() / "out" / "train_flat.jsonl"));
}
