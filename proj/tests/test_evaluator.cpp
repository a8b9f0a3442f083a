// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "patchsieve/evaluator/evaluator.hpp"

using namespace patchsieve;
using namespace patchsieve::evaluator;

namespace {

// Builds aligned prediction and label maps realizing one confusion matrix.
void fill_maps(const Confusion& c,
               std::map<std::string, bool>& predictions,
               std::map<std::string, bool>& labels) {
    std::size_t id = 0;
    auto add = [&](std::size_t count, bool predicted, bool actual) {
        for (std::size_t i = 0; i < count; ++i, ++id) {
            std::string key = "c" + std::to_string(id);
            predictions[key] = predicted;
            labels[key] = actual;
        }
    };
    add(c.tp, true, true);
    add(c.fp, true, false);
    add(c.fn, false, true);
    add(c.tn, false, false);
}

GroundTruthLabel make_label(const std::string& change_id, const std::string& annotator,
                            bool is_vuln, bool adjudicated = false) {
    GroundTruthLabel l;
    l.change_id = change_id;
    l.annotator_id = annotator;
    l.is_vuln_fix = is_vuln;
    l.adjudicated = adjudicated;
    return l;
}

scorer::ScoreRecord make_record(const std::string& id, int score,
                                const std::string& variant = "range04") {
    scorer::ScoreRecord r;
    r.change_id = id;
    r.score = score;
    r.provider_id = "stub";
    r.variant = variant;
    return r;
}

}  // namespace

TEST_CASE("metric identities hold over random confusion matrices") {
    std::mt19937_64 gen(20260822);
    std::uniform_int_distribution<std::size_t> dist(0, 8);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Confusion c{dist(gen), dist(gen), dist(gen), dist(gen)};
        std::size_t n = c.tp + c.fp + c.fn + c.tn;
        if (n == 0) continue;
        ++checked;
        std::map<std::string, bool> predictions, labels;
        fill_maps(c, predictions, labels);
        auto r = compute_metrics(predictions, labels);

        CHECK(r.n == n);
        CHECK(r.confusion.tp == c.tp);
        CHECK(r.confusion.fp == c.fp);
        CHECK(r.confusion.fn == c.fn);
        CHECK(r.confusion.tn == c.tn);

        double acc = static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
        CHECK(std::abs(r.accuracy - acc) < 1e-12);
        if (c.tp + c.fp > 0) {
            double p = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
            CHECK(std::abs(r.precision - p) < 1e-12);
            CHECK_FALSE(r.precision_undefined);
        } else {
            CHECK(r.precision_undefined);
            CHECK(r.precision == 0.0);
        }
        if (c.tp + c.fn > 0) {
            double rec = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
            CHECK(std::abs(r.recall - rec) < 1e-12);
            CHECK_FALSE(r.recall_undefined);
        } else {
            CHECK(r.recall_undefined);
        }
        if (r.precision + r.recall > 0) {
            double f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
            CHECK(std::abs(r.f1 - f1) < 1e-12);
            CHECK_FALSE(r.f1_undefined);
        } else {
            CHECK(r.f1_undefined);
            CHECK(r.f1 == 0.0);
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("the five item worked example matches by hand") {
    std::map<std::string, bool> predictions, labels;
    fill_maps(Confusion{2, 1, 1, 1}, predictions, labels);
    auto r = compute_metrics(predictions, labels);
    CHECK(r.n == 5);
    CHECK(std::abs(r.accuracy - 0.6) < 1e-12);
    CHECK(std::abs(r.precision - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(r.recall - 2.0 / 3.0) < 1e-12);
    CHECK(std::abs(r.f1 - 2.0 / 3.0) < 1e-12);
    CHECK_FALSE(r.precision_undefined);
    CHECK_FALSE(r.recall_undefined);
    CHECK_FALSE(r.f1_undefined);
}

TEST_CASE("degenerate confusion matrices set the undefined flags") {
    std::map<std::string, bool> predictions, labels;
    fill_maps(Confusion{0, 0, 0, 4}, predictions, labels);
    auto r = compute_metrics(predictions, labels);
    CHECK(r.accuracy == 1.0);
    CHECK(r.precision_undefined);
    CHECK(r.recall_undefined);
    CHECK(r.f1_undefined);

    predictions.clear();
    labels.clear();
    fill_maps(Confusion{0, 3, 0, 0}, predictions, labels);
    auto r2 = compute_metrics(predictions, labels);
    CHECK(r2.precision == 0.0);
    CHECK_FALSE(r2.precision_undefined);
    CHECK(r2.recall_undefined);
    CHECK(r2.f1_undefined);
}

TEST_CASE("predictions without labels are an error, extra labels are not") {
    std::map<std::string, bool> predictions{{"a", true}};
    std::map<std::string, bool> labels{{"a", true}, {"b", false}};
    auto r = compute_metrics(predictions, labels);
    CHECK(r.n == 1);
    CHECK(r.confusion.tp == 1);

    predictions["orphan"] = false;
    bool threw = false;
    try {
        compute_metrics(predictions, labels);
    } catch (const std::runtime_error& e) {
        threw = std::string(e.what()).find("orphan") != std::string::npos;
    }
    CHECK(threw);
}

TEST_CASE("empty prediction sets produce an empty report") {
    auto r = compute_metrics({}, {});
    CHECK(r.n == 0);
    CHECK(r.accuracy == 0.0);
    CHECK_FALSE(r.precision_undefined);
}

TEST_CASE("binarization cuts at the configured score") {
    std::vector<scorer::ScoreRecord> records;
    for (int s = 0; s <= 4; ++s) records.push_back(make_record("s" + std::to_string(s), s));

    auto at3 = binarize_scores(records, kDefaultBinarizationCut);
    CHECK(at3.at("s0") == false);
    CHECK(at3.at("s1") == false);
    CHECK(at3.at("s2") == false);
    CHECK(at3.at("s3") == true);
    CHECK(at3.at("s4") == true);

    std::size_t prev_positives = 6;  // sentinel above any possible count
    for (int cut = 1; cut <= 4; ++cut) {
        auto preds = binarize_scores(records, cut);
        std::size_t positives = 0;
        for (const auto& [id, p] : preds) positives += p ? 1 : 0;
        CHECK(positives == static_cast<std::size_t>(5 - cut));
        CHECK(positives < prev_positives);
        prev_positives = positives;
    }

    CHECK_THROWS_AS(binarize_scores(records, 0), std::invalid_argument);
    CHECK_THROWS_AS(binarize_scores(records, 5), std::invalid_argument);
    std::vector<scorer::ScoreRecord> binary = {make_record("b", 1, "binary")};
    CHECK_THROWS_AS(binarize_scores(binary, 3), std::invalid_argument);
    CHECK_NOTHROW(binarize_scores({make_record("m", 4, "range04-nomsg")}, 3));
}

TEST_CASE("kappa matches the worked examples") {
    KappaResult zero = cohen_kappa({true, true, false, false}, {true, false, false, true});
    CHECK(std::abs(zero.kappa) < 1e-12);
    CHECK(std::abs(zero.observed_agreement - 0.5) < 1e-12);
    CHECK(std::abs(zero.chance_agreement - 0.5) < 1e-12);
    CHECK_FALSE(zero.undefined);

    KappaResult worst = cohen_kappa({true, true, false, false}, {false, false, true, true});
    CHECK(std::abs(worst.kappa + 1.0) < 1e-12);

    KappaResult perfect = cohen_kappa({true, false, true}, {true, false, true});
    CHECK(std::abs(perfect.kappa - 1.0) < 1e-12);

    KappaResult uniform = cohen_kappa({true, true}, {true, true});
    CHECK(uniform.kappa == 1.0);
    CHECK_FALSE(uniform.undefined);
}

TEST_CASE("kappa agrees with a from scratch calculation") {
    std::mt19937_64 gen(77);
    std::bernoulli_distribution coin_a(0.6);
    std::bernoulli_distribution coin_b(0.3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<bool> a, b;
        for (int i = 0; i < 50; ++i) {
            a.push_back(coin_a(gen));
            b.push_back(coin_b(gen));
        }
        std::size_t both_true = 0, both_false = 0, a_true = 0, b_true = 0;
        for (int i = 0; i < 50; ++i) {
            if (a[i] && b[i]) both_true++;
            if (!a[i] && !b[i]) both_false++;
            if (a[i]) a_true++;
            if (b[i]) b_true++;
        }
        double po = (both_true + both_false) / 50.0;
        double pe = (a_true / 50.0) * (b_true / 50.0) +
                    (1.0 - a_true / 50.0) * (1.0 - b_true / 50.0);
        auto r = cohen_kappa(a, b);
        CHECK(std::abs(r.observed_agreement - po) < 1e-12);
        CHECK(std::abs(r.chance_agreement - pe) < 1e-12);
        if (pe < 1.0) CHECK(std::abs(r.kappa - (po - pe) / (1.0 - pe)) < 1e-12);
    }
}

TEST_CASE("kappa rejects mismatched or empty inputs") {
    CHECK_THROWS_AS(cohen_kappa({true}, {true, false}), std::invalid_argument);
    CHECK_THROWS_AS(cohen_kappa({}, {}), std::invalid_argument);
}

TEST_CASE("adjudication collapses unanimous verdicts") {
    std::vector<GroundTruthLabel> labels = {
        make_label("c1", "r1", true),
        make_label("c1", "r2", true),
        make_label("c2", "r1", false),
        make_label("c2", "r2", false),
    };
    auto out = adjudicate(labels);
    REQUIRE(out.size() == 2);
    CHECK(out[0].change_id == "c1");
    CHECK(out[0].is_vuln_fix);
    CHECK(out[1].change_id == "c2");
    CHECK_FALSE(out[1].is_vuln_fix);
}

TEST_CASE("conflicts require an adjudicated record") {
    std::vector<GroundTruthLabel> conflicted = {
        make_label("c1", "r1", true),
        make_label("c1", "r2", false),
    };
    bool threw = false;
    try {
        adjudicate(conflicted);
    } catch (const std::runtime_error& e) {
        threw = std::string(e.what()).find("c1") != std::string::npos;
    }
    CHECK(threw);

    conflicted.push_back(make_label("c1", "senior", false, /*adjudicated=*/true));
    auto out = adjudicate(conflicted);
    REQUIRE(out.size() == 1);
    CHECK(out[0].annotator_id == "senior");
    CHECK_FALSE(out[0].is_vuln_fix);
}

TEST_CASE("an adjudicated record overrides even unanimous reviewers") {
    std::vector<GroundTruthLabel> labels = {
        make_label("c1", "r1", false),
        make_label("c1", "r2", false),
        make_label("c1", "senior", true, /*adjudicated=*/true),
    };
    auto out = adjudicate(labels);
    REQUIRE(out.size() == 1);
    CHECK(out[0].is_vuln_fix);
}

TEST_CASE("correctness is the genuine fraction of the audit") {
    std::vector<GroundTruthLabel> labels = {
        make_label("c1", "r1", true),
        make_label("c2", "r1", true),
        make_label("c3", "r1", false),
    };
    CHECK(std::abs(compute_correctness(labels) - 2.0 / 3.0) < 1e-12);

    labels.push_back(make_label("c1", "r2", true));
    CHECK_THROWS_AS(compute_correctness(labels), std::invalid_argument);
    CHECK_THROWS_AS(compute_correctness({}), std::invalid_argument);
}

TEST_CASE("margin of error matches the frozen audit configuration") {
    double moe = margin_of_error(487, 43029);
    CHECK(moe == doctest::Approx(0.04416).epsilon(0.002));
    CHECK(margin_of_error(100, 100) == 0.0);
    CHECK(margin_of_error(5, 1) == 0.0);
    CHECK_THROWS_AS(margin_of_error(0, 100), std::invalid_argument);

    double smaller = margin_of_error(1000, 43029);
    CHECK(smaller < moe);
}

TEST_CASE("audit samples are deterministic and order independent") {
    std::vector<std::string> ids;
    for (int i = 0; i < 40; ++i) ids.push_back("c" + std::to_string(i));
    auto first = sample_for_audit(ids, 10, 99);
    auto second = sample_for_audit(ids, 10, 99);
    CHECK(first.change_ids == second.change_ids);
    CHECK(first.population == 40);
    CHECK(first.seed == 99);
    CHECK(first.moe_95 == doctest::Approx(margin_of_error(10, 40)));

    std::vector<std::string> reversed(ids.rbegin(), ids.rend());
    auto shuffled_input = sample_for_audit(reversed, 10, 99);
    CHECK(shuffled_input.change_ids == first.change_ids);

    std::set<std::string> population(ids.begin(), ids.end());
    std::set<std::string> picked(first.change_ids.begin(), first.change_ids.end());
    CHECK(picked.size() == 10);
    for (const auto& id : picked) CHECK(population.count(id) == 1);

    auto different = sample_for_audit(ids, 10, 100);
    CHECK(different.change_ids != first.change_ids);

    CHECK_THROWS_AS(sample_for_audit(ids, 41, 1), std::invalid_argument);
    auto complete = sample_for_audit(ids, 40, 1);
    CHECK(complete.change_ids.size() == 40);
    CHECK(complete.moe_95 == 0.0);
}

TEST_CASE("taxonomy names round trip") {
    for (TaxonomyLabel label : {TaxonomyLabel::VulnerabilityFix,
                                TaxonomyLabel::TestRelated,
                                TaxonomyLabel::BugFix,
                                TaxonomyLabel::SupportChange,
                                TaxonomyLabel::CodeRefactoring,
                                TaxonomyLabel::DocumentationUpdate}) {
        auto back = taxonomy_from_name(taxonomy_name(label));
        REQUIRE(back.has_value());
        CHECK(*back == label);
    }
    CHECK_FALSE(taxonomy_from_name("renovation").has_value());
    CHECK_FALSE(taxonomy_from_name("").has_value());
}

TEST_CASE("the taxonomy report shares out the non vulnerability labels") {
    std::vector<GroundTruthLabel> labels;
    auto push = [&](TaxonomyLabel tax, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) {
            GroundTruthLabel l = make_label("t" + std::to_string(labels.size()), "r1",
                                            tax == TaxonomyLabel::VulnerabilityFix);
            l.taxonomy = tax;
            labels.push_back(l);
        }
    };
    push(TaxonomyLabel::TestRelated, 56);
    push(TaxonomyLabel::BugFix, 20);
    push(TaxonomyLabel::SupportChange, 20);
    push(TaxonomyLabel::CodeRefactoring, 20);
    push(TaxonomyLabel::DocumentationUpdate, 20);
    push(TaxonomyLabel::VulnerabilityFix, 30);
    labels.push_back(make_label("untagged", "r1", false));

    auto report = taxonomy_report(labels);
    CHECK(report.non_vuln_total == 136);
    CHECK(report.counts.at("test_related") == 56);
    CHECK(report.percentages.at("test_related") == doctest::Approx(41.2));
    CHECK(report.counts.at("bug_fix") == 20);
    CHECK(report.percentages.at("bug_fix") == doctest::Approx(14.7));

    auto empty = taxonomy_report({});
    CHECK(empty.non_vuln_total == 0);
    CHECK(empty.counts.size() == 5);
    CHECK(empty.counts.at("documentation_update") == 0);
    CHECK(empty.percentages.at("documentation_update") == 0.0);
}

TEST_CASE("ground truth labels round trip through json") {
    GroundTruthLabel l = make_label("c9", "r2", false, /*adjudicated=*/true);
    l.taxonomy = TaxonomyLabel::CodeRefactoring;
    auto j = label_to_json(l);
    CHECK(j.at("taxonomy") == "code_refactoring");
    CHECK(j.at("adjudicated") == true);
    auto back = label_from_json(j, "test");
    CHECK(back.change_id == "c9");
    CHECK(back.annotator_id == "r2");
    CHECK_FALSE(back.is_vuln_fix);
    REQUIRE(back.taxonomy.has_value());
    CHECK(*back.taxonomy == TaxonomyLabel::CodeRefactoring);
    CHECK(back.adjudicated);

    GroundTruthLabel plain = make_label("c10", "r1", true);
    auto pj = label_to_json(plain);
    CHECK(pj.find("taxonomy") == pj.end());
    CHECK(pj.find("adjudicated") == pj.end());
    auto pback = label_from_json(pj, "test");
    CHECK_FALSE(pback.taxonomy.has_value());
    CHECK_FALSE(pback.adjudicated);
}

TEST_CASE("label json rejects contradictions and unknown categories") {
    core::json j;
    j["change_id"] = "c1";
    j["annotator_id"] = "r1";
    j["is_vuln_fix"] = true;
    j["taxonomy"] = "bug_fix";
    CHECK_THROWS_AS(label_from_json(j, "test"), core::SchemaError);

    j["is_vuln_fix"] = false;
    CHECK_NOTHROW(label_from_json(j, "test"));

    j["taxonomy"] = "mystery";
    CHECK_THROWS_AS(label_from_json(j, "test"), core::SchemaError);

    core::json bad;
    bad["change_id"] = "c1";
    bad["annotator_id"] = "r1";
    bad["is_vuln_fix"] = "yes";
    CHECK_THROWS_AS(label_from_json(bad, "test"), core::SchemaError);
}

TEST_CASE("report serializers expose the headline numbers") {
    std::map<std::string, bool> predictions, labels;
    fill_maps(Confusion{2, 1, 1, 1}, predictions, labels);
    auto mj = metrics_to_json(compute_metrics(predictions, labels));
    CHECK(mj.at("n") == 5);
    CHECK(mj.at("confusion").at("tp") == 2);
    CHECK(mj.at("accuracy").get<double>() == doctest::Approx(0.6));

    auto kj = kappa_to_json(cohen_kappa({true, false}, {true, false}));
    CHECK(kj.at("kappa").get<double>() == doctest::Approx(1.0));
    CHECK(kj.at("undefined") == false);

    std::vector<std::string> ids = {"a", "b", "c", "d"};
    auto aj = audit_sample_to_json(sample_for_audit(ids, 2, 5));
    CHECK(aj.at("population") == 4);
    CHECK(aj.at("sample_size") == 2);
    CHECK(aj.at("seed") == 5);
    CHECK(aj.at("change_ids").size() == 2);

    auto tj = taxonomy_to_json(taxonomy_report({}));
    CHECK(tj.at("non_vuln_total") == 0);
    CHECK(tj.at("counts").size() == 5);
}
