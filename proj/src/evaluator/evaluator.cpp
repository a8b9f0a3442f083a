// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#include "patchsieve/evaluator/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "patchsieve/core/shuffle.hpp"

namespace patchsieve::evaluator {

std::string_view taxonomy_name(TaxonomyLabel label) {
    switch (label) {
        case TaxonomyLabel::VulnerabilityFix: return "vulnerability_fix";
        case TaxonomyLabel::TestRelated: return "test_related";
        case TaxonomyLabel::BugFix: return "bug_fix";
        case TaxonomyLabel::SupportChange: return "support_change";
        case TaxonomyLabel::CodeRefactoring: return "code_refactoring";
        case TaxonomyLabel::DocumentationUpdate: return "documentation_update";
    }
    return "unknown";
}

std::optional<TaxonomyLabel> taxonomy_from_name(std::string_view name) {
    for (TaxonomyLabel label : {TaxonomyLabel::VulnerabilityFix,
                                TaxonomyLabel::TestRelated,
                                TaxonomyLabel::BugFix,
                                TaxonomyLabel::SupportChange,
                                TaxonomyLabel::CodeRefactoring,
                                TaxonomyLabel::DocumentationUpdate}) {
        if (taxonomy_name(label) == name) return label;
    }
    return std::nullopt;
}

core::json label_to_json(const GroundTruthLabel& label) {
    core::json j;
    j["change_id"] = label.change_id;
    j["annotator_id"] = label.annotator_id;
    j["is_vuln_fix"] = label.is_vuln_fix;
    if (label.taxonomy) {
        j["taxonomy"] = taxonomy_name(*label.taxonomy);
    }
    if (label.adjudicated) j["adjudicated"] = true;
    return j;
}

GroundTruthLabel label_from_json(const core::json& j, const std::string& where) {
    GroundTruthLabel label;
    label.change_id = core::require_string(j, "change_id", where);
    label.annotator_id = core::require_string(j, "annotator_id", where);
    core::require_field(j, "is_vuln_fix", where);
    if (!j.at("is_vuln_fix").is_boolean()) {
        throw core::SchemaError(where + ": field 'is_vuln_fix' must be a boolean");
    }
    label.is_vuln_fix = j.at("is_vuln_fix").get<bool>();
    if (j.contains("taxonomy") && !j.at("taxonomy").is_null()) {
        std::string name = j.at("taxonomy").get<std::string>();
        auto tax = taxonomy_from_name(name);
        if (!tax) {
            throw core::SchemaError(where + ": unknown taxonomy label '" + name + "'");
        }
        label.taxonomy = *tax;
        bool says_vuln = *tax == TaxonomyLabel::VulnerabilityFix;
        if (says_vuln != label.is_vuln_fix) {
            throw core::SchemaError(where + ": is_vuln_fix contradicts taxonomy '" + name + "'");
        }
    }
    if (j.contains("adjudicated") && j.at("adjudicated").is_boolean()) {
        label.adjudicated = j.at("adjudicated").get<bool>();
    }
    return label;
}

MetricsReport compute_metrics(const std::map<std::string, bool>& predictions,
                              const std::map<std::string, bool>& labels) {
    std::vector<std::string> missing;
    for (const auto& [id, predicted] : predictions) {
        if (labels.find(id) == labels.end()) missing.push_back(id);
    }
    if (!missing.empty()) {
        std::string msg = "predictions without labels:";
        for (const auto& id : missing) msg += " " + id;
        throw std::runtime_error(msg);
    }

    MetricsReport r;
    for (const auto& [id, predicted] : predictions) {
        bool actual = labels.at(id);
        if (predicted && actual) r.confusion.tp++;
        else if (predicted && !actual) r.confusion.fp++;
        else if (!predicted && actual) r.confusion.fn++;
        else r.confusion.tn++;
    }
    r.n = predictions.size();
    if (r.n == 0) return r;

    const auto& c = r.confusion;
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(r.n);
    if (c.tp + c.fp > 0) {
        r.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    } else {
        r.precision_undefined = true;
    }
    if (c.tp + c.fn > 0) {
        r.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    } else {
        r.recall_undefined = true;
    }
    if (r.precision + r.recall > 0) {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    } else {
        r.f1_undefined = true;
    }
    return r;
}

core::json metrics_to_json(const MetricsReport& report) {
    core::json j;
    j["n"] = report.n;
    j["confusion"] = {{"tp", report.confusion.tp},
                      {"fp", report.confusion.fp},
                      {"fn", report.confusion.fn},
                      {"tn", report.confusion.tn}};
    j["accuracy"] = report.accuracy;
    j["precision"] = report.precision;
    j["recall"] = report.recall;
    j["f1"] = report.f1;
    j["precision_undefined"] = report.precision_undefined;
    j["recall_undefined"] = report.recall_undefined;
    j["f1_undefined"] = report.f1_undefined;
    return j;
}

std::map<std::string, bool> binarize_scores(const std::vector<scorer::ScoreRecord>& results,
                                            int cut) {
    if (cut < 1 || cut > 4) {
        throw std::invalid_argument("binarization cut must be in [1, 4], got " +
                                    std::to_string(cut));
    }
    std::map<std::string, bool> predictions;
    for (const auto& r : results) {
        if (scorer::variant_from_id(r.variant).output_mode != scorer::PromptMode::Range04) {
            throw std::invalid_argument("cannot binarize non-range score for change " +
                                        r.change_id + " (variant '" + r.variant + "')");
        }
        predictions[r.change_id] = r.score >= cut;
    }
    return predictions;
}

std::vector<GroundTruthLabel> adjudicate(const std::vector<GroundTruthLabel>& labels) {
    std::map<std::string, std::vector<const GroundTruthLabel*>> by_change;
    std::vector<std::string> order;
    for (const auto& label : labels) {
        auto& bucket = by_change[label.change_id];
        if (bucket.empty()) order.push_back(label.change_id);
        bucket.push_back(&label);
    }

    std::vector<GroundTruthLabel> out;
    std::vector<std::string> unresolved;
    for (const auto& id : order) {
        const auto& bucket = by_change[id];
        const GroundTruthLabel* chosen = nullptr;
        for (const auto* label : bucket) {
            if (label->adjudicated) chosen = label;
        }
        if (!chosen) {
            bool all_agree = std::all_of(bucket.begin(), bucket.end(), [&](const auto* l) {
                return l->is_vuln_fix == bucket.front()->is_vuln_fix;
            });
            if (all_agree) {
                chosen = bucket.front();
            } else {
                unresolved.push_back(id);
                continue;
            }
        }
        out.push_back(*chosen);
    }
    if (!unresolved.empty()) {
        std::string msg = "conflicting labels without an adjudicated record:";
        for (const auto& id : unresolved) msg += " " + id;
        throw std::runtime_error(msg);
    }
    return out;
}

double compute_correctness(const std::vector<GroundTruthLabel>& adjudicated) {
    if (adjudicated.empty()) {
        throw std::invalid_argument("cannot compute correctness over an empty sample");
    }
    std::map<std::string, bool> seen;
    for (const auto& label : adjudicated) {
        auto [it, inserted] = seen.emplace(label.change_id, label.is_vuln_fix);
        if (!inserted) {
            throw std::invalid_argument("multiple labels for change " + label.change_id +
                                        "; adjudicate first");
        }
    }
    std::size_t genuine = 0;
    for (const auto& [id, is_vuln] : seen) {
        if (is_vuln) genuine++;
    }
    return static_cast<double>(genuine) / static_cast<double>(seen.size());
}

double margin_of_error(std::size_t sample_n, std::size_t population) {
    if (sample_n == 0) {
        throw std::invalid_argument("margin of error needs a non-empty sample");
    }
    if (sample_n >= population || population <= 1) return 0.0;
    double n = static_cast<double>(sample_n);
    double N = static_cast<double>(population);
    double z = 1.96;
    double fpc = std::sqrt((N - n) / (N - 1.0));
    return z * std::sqrt(0.25 / n) * fpc;
}

AuditSample sample_for_audit(const std::vector<std::string>& ids,
                             std::size_t n,
                             std::uint64_t seed) {
    if (n > ids.size()) {
        throw std::invalid_argument("sample size " + std::to_string(n) +
                                    " exceeds population " + std::to_string(ids.size()));
    }
    std::vector<std::string> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    std::mt19937_64 gen(seed);
    AuditSample sample;
    sample.change_ids = core::sample_without_replacement(std::move(sorted), n, gen);
    sample.population = ids.size();
    sample.seed = seed;
    sample.moe_95 = n == 0 ? 0.0 : margin_of_error(n, ids.size());
    return sample;
}

core::json audit_sample_to_json(const AuditSample& sample) {
    core::json j;
    j["population"] = sample.population;
    j["sample_size"] = sample.change_ids.size();
    j["seed"] = sample.seed;
    j["margin_of_error_95"] = sample.moe_95;
    j["change_ids"] = sample.change_ids;
    return j;
}

KappaResult cohen_kappa(const std::vector<bool>& labels_a,
                        const std::vector<bool>& labels_b) {
    if (labels_a.size() != labels_b.size()) {
        throw std::invalid_argument("label lists differ in length: " +
                                    std::to_string(labels_a.size()) + " vs " +
                                    std::to_string(labels_b.size()));
    }
    if (labels_a.empty()) {
        throw std::invalid_argument("cannot compute kappa over empty label lists");
    }

    double n = static_cast<double>(labels_a.size());
    std::size_t agree = 0, a_true = 0, b_true = 0;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        if (labels_a[i] == labels_b[i]) agree++;
        if (labels_a[i]) a_true++;
        if (labels_b[i]) b_true++;
    }

    KappaResult r;
    r.observed_agreement = static_cast<double>(agree) / n;
    double pa_t = static_cast<double>(a_true) / n;
    double pb_t = static_cast<double>(b_true) / n;
    r.chance_agreement = pa_t * pb_t + (1.0 - pa_t) * (1.0 - pb_t);
    if (r.chance_agreement >= 1.0) {
        if (r.observed_agreement >= 1.0) {
            r.kappa = 1.0;
        } else {
            r.undefined = true;
        }
        return r;
    }
    r.kappa = (r.observed_agreement - r.chance_agreement) / (1.0 - r.chance_agreement);
    return r;
}

core::json kappa_to_json(const KappaResult& result) {
    core::json j;
    j["kappa"] = result.kappa;
    j["observed_agreement"] = result.observed_agreement;
    j["chance_agreement"] = result.chance_agreement;
    j["undefined"] = result.undefined;
    return j;
}

TaxonomyReport taxonomy_report(const std::vector<GroundTruthLabel>& labels) {
    TaxonomyReport report;
    for (TaxonomyLabel label : {TaxonomyLabel::TestRelated,
                                TaxonomyLabel::BugFix,
                                TaxonomyLabel::SupportChange,
                                TaxonomyLabel::CodeRefactoring,
                                TaxonomyLabel::DocumentationUpdate}) {
        report.counts[std::string(taxonomy_name(label))] = 0;
    }
    for (const auto& label : labels) {
        if (!label.taxonomy || *label.taxonomy == TaxonomyLabel::VulnerabilityFix) continue;
        report.counts[std::string(taxonomy_name(*label.taxonomy))]++;
        report.non_vuln_total++;
    }
    for (const auto& [name, count] : report.counts) {
        double pct = 0.0;
        if (report.non_vuln_total > 0) {
            pct = 100.0 * static_cast<double>(count) / static_cast<double>(report.non_vuln_total);
            pct = std::round(pct * 10.0) / 10.0;
        }
        report.percentages[name] = pct;
    }
    return report;
}

core::json taxonomy_to_json(const TaxonomyReport& report) {
    core::json j;
    j["non_vuln_total"] = report.non_vuln_total;
    core::json counts = core::json::object();
    core::json percentages = core::json::object();
    for (const auto& [name, count] : report.counts) counts[name] = count;
    for (const auto& [name, pct] : report.percentages) percentages[name] = pct;
    j["counts"] = counts;
    j["percentages"] = percentages;
    return j;
}

}  // namespace patchsieve::evaluator
