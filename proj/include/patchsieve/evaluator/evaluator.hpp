// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the patchsieve authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patchsieve/core/jsonl.hpp"
#include "patchsieve/scorer/types.hpp"

namespace patchsieve::evaluator {

// Category of a change that landed in a mined fix commit, as judged by a
// human reviewer.
enum class TaxonomyLabel {
    VulnerabilityFix,
    TestRelated,
    BugFix,
    SupportChange,
    CodeRefactoring,
    DocumentationUpdate,
};

std::string_view taxonomy_name(TaxonomyLabel label);
std::optional<TaxonomyLabel> taxonomy_from_name(std::string_view name);

// One reviewer's verdict on one change. A record with `adjudicated` set
// resolves a disagreement between reviewers and is the label correctness
// calculations use; plain records feed agreement statistics.
struct GroundTruthLabel {
    std::string change_id;
    std::string annotator_id;
    bool is_vuln_fix = false;
    std::optional<TaxonomyLabel> taxonomy;
    bool adjudicated = false;
};

core::json label_to_json(const GroundTruthLabel& label);
GroundTruthLabel label_from_json(const core::json& j, const std::string& where);

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

struct MetricsReport {
    Confusion confusion;
    std::size_t n = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when the corresponding denominator was zero and the metric was
    // reported as 0 by convention.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

// Confusion-matrix metrics over predictions joined to labels by change id.
// Every predicted id must have a label; labels without predictions are
// ignored.
MetricsReport compute_metrics(const std::map<std::string, bool>& predictions,
                              const std::map<std::string, bool>& labels);

core::json metrics_to_json(const MetricsReport& report);

// Default cut for turning 0-4 scores into vulnerability-fix predictions:
// scores of 3 and 4 count as positive, matching the threshold the flagship
// dataset is built at. Always logged alongside results so other readings
// are a flag away.
inline constexpr int kDefaultBinarizationCut = 3;

// Predicted positive iff score >= cut. Only 0-4 scores binarize; cut must
// lie in [1, 4].
std::map<std::string, bool> binarize_scores(const std::vector<scorer::ScoreRecord>& results,
                                            int cut);

// Collapses per-reviewer labels into one label per change. Unanimous
// verdicts stand on their own; a conflict requires a record with
// `adjudicated` set, and an adjudicated record wins outright wherever it
// appears. A conflict without one is an error listing the change ids.
std::vector<GroundTruthLabel> adjudicate(const std::vector<GroundTruthLabel>& labels);

// Fraction of audited items whose adjudicated verdict is a genuine
// vulnerability fix. Expects exactly one label per change id.
double compute_correctness(const std::vector<GroundTruthLabel>& adjudicated);

// Margin of error at 95% confidence for a proportion estimated from a
// sample of `sample_n` out of `population`, at worst-case p=0.5 with
// finite-population correction.
double margin_of_error(std::size_t sample_n, std::size_t population);

struct AuditSample {
    std::vector<std::string> change_ids;
    std::size_t population = 0;
    std::uint64_t seed = 0;
    double moe_95 = 0.0;
};

// Uniform seeded sample of `n` ids without replacement. The input order
// does not matter: ids are sorted before sampling, so equal populations
// sample identically.
AuditSample sample_for_audit(const std::vector<std::string>& ids,
                             std::size_t n,
                             std::uint64_t seed);

core::json audit_sample_to_json(const AuditSample& sample);

struct KappaResult {
    double kappa = 0.0;
    double observed_agreement = 0.0;
    double chance_agreement = 0.0;
    // Chance agreement of 1 with imperfect observed agreement leaves kappa
    // without a value; it is reported as 0 with this flag set.
    bool undefined = false;
};

// Cohen's kappa over two aligned boolean label lists.
KappaResult cohen_kappa(const std::vector<bool>& labels_a,
                        const std::vector<bool>& labels_b);

core::json kappa_to_json(const KappaResult& result);

struct TaxonomyReport {
    // Counts over labels other than VulnerabilityFix.
    std::map<std::string, std::size_t> counts;
    // Share of the non-vulnerability total, rounded to one decimal.
    std::map<std::string, double> percentages;
    std::size_t non_vuln_total = 0;
};

TaxonomyReport taxonomy_report(const std::vector<GroundTruthLabel>& labels);

core::json taxonomy_to_json(const TaxonomyReport& report);

}  // namespace patchsieve::evaluator
