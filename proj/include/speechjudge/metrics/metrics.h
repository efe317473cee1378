#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "speechjudge/core/record.h"

namespace speechjudge::metrics {

/// 1 for an exact match, 0 for win against lose, 0.5 when exactly one side is
/// a tie. Invalid predictions score 0.
double pair_agreement(VerdictLabel prediction, ComparisonLabel truth);

/// Fraction of exact matches; invalid counts as a mismatch.
/// Throws DomainError on empty or length-mismatched input.
double accuracy(std::span<const VerdictLabel> predictions,
                std::span<const ComparisonLabel> truths);

/// Mean pair_agreement. Same preconditions as accuracy.
double agreement(std::span<const VerdictLabel> predictions,
                 std::span<const ComparisonLabel> truths);

double invalid_rate(std::span<const VerdictLabel> predictions);

/// Fraction of order pairs marked consistent. Throws DomainError when empty.
double position_consistency(std::span<const OrderPair> pairs);

/// One judged (record, aspect) pair, the unit every metric folds over.
struct ScoredPair {
  std::string record_id;
  Aspect aspect = Aspect::helpfulness();
  ComparisonLabel truth = ComparisonLabel::kTie;
  VerdictLabel prediction;
  double combined_duration_s = 0.0;
};

struct AspectMetrics {
  double accuracy = 0.0;
  double agreement = 0.0;
  std::size_t n = 0;
  double invalid_rate = 0.0;
};

/// Half-open duration interval [lo, hi) in seconds; hi may be +inf.
struct Bucket {
  double lo = 0.0;
  double hi = 0.0;

  auto operator<=>(const Bucket&) const = default;
};

std::string to_string(const Bucket& bucket);

struct BucketMetrics {
  double accuracy = 0.0;
  double agreement = 0.0;
  std::size_t n = 0;
};

using BucketMap = std::map<Bucket, BucketMetrics>;

struct MetricReport {
  std::map<Aspect, AspectMetrics> per_aspect;
  std::optional<double> position_consistency;
  std::vector<std::uint64_t> run_seeds;
  std::optional<BucketMap> length_buckets;
  /// Judge calls that failed transport after their retry budget.
  std::size_t transport_errors = 0;
};

/// Buckets pairs by combined response duration using the intervals
/// [edges[i], edges[i+1]) plus open-ended intervals below the first and from
/// the last edge. Empty buckets are omitted. Throws DomainError unless the
/// edges are non-empty and strictly increasing.
BucketMap length_bucketed(std::span<const ScoredPair> pairs,
                          std::span<const double> bucket_edges_s);

/// Joins records with verdicts keyed by (record id, aspect) into scored
/// pairs. Record aspects without a verdict are skipped.
std::vector<ScoredPair> score_pairs(
    std::span<const PreferenceRecord> records,
    const std::map<std::pair<std::string, Aspect>, Verdict>& verdicts);

/// Per-aspect metrics for one run.
MetricReport compute_report(std::span<const ScoredPair> pairs,
                            std::uint64_t run_seed,
                            std::span<const OrderPair> order_pairs = {},
                            std::optional<std::vector<double>> bucket_edges_s = {});

/// Field-wise arithmetic mean of several runs with concatenated seeds.
/// Throws DomainError when the runs do not cover the same aspects.
MetricReport aggregate_runs(std::span<const MetricReport> runs);

nlohmann::json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& j);

/// Plain-text table: one column per aspect, an accuracy block and an agreement
/// block, values in percent.
std::string render_table(const MetricReport& report, std::string_view row_label);

}  // namespace speechjudge::metrics
