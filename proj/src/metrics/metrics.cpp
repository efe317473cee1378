#include "speechjudge/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "speechjudge/core/errors.h"

namespace speechjudge::metrics {
namespace {

void check_inputs(std::span<const VerdictLabel> predictions,
                  std::span<const ComparisonLabel> truths) {
  if (predictions.empty()) throw DomainError("metric over an empty set");
  if (predictions.size() != truths.size()) {
    throw DomainError(fmt::format("{} predictions for {} truths",
                                  predictions.size(), truths.size()));
  }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_edge(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:g}", v);
}

double parse_edge(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::stod(s);
}

}  // namespace

double pair_agreement(VerdictLabel prediction, ComparisonLabel truth) {
  if (!prediction) return 0.0;
  if (*prediction == truth) return 1.0;
  if (*prediction == ComparisonLabel::kTie || truth == ComparisonLabel::kTie) {
    return 0.5;
  }
  return 0.0;
}

double accuracy(std::span<const VerdictLabel> predictions,
                std::span<const ComparisonLabel> truths) {
  check_inputs(predictions, truths);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] && *predictions[i] == truths[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double agreement(std::span<const VerdictLabel> predictions,
                 std::span<const ComparisonLabel> truths) {
  check_inputs(predictions, truths);
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    sum += pair_agreement(predictions[i], truths[i]);
  }
  return sum / static_cast<double>(predictions.size());
}

double invalid_rate(std::span<const VerdictLabel> predictions) {
  if (predictions.empty()) return 0.0;
  const auto invalid = std::ranges::count_if(
      predictions, [](const VerdictLabel& p) { return !p.has_value(); });
  return static_cast<double>(invalid) / static_cast<double>(predictions.size());
}

double position_consistency(std::span<const OrderPair> pairs) {
  if (pairs.empty()) throw DomainError("position consistency over an empty set");
  const auto consistent =
      std::ranges::count_if(pairs, [](const OrderPair& p) { return p.consistent; });
  return static_cast<double>(consistent) / static_cast<double>(pairs.size());
}

std::string to_string(const Bucket& bucket) {
  return fmt::format("[{},{})", format_edge(bucket.lo), format_edge(bucket.hi));
}

BucketMap length_bucketed(std::span<const ScoredPair> pairs,
                          std::span<const double> bucket_edges_s) {
  if (bucket_edges_s.empty()) throw DomainError("no bucket edges");
  for (std::size_t i = 1; i < bucket_edges_s.size(); ++i) {
    if (!(bucket_edges_s[i] > bucket_edges_s[i - 1])) {
      throw DomainError("bucket edges must be strictly increasing");
    }
  }
  std::map<Bucket, std::pair<std::vector<VerdictLabel>, std::vector<ComparisonLabel>>>
      grouped;
  for (const auto& p : pairs) {
    const auto upper = std::upper_bound(bucket_edges_s.begin(), bucket_edges_s.end(),
                                        p.combined_duration_s);
    const double lo = upper == bucket_edges_s.begin() ? -kInf : *(upper - 1);
    const double hi = upper == bucket_edges_s.end() ? kInf : *upper;
    auto& [preds, truths] = grouped[Bucket{lo, hi}];
    preds.push_back(p.prediction);
    truths.push_back(p.truth);
  }
  BucketMap out;
  for (const auto& [bucket, data] : grouped) {
    out[bucket] = BucketMetrics{accuracy(data.first, data.second),
                                agreement(data.first, data.second),
                                data.first.size()};
  }
  return out;
}

std::vector<ScoredPair> score_pairs(
    std::span<const PreferenceRecord> records,
    const std::map<std::pair<std::string, Aspect>, Verdict>& verdicts) {
  std::vector<ScoredPair> out;
  for (const auto& record : records) {
    for (const auto& [aspect, truth] : record.labels) {
      auto it = verdicts.find({record.id, aspect});
      if (it == verdicts.end()) continue;
      out.push_back(ScoredPair{record.id, aspect, truth, it->second.label,
                               record.combined_duration_s()});
    }
  }
  return out;
}

MetricReport compute_report(std::span<const ScoredPair> pairs,
                            std::uint64_t run_seed,
                            std::span<const OrderPair> order_pairs,
                            std::optional<std::vector<double>> bucket_edges_s) {
  MetricReport report;
  report.run_seeds.push_back(run_seed);
  std::map<Aspect, std::pair<std::vector<VerdictLabel>, std::vector<ComparisonLabel>>>
      by_aspect;
  for (const auto& p : pairs) {
    by_aspect[p.aspect].first.push_back(p.prediction);
    by_aspect[p.aspect].second.push_back(p.truth);
  }
  for (const auto& [aspect, data] : by_aspect) {
    report.per_aspect[aspect] =
        AspectMetrics{accuracy(data.first, data.second),
                      agreement(data.first, data.second), data.first.size(),
                      invalid_rate(data.first)};
  }
  if (!order_pairs.empty()) {
    report.position_consistency = position_consistency(order_pairs);
  }
  if (bucket_edges_s && !pairs.empty()) {
    report.length_buckets = length_bucketed(pairs, *bucket_edges_s);
  }
  return report;
}

MetricReport aggregate_runs(std::span<const MetricReport> runs) {
  if (runs.empty()) throw DomainError("no runs to aggregate");
  std::set<Aspect> aspects;
  for (const auto& [a, m] : runs.front().per_aspect) aspects.insert(a);
  for (const auto& run : runs) {
    std::set<Aspect> other;
    for (const auto& [a, m] : run.per_aspect) other.insert(a);
    if (other != aspects) throw DomainError("runs cover different aspect sets");
  }

  const double k = static_cast<double>(runs.size());
  MetricReport out;
  for (const auto& aspect : aspects) {
    AspectMetrics mean;
    double n = 0.0;
    for (const auto& run : runs) {
      const auto& m = run.per_aspect.at(aspect);
      mean.accuracy += m.accuracy;
      mean.agreement += m.agreement;
      mean.invalid_rate += m.invalid_rate;
      n += static_cast<double>(m.n);
    }
    mean.accuracy /= k;
    mean.agreement /= k;
    mean.invalid_rate /= k;
    mean.n = static_cast<std::size_t>(std::llround(n / k));
    out.per_aspect[aspect] = mean;
  }

  double consistency = 0.0;
  std::size_t with_consistency = 0;
  std::map<Bucket, std::pair<BucketMetrics, double>> buckets;
  bool any_buckets = false;
  for (const auto& run : runs) {
    out.run_seeds.insert(out.run_seeds.end(), run.run_seeds.begin(),
                         run.run_seeds.end());
    out.transport_errors += run.transport_errors;
    if (run.position_consistency) {
      consistency += *run.position_consistency;
      ++with_consistency;
    }
    if (run.length_buckets) {
      any_buckets = true;
      for (const auto& [bucket, m] : *run.length_buckets) {
        auto& [acc, count] = buckets[bucket];
        acc.accuracy += m.accuracy;
        acc.agreement += m.agreement;
        acc.n += m.n;
        count += 1.0;
      }
    }
  }
  if (with_consistency > 0) {
    out.position_consistency = consistency / static_cast<double>(with_consistency);
  }
  if (any_buckets) {
    BucketMap merged;
    for (const auto& [bucket, entry] : buckets) {
      const auto& [sum, count] = entry;
      merged[bucket] = BucketMetrics{
          sum.accuracy / count, sum.agreement / count,
          static_cast<std::size_t>(std::llround(static_cast<double>(sum.n) / count))};
    }
    out.length_buckets = std::move(merged);
  }
  return out;
}

nlohmann::json to_json(const MetricReport& report) {
  nlohmann::json per_aspect = nlohmann::json::object();
  for (const auto& [aspect, m] : report.per_aspect) {
    per_aspect[speechjudge::to_string(aspect)] = {{"accuracy", m.accuracy},
                                                  {"agreement", m.agreement},
                                                  {"n", m.n},
                                                  {"invalid_rate", m.invalid_rate}};
  }
  nlohmann::json j{{"per_aspect", per_aspect},
                   {"position_consistency",
                    report.position_consistency
                        ? nlohmann::json(*report.position_consistency)
                        : nlohmann::json(nullptr)},
                   {"run_seeds", report.run_seeds},
                   {"transport_errors", report.transport_errors}};
  if (report.length_buckets) {
    nlohmann::json buckets = nlohmann::json::array();
    for (const auto& [bucket, m] : *report.length_buckets) {
      buckets.push_back({{"lo", format_edge(bucket.lo)},
                         {"hi", format_edge(bucket.hi)},
                         {"accuracy", m.accuracy},
                         {"agreement", m.agreement},
                         {"n", m.n}});
    }
    j["length_buckets"] = buckets;
  } else {
    j["length_buckets"] = nullptr;
  }
  return j;
}

MetricReport report_from_json(const nlohmann::json& j) {
  MetricReport r;
  for (const auto& [key, m] : j.at("per_aspect").items()) {
    r.per_aspect[parse_aspect(key)] =
        AspectMetrics{m.at("accuracy").get<double>(), m.at("agreement").get<double>(),
                      m.at("n").get<std::size_t>(), m.at("invalid_rate").get<double>()};
  }
  if (auto it = j.find("position_consistency"); it != j.end() && !it->is_null()) {
    r.position_consistency = it->get<double>();
  }
  r.run_seeds = j.value("run_seeds", std::vector<std::uint64_t>{});
  r.transport_errors = j.value("transport_errors", std::size_t{0});
  if (auto it = j.find("length_buckets"); it != j.end() && !it->is_null()) {
    BucketMap buckets;
    for (const auto& b : *it) {
      buckets[Bucket{parse_edge(b.at("lo").get<std::string>()),
                     parse_edge(b.at("hi").get<std::string>())}] =
          BucketMetrics{b.at("accuracy").get<double>(), b.at("agreement").get<double>(),
                        b.at("n").get<std::size_t>()};
    }
    r.length_buckets = std::move(buckets);
  }
  return r;
}

std::string render_table(const MetricReport& report, std::string_view row_label) {
  const std::size_t label_width = std::max<std::size_t>(row_label.size(), 8);
  std::vector<std::string> heads;
  for (const auto& [aspect, m] : report.per_aspect) heads.push_back(aspect_short_name(aspect));
  const std::size_t col = 8;
  const std::size_t block = heads.size() * col;

  std::string out;
  out += fmt::format("{:<{}} | {:<{}} | {:<{}}\n", "", label_width, "Accuracy",
                     block, "Agreement", block);
  std::string head_row;
  for (const auto& h : heads) head_row += fmt::format("{:>{}}", h, col);
  out += fmt::format("{:<{}} | {} | {}\n", "Model", label_width, head_row, head_row);
  out += std::string(label_width + 6 + 2 * block, '-') + '\n';
  std::string acc_row;
  std::string agr_row;
  for (const auto& [aspect, m] : report.per_aspect) {
    acc_row += fmt::format("{:>{}.2f}", 100.0 * m.accuracy, col);
    agr_row += fmt::format("{:>{}.2f}", 100.0 * m.agreement, col);
  }
  out += fmt::format("{:<{}} | {} | {}\n", row_label, label_width, acc_row, agr_row);
  out += '\n';
  for (const auto& [aspect, m] : report.per_aspect) {
    out += fmt::format("{:<40} n={:<6} invalid={:.2f}%\n",
                       speechjudge::to_string(aspect), m.n, 100.0 * m.invalid_rate);
  }
  if (report.position_consistency) {
    out += fmt::format("position consistency: {:.2f}%\n",
                       100.0 * *report.position_consistency);
  }
  if (report.length_buckets) {
    out += "length buckets (combined seconds):\n";
    for (const auto& [bucket, m] : *report.length_buckets) {
      out += fmt::format("  {:<12} n={:<6} accuracy={:.2f}% agreement={:.2f}%\n",
                         to_string(bucket), m.n, 100.0 * m.accuracy,
                         100.0 * m.agreement);
    }
  }
  std::string seeds;
  for (auto s : report.run_seeds) seeds += (seeds.empty() ? "" : ",") + std::to_string(s);
  out += fmt::format("runs: {}  transport errors: {}\n", seeds, report.transport_errors);
  return out;
}

}  // namespace speechjudge::metrics
