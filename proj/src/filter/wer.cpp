#include "speechjudge/filter/wer.h"

#include <algorithm>
#include <cctype>

#include "speechjudge/core/errors.h"

namespace speechjudge::filter {

std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else if (std::ispunct(c)) {
      continue;
    } else {
      current += static_cast<char>(std::tolower(c));
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

EditCounts align_words(std::span<const std::string> reference,
                       std::span<const std::string> hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  // cost[i][j]: edits turning reference[0, i) into hypothesis[0, j).
  std::vector<std::vector<std::size_t>> cost(n + 1,
                                             std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub =
          cost[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      cost[i][j] = std::min({sub, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  EditCounts counts;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (cost[i][j] == cost[i - 1][j - 1] + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double word_error_rate(std::span<const std::string> reference,
                       std::span<const std::string> hypothesis) {
  if (reference.empty()) {
    throw UndefinedWerError("word error rate is undefined for an empty reference");
  }
  return static_cast<double>(align_words(reference, hypothesis).total()) /
         static_cast<double>(reference.size());
}

double word_error_rate(std::string_view reference_text,
                       std::string_view hypothesis_text) {
  const auto ref = normalize_words(reference_text);
  const auto hyp = normalize_words(hypothesis_text);
  return word_error_rate(ref, hyp);
}

double wer_threshold(std::size_t word_count) {
  if (word_count < 400) return 0.2;
  if (word_count < 600) return -static_cast<double>(word_count) / 1000.0 + 0.6;
  return 0.0;
}

}  // namespace speechjudge::filter
