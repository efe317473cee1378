#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace speechjudge::filter {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t total() const { return substitutions + insertions + deletions; }
};

/// Lowercases, strips punctuation and splits on whitespace.
std::vector<std::string> normalize_words(std::string_view text);

/// Minimal word-level Levenshtein alignment of `hypothesis` against
/// `reference`. Ties between equally short alignments prefer substitutions.
EditCounts align_words(std::span<const std::string> reference,
                       std::span<const std::string> hypothesis);

/// Edit operations divided by the reference length. May exceed 1.
/// Throws UndefinedWerError for an empty reference.
double word_error_rate(std::span<const std::string> reference,
                       std::span<const std::string> hypothesis);

/// Normalizes both texts, then scores them.
double word_error_rate(std::string_view reference_text,
                       std::string_view hypothesis_text);

/// Maximum WER tolerated for a transcript of `word_count` words: 0.2 below
/// 400 words, falling linearly to 0 at 600 words and beyond.
double wer_threshold(std::size_t word_count);

}  // namespace speechjudge::filter
