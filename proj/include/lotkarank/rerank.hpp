#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lotkarank/index.hpp"
#include "lotkarank/informetrics.hpp"

namespace lotkarank {

enum class RankingMode {
  Tfidf,     // tf-idf baseline, order unchanged
  Bradford,  // journal frequency first, tf-idf inside each journal
  Lotka,     // author frequency first, tf-idf inside each author group
  Combined,  // tfidf * (ef / N)^k
};

/// What happens to documents that lack the entity field.
enum class MissingPolicy {
  Drop,         // removed and counted in RankedList::dropped
  Passthrough,  // kept with the entity factor taken as 1 (Combined only)
};

std::string_view to_string(RankingMode mode);
/// Accepts "tfidf", "brad"/"bradford", "lotka", "combined".
RankingMode parse_ranking_mode(std::string_view name);
std::string_view to_string(MissingPolicy policy);
MissingPolicy parse_missing_policy(std::string_view name);

struct RankingConfig {
  RankingMode mode = RankingMode::Tfidf;
  /// Bradford implies Journal and Lotka implies Author when unset;
  /// Combined requires it.
  std::optional<EntityField> field;
  /// Weighting exponent for Combined. k > 0 favours high-frequency
  /// entities, k < 0 the long tail.
  double k = 1.0;
  MissingPolicy missing_policy = MissingPolicy::Drop;

  static RankingConfig tfidf();
  static RankingConfig bradford();
  static RankingConfig lotka();
  static RankingConfig combined(EntityField field, double k,
                                MissingPolicy policy = MissingPolicy::Drop);

  /// Field after applying the mode's implied default. Throws like validate().
  EntityField effective_field() const;
  /// Throws std::invalid_argument on a mode/field mismatch, a missing field
  /// for Combined, a non-finite k, or Passthrough outside Combined.
  void validate() const;
  /// Run-file tag: "tfidf", "bradford", "lotka", or "combined_k<k>" where k
  /// always carries a decimal point ("combined_k1.0", "combined_k-0.5").
  std::string run_tag() const;
};

struct RankedEntry {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;

  bool operator==(const RankedEntry&) const = default;
};

struct RankedList {
  std::string query_id;
  RankingMode mode = RankingMode::Tfidf;
  std::string run_tag;
  std::vector<RankedEntry> entries;
  std::size_t dropped = 0;

  std::size_t size() const { return entries.size(); }
};

/// tfidf * (ef / n)^k. Throws std::invalid_argument unless tfidf > 0,
/// 1 <= ef <= n and k is finite.
double combined_score(double tfidf, std::size_t ef, std::size_t n, double k);

/// Orders field-bearing documents by (ef desc, tfidf desc, doc_id asc) with
/// ef as the final score. Documents without the field are dropped.
RankedList pure_frequency_rerank(const ResultSet& rs, EntityField field, const InvertedIndex& index);

RankedList rerank(const ResultSet& rs, const RankingConfig& config, const InvertedIndex& index);

/// One line per entry: "query_id Q0 doc_id rank score run_tag", score with
/// 6 decimals.
void write_run(const RankedList& list, std::ostream& out);

}  // namespace lotkarank
