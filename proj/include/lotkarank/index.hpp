#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lotkarank/corpus.hpp"

namespace lotkarank {

struct Posting {
  std::string doc_id;
  std::size_t term_frequency = 0;

  bool operator==(const Posting&) const = default;
};

/// Term -> postings index over title + body. Immutable once built; safe to
/// share across threads for concurrent searches.
///
/// Postings are sorted by doc_id, so two builds over the same documents in
/// any input order compare equal.
class InvertedIndex {
 public:
  /// Throws std::invalid_argument on an empty corpus or duplicate doc ids.
  static InvertedIndex build(std::vector<DocumentRecord> docs);

  std::size_t corpus_size() const { return docs_.size(); }
  std::size_t term_count() const { return postings_.size(); }

  /// df_t; 0 for unindexed terms.
  std::size_t doc_freq(std::string_view term) const;
  /// tf_{t,d}; 0 when the document does not contain the term.
  std::size_t term_frequency(std::string_view term, std::string_view doc_id) const;
  /// Empty list for unindexed terms.
  const std::vector<Posting>& postings(std::string_view term) const;

  bool contains(std::string_view doc_id) const;
  /// Throws std::out_of_range for unknown ids.
  const DocumentRecord& document(std::string_view doc_id) const;
  /// All records, sorted by doc_id.
  const std::vector<DocumentRecord>& documents() const { return docs_; }
  const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const {
    return postings_;
  }

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  /// Throws std::runtime_error if the stream is not a saved index or its
  /// postings are inconsistent with the stored documents.
  static InvertedIndex load(std::istream& in);
  static InvertedIndex load(const std::string& path);

  bool operator==(const InvertedIndex&) const = default;

 private:
  InvertedIndex() = default;
  std::size_t position_of(std::string_view doc_id) const;

  std::vector<DocumentRecord> docs_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

struct ResultEntry {
  std::string doc_id;
  double score = 0.0;
  std::size_t rank = 0;

  bool operator==(const ResultEntry&) const = default;
};

/// Documents retrieved for one query. Entries are sorted by score
/// descending with doc_id ascending as tie-break, every score is > 0, and
/// ranks run 1..size() without gaps.
struct ResultSet {
  std::string query_id;
  std::vector<ResultEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// Sum over query tokens t of tf_{t,d} * ln(N / df_t). Repeated query
/// tokens count once per occurrence; unindexed tokens contribute 0.
/// Throws std::out_of_range for an unknown doc_id.
double tfidf_score(const TokenStream& query, std::string_view doc_id, const InvertedIndex& index);

/// Every document with a positive tf-idf score, ranked.
ResultSet search(std::string_view query, const InvertedIndex& index, std::string query_id = "q");
ResultSet search(const TokenStream& query, const InvertedIndex& index, std::string query_id = "q");

}  // namespace lotkarank
