#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotkarank/index.hpp"

namespace lotkarank {

/// Which metadata entity drives the informetric factor.
enum class EntityField {
  Journal,  // single-valued: journal_issn
  Author,   // multi-valued: authors
};

std::string_view to_string(EntityField field);
/// Accepts "journal" / "author" (also "issn" / "authors"). Throws
/// std::invalid_argument otherwise.
EntityField parse_entity_field(std::string_view name);

/// Entity values of one document for `field`; empty when the field is missing.
std::vector<std::string> entity_values(const DocumentRecord& doc, EntityField field);

/// Entity value -> number of result-set documents carrying it.
///
/// For Journal the counts sum to covered_docs; for Author a document adds
/// one to each of its distinct authors, so the sum can exceed covered_docs.
struct EntityFrequencyTable {
  EntityField field = EntityField::Journal;
  std::map<std::string, std::size_t, std::less<>> counts;
  std::size_t covered_docs = 0;
  std::size_t result_size = 0;
};

EntityFrequencyTable entity_frequencies(const ResultSet& rs, EntityField field,
                                        const InvertedIndex& index);

/// ef(d): the journal's count, or the largest count among the document's
/// authors. nullopt when the document lacks the field.
std::optional<std::size_t> doc_entity_frequency(std::string_view doc_id,
                                                const EntityFrequencyTable& table,
                                                const InvertedIndex& index);

struct RankFrequencyPoint {
  std::size_t rank = 0;
  std::size_t frequency = 0;
  std::string entity;

  bool operator==(const RankFrequencyPoint&) const = default;
};

/// Counts sorted descending (ties by entity ascending), ranked from 1.
std::vector<RankFrequencyPoint> rank_frequency_series(const EntityFrequencyTable& table);

/// f(x) = c * x^-alpha fitted by least squares on (ln x, ln f).
struct PowerLawFit {
  double c = 0.0;
  double alpha = 0.0;
  double r_squared = 0.0;
  std::size_t points_used = 0;
};

struct SeriesPoint {
  double rank = 0.0;
  double frequency = 0.0;
};

/// Throws std::invalid_argument for fewer than two points, a non-positive
/// frequency, a rank below 1, or when all ranks coincide. Frequencies may be
/// fractional so exact real-valued series can be fitted. When the fit has
/// zero residual (including a flat series) r_squared is 1.
PowerLawFit fit_power_law(std::span<const SeriesPoint> series);
PowerLawFit fit_power_law(std::span<const RankFrequencyPoint> series);

/// "rank,frequency,entity" with one row per point.
void write_rank_frequency_csv(std::span<const RankFrequencyPoint> series, std::ostream& out);
/// "log_rank,log_frequency" (natural logs, 6 decimals) for log-log plots.
void write_log_log_csv(std::span<const RankFrequencyPoint> series, std::ostream& out);

}  // namespace lotkarank
