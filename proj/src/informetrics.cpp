#include "lotkarank/informetrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lotkarank {

namespace {

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string_view to_string(EntityField field) {
  switch (field) {
    case EntityField::Journal:
      return "journal";
    case EntityField::Author:
      return "author";
  }
  return "unknown";
}

EntityField parse_entity_field(std::string_view name) {
  if (name == "journal" || name == "issn") return EntityField::Journal;
  if (name == "author" || name == "authors") return EntityField::Author;
  throw std::invalid_argument(fmt::format("unknown entity field \"{}\" (expected journal or author)", name));
}

std::vector<std::string> entity_values(const DocumentRecord& doc, EntityField field) {
  switch (field) {
    case EntityField::Journal:
      if (doc.journal_issn && !doc.journal_issn->empty()) return {*doc.journal_issn};
      return {};
    case EntityField::Author:
      return doc.authors;
  }
  return {};
}

EntityFrequencyTable entity_frequencies(const ResultSet& rs, EntityField field,
                                        const InvertedIndex& index) {
  EntityFrequencyTable table;
  table.field = field;
  table.result_size = rs.size();
  for (const auto& entry : rs.entries) {
    auto values = entity_values(index.document(entry.doc_id), field);
    if (values.empty()) continue;
    ++table.covered_docs;
    for (auto& v : values) ++table.counts[std::move(v)];
  }
  return table;
}

std::optional<std::size_t> doc_entity_frequency(std::string_view doc_id,
                                                const EntityFrequencyTable& table,
                                                const InvertedIndex& index) {
  std::optional<std::size_t> best;
  for (const auto& v : entity_values(index.document(doc_id), table.field)) {
    auto it = table.counts.find(v);
    if (it == table.counts.end()) continue;
    if (!best || it->second > *best) best = it->second;
  }
  return best;
}

std::vector<RankFrequencyPoint> rank_frequency_series(const EntityFrequencyTable& table) {
  std::vector<RankFrequencyPoint> series;
  series.reserve(table.counts.size());
  for (const auto& [entity, count] : table.counts) series.push_back({0, count, entity});
  // counts is keyed by entity, so a stable sort keeps ties in entity order.
  std::stable_sort(series.begin(), series.end(),
                   [](const auto& a, const auto& b) { return a.frequency > b.frequency; });
  for (std::size_t i = 0; i < series.size(); ++i) series[i].rank = i + 1;
  return series;
}

PowerLawFit fit_power_law(std::span<const SeriesPoint> series) {
  if (series.size() < 2) throw std::invalid_argument("power-law fit needs at least 2 points");
  const auto n = static_cast<double>(series.size());

  std::vector<double> xs, ys;
  xs.reserve(series.size());
  ys.reserve(series.size());
  for (const auto& p : series) {
    if (!(p.frequency > 0.0) || !std::isfinite(p.frequency)) {
      throw std::invalid_argument(fmt::format("frequency {} is not positive", p.frequency));
    }
    if (!(p.rank >= 1.0)) throw std::invalid_argument(fmt::format("rank {} below 1", p.rank));
    xs.push_back(std::log(p.rank));
    ys.push_back(std::log(p.frequency));
  }

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("power-law fit needs at least 2 distinct ranks");

  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }

  PowerLawFit fit;
  fit.alpha = -slope;
  fit.c = std::exp(intercept);
  fit.points_used = series.size();
  // A flat series has no variance to explain; treat it as a perfect fit
  // rather than dividing rounding noise by rounding noise.
  if (syy <= 1e-24 * n * (1.0 + mean_y * mean_y)) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

PowerLawFit fit_power_law(std::span<const RankFrequencyPoint> series) {
  std::vector<SeriesPoint> points;
  points.reserve(series.size());
  for (const auto& p : series) {
    points.push_back({static_cast<double>(p.rank), static_cast<double>(p.frequency)});
  }
  return fit_power_law(std::span<const SeriesPoint>(points));
}

void write_rank_frequency_csv(std::span<const RankFrequencyPoint> series, std::ostream& out) {
  out << "rank,frequency,entity\n";
  for (const auto& p : series) out << p.rank << ',' << p.frequency << ',' << csv_field(p.entity) << '\n';
}

void write_log_log_csv(std::span<const RankFrequencyPoint> series, std::ostream& out) {
  out << "log_rank,log_frequency\n";
  for (const auto& p : series) {
    out << fmt::format("{:.6f},{:.6f}\n", std::log(static_cast<double>(p.rank)),
                       std::log(static_cast<double>(p.frequency)));
  }
}

}  // namespace lotkarank
