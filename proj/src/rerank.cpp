#include "lotkarank/rerank.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lotkarank {

namespace {

void assign_ranks(std::vector<RankedEntry>& entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = i + 1;
}

RankedList make_list(const ResultSet& rs, const RankingConfig& config) {
  RankedList list;
  list.query_id = rs.query_id;
  list.mode = config.mode;
  list.run_tag = config.run_tag();
  return list;
}

}  // namespace

std::string_view to_string(RankingMode mode) {
  switch (mode) {
    case RankingMode::Tfidf:
      return "tfidf";
    case RankingMode::Bradford:
      return "bradford";
    case RankingMode::Lotka:
      return "lotka";
    case RankingMode::Combined:
      return "combined";
  }
  return "unknown";
}

RankingMode parse_ranking_mode(std::string_view name) {
  if (name == "tfidf") return RankingMode::Tfidf;
  if (name == "brad" || name == "bradford") return RankingMode::Bradford;
  if (name == "lotka") return RankingMode::Lotka;
  if (name == "combined") return RankingMode::Combined;
  throw std::invalid_argument(
      fmt::format("unknown ranking mode \"{}\" (expected tfidf, brad, lotka or combined)", name));
}

std::string_view to_string(MissingPolicy policy) {
  return policy == MissingPolicy::Drop ? "drop" : "passthrough";
}

MissingPolicy parse_missing_policy(std::string_view name) {
  if (name == "drop") return MissingPolicy::Drop;
  if (name == "passthrough") return MissingPolicy::Passthrough;
  throw std::invalid_argument(fmt::format("unknown missing policy \"{}\" (expected drop or passthrough)", name));
}

RankingConfig RankingConfig::tfidf() { return RankingConfig{}; }

RankingConfig RankingConfig::bradford() {
  return RankingConfig{RankingMode::Bradford, EntityField::Journal, 1.0, MissingPolicy::Drop};
}

RankingConfig RankingConfig::lotka() {
  return RankingConfig{RankingMode::Lotka, EntityField::Author, 1.0, MissingPolicy::Drop};
}

RankingConfig RankingConfig::combined(EntityField field, double k, MissingPolicy policy) {
  return RankingConfig{RankingMode::Combined, field, k, policy};
}

EntityField RankingConfig::effective_field() const {
  validate();
  switch (mode) {
    case RankingMode::Bradford:
      return EntityField::Journal;
    case RankingMode::Lotka:
      return EntityField::Author;
    default:
      return field.value_or(EntityField::Journal);
  }
}

void RankingConfig::validate() const {
  if (!std::isfinite(k)) throw std::invalid_argument("k must be finite");
  if (mode == RankingMode::Bradford && field && *field != EntityField::Journal) {
    throw std::invalid_argument("bradford mode ranks by journal, not author");
  }
  if (mode == RankingMode::Lotka && field && *field != EntityField::Author) {
    throw std::invalid_argument("lotka mode ranks by author, not journal");
  }
  if (mode == RankingMode::Combined && !field) {
    throw std::invalid_argument("combined mode needs an entity field");
  }
  if (mode != RankingMode::Combined && missing_policy == MissingPolicy::Passthrough) {
    throw std::invalid_argument("passthrough missing policy applies to combined mode only");
  }
}

std::string RankingConfig::run_tag() const {
  if (mode != RankingMode::Combined) return std::string(to_string(mode));
  std::string k_text = fmt::format("{}", k);
  if (k_text.find_first_of(".eni") == std::string::npos) k_text += ".0";
  return fmt::format("combined_k{}", k_text);
}

double combined_score(double tfidf, std::size_t ef, std::size_t n, double k) {
  if (!(tfidf > 0.0) || !std::isfinite(tfidf)) {
    throw std::invalid_argument(fmt::format("tfidf score must be positive, got {}", tfidf));
  }
  if (ef == 0) throw std::invalid_argument("entity frequency 0: apply the missing policy first");
  if (ef > n) throw std::invalid_argument(fmt::format("entity frequency {} exceeds result size {}", ef, n));
  if (!std::isfinite(k)) throw std::invalid_argument("k must be finite");
  return tfidf * std::pow(static_cast<double>(ef) / static_cast<double>(n), k);
}

RankedList pure_frequency_rerank(const ResultSet& rs, EntityField field, const InvertedIndex& index) {
  RankingConfig config = field == EntityField::Journal ? RankingConfig::bradford() : RankingConfig::lotka();
  RankedList list = make_list(rs, config);

  const auto table = entity_frequencies(rs, field, index);
  struct Keyed {
    std::size_t ef;
    const ResultEntry* entry;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(rs.size());
  for (const auto& entry : rs.entries) {
    if (auto ef = doc_entity_frequency(entry.doc_id, table, index)) {
      keyed.push_back({*ef, &entry});
    } else {
      ++list.dropped;
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.ef != b.ef) return a.ef > b.ef;
    if (a.entry->score != b.entry->score) return a.entry->score > b.entry->score;
    return a.entry->doc_id < b.entry->doc_id;
  });

  list.entries.reserve(keyed.size());
  for (const auto& k : keyed) list.entries.push_back({k.entry->doc_id, static_cast<double>(k.ef), 0});
  assign_ranks(list.entries);
  return list;
}

RankedList rerank(const ResultSet& rs, const RankingConfig& config, const InvertedIndex& index) {
  config.validate();
  switch (config.mode) {
    case RankingMode::Tfidf: {
      RankedList list = make_list(rs, config);
      list.entries.reserve(rs.size());
      for (const auto& e : rs.entries) list.entries.push_back({e.doc_id, e.score, 0});
      assign_ranks(list.entries);
      return list;
    }
    case RankingMode::Bradford:
    case RankingMode::Lotka:
      return pure_frequency_rerank(rs, config.effective_field(), index);
    case RankingMode::Combined:
      break;
  }

  RankedList list = make_list(rs, config);
  const auto table = entity_frequencies(rs, *config.field, index);
  const std::size_t n = rs.size();
  for (const auto& entry : rs.entries) {
    auto ef = doc_entity_frequency(entry.doc_id, table, index);
    if (ef) {
      list.entries.push_back({entry.doc_id, combined_score(entry.score, *ef, n, config.k), 0});
    } else if (config.missing_policy == MissingPolicy::Passthrough) {
      list.entries.push_back({entry.doc_id, entry.score, 0});
    } else {
      ++list.dropped;
    }
  }
  std::sort(list.entries.begin(), list.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  assign_ranks(list.entries);
  return list;
}

void write_run(const RankedList& list, std::ostream& out) {
  for (const auto& e : list.entries) {
    out << fmt::format("{} Q0 {} {} {:.6f} {}\n", list.query_id, e.doc_id, e.rank, e.score, list.run_tag);
  }
}

}  // namespace lotkarank
