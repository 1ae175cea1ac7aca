#include "lotkarank/index.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "record_json.hpp"

namespace lotkarank {

namespace {

constexpr const char* kFormatTag = "lotkarank-index";
constexpr int kFormatVersion = 1;

const std::vector<Posting> kNoPostings;

}  // namespace

InvertedIndex InvertedIndex::build(std::vector<DocumentRecord> docs) {
  if (docs.empty()) throw std::invalid_argument("cannot index an empty corpus");
  std::sort(docs.begin(), docs.end(),
            [](const DocumentRecord& a, const DocumentRecord& b) { return a.doc_id < b.doc_id; });
  for (std::size_t i = 1; i < docs.size(); ++i) {
    if (docs[i].doc_id == docs[i - 1].doc_id) {
      throw std::invalid_argument(fmt::format("duplicate doc id \"{}\"", docs[i].doc_id));
    }
  }

  InvertedIndex index;
  // docs are visited in id order, so each postings list is appended sorted.
  for (const auto& doc : docs) {
    std::map<std::string, std::size_t> counts;
    for (auto& token : tokenize(doc.indexed_text()).tokens) ++counts[std::move(token)];
    for (auto& [term, tf] : counts) index.postings_[term].push_back(Posting{doc.doc_id, tf});
  }
  index.docs_ = std::move(docs);
  return index;
}

std::size_t InvertedIndex::doc_freq(std::string_view term) const {
  return postings(term).size();
}

const std::vector<Posting>& InvertedIndex::postings(std::string_view term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? kNoPostings : it->second;
}

std::size_t InvertedIndex::term_frequency(std::string_view term, std::string_view doc_id) const {
  const auto& list = postings(term);
  auto it = std::lower_bound(list.begin(), list.end(), doc_id,
                             [](const Posting& p, std::string_view id) { return p.doc_id < id; });
  return (it != list.end() && it->doc_id == doc_id) ? it->term_frequency : 0;
}

std::size_t InvertedIndex::position_of(std::string_view doc_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), doc_id,
                             [](const DocumentRecord& d, std::string_view id) { return d.doc_id < id; });
  if (it == docs_.end() || it->doc_id != doc_id) {
    throw std::out_of_range(fmt::format("unknown doc id \"{}\"", doc_id));
  }
  return static_cast<std::size_t>(it - docs_.begin());
}

bool InvertedIndex::contains(std::string_view doc_id) const {
  auto it = std::lower_bound(docs_.begin(), docs_.end(), doc_id,
                             [](const DocumentRecord& d, std::string_view id) { return d.doc_id < id; });
  return it != docs_.end() && it->doc_id == doc_id;
}

const DocumentRecord& InvertedIndex::document(std::string_view doc_id) const {
  return docs_[position_of(doc_id)];
}

void InvertedIndex::save(std::ostream& out) const {
  nlohmann::ordered_json root;
  root["format"] = kFormatTag;
  root["version"] = kFormatVersion;
  auto& documents = root["documents"] = nlohmann::ordered_json::array();
  for (const auto& doc : docs_) documents.push_back(detail::record_to_json(doc));
  auto& postings = root["postings"] = nlohmann::ordered_json::object();
  for (const auto& [term, list] : postings_) {
    auto& entries = postings[term] = nlohmann::ordered_json::array();
    for (const auto& p : list) entries.push_back({p.doc_id, p.term_frequency});
  }
  out << root.dump() << '\n';
  if (!out) throw std::runtime_error("failed to write index");
}

void InvertedIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path));
  save(out);
}

InvertedIndex InvertedIndex::load(std::istream& in) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(fmt::format("malformed index: {}", e.what()));
  }
  if (!root.is_object() || root.value("format", "") != kFormatTag) {
    throw std::runtime_error("not a lotkarank index");
  }
  if (root.value("version", 0) != kFormatVersion) {
    throw std::runtime_error("unsupported index version");
  }

  std::vector<DocumentRecord> docs;
  try {
    for (const auto& obj : root.at("documents")) docs.push_back(detail::record_from_json(obj));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("malformed index document: {}", e.what()));
  }
  InvertedIndex index = build(std::move(docs));

  // The stored postings are redundant with the documents; they act as a
  // checksum against hand-edited or truncated files.
  std::map<std::string, std::vector<Posting>, std::less<>> stored;
  try {
    for (const auto& [term, list] : root.at("postings").items()) {
      auto& out = stored[term];
      for (const auto& p : list) {
        out.push_back(Posting{p.at(0).get<std::string>(), p.at(1).get<std::size_t>()});
      }
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("malformed index postings: {}", e.what()));
  }
  if (stored != index.postings_) throw std::runtime_error("index postings do not match documents");
  return index;
}

InvertedIndex InvertedIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open index file {}", path));
  return load(in);
}

double tfidf_score(const TokenStream& query, std::string_view doc_id, const InvertedIndex& index) {
  if (!index.contains(doc_id)) throw std::out_of_range(fmt::format("unknown doc id \"{}\"", doc_id));
  const double n = static_cast<double>(index.corpus_size());
  double score = 0.0;
  for (const auto& term : query.tokens) {
    std::size_t df = index.doc_freq(term);
    if (df == 0) continue;
    std::size_t tf = index.term_frequency(term, doc_id);
    if (tf == 0) continue;
    score += static_cast<double>(tf) * std::log(n / static_cast<double>(df));
  }
  return score;
}

ResultSet search(std::string_view query, const InvertedIndex& index, std::string query_id) {
  return search(tokenize(query), index, std::move(query_id));
}

ResultSet search(const TokenStream& query, const InvertedIndex& index, std::string query_id) {
  const double n = static_cast<double>(index.corpus_size());
  // Accumulates per term in query order, the same summation order as
  // tfidf_score(), so both paths give bit-identical scores.
  std::unordered_map<std::string_view, double> scores;
  for (const auto& term : query.tokens) {
    const auto& list = index.postings(term);
    if (list.empty()) continue;
    const double idf = std::log(n / static_cast<double>(list.size()));
    for (const auto& p : list) scores[p.doc_id] += static_cast<double>(p.term_frequency) * idf;
  }

  ResultSet rs;
  rs.query_id = std::move(query_id);
  for (const auto& [doc_id, score] : scores) {
    if (score > 0.0) rs.entries.push_back(ResultEntry{std::string(doc_id), score, 0});
  }
  std::sort(rs.entries.begin(), rs.entries.end(), [](const ResultEntry& a, const ResultEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  for (std::size_t i = 0; i < rs.entries.size(); ++i) rs.entries[i].rank = i + 1;
  return rs;
}

}  // namespace lotkarank
