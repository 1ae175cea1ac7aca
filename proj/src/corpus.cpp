#include "lotkarank/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "record_json.hpp"

namespace lotkarank {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

const std::set<std::string, std::less<>> kKnownKeys = {
    "id", "title", "body", "authors", "issn", "journal", "publisher", "year"};

std::string require_string(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(fmt::format("missing key \"{}\"", key));
  if (!it->is_string()) throw std::invalid_argument(fmt::format("key \"{}\" must be a string", key));
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(fmt::format("key \"{}\" must be a string", key));
  return it->get<std::string>();
}

}  // namespace

std::string DocumentRecord::indexed_text() const {
  std::string text;
  text.reserve(title.size() + body.size() + 1);
  text += title;
  text += ' ';
  text += body;
  return text;
}

CorpusError::CorpusError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

TokenStream tokenize(std::string_view text) {
  TokenStream out;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      out.tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.tokens.push_back(std::move(current));
  return out;
}

std::string normalize_author(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (char c : trim(name)) {
    if (is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string normalize_issn(std::string_view issn) {
  std::string out(trim(issn));
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
  });
  return out;
}

namespace detail {

DocumentRecord record_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("record must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!kKnownKeys.contains(item.key())) {
      throw std::invalid_argument(fmt::format("unknown key \"{}\"", item.key()));
    }
  }

  DocumentRecord doc;
  doc.doc_id = std::string(trim(require_string(obj, "id")));
  if (doc.doc_id.empty()) throw std::invalid_argument("empty id");
  doc.title = require_string(obj, "title");
  doc.body = require_string(obj, "body");

  auto authors = obj.find("authors");
  if (authors == obj.end()) throw std::invalid_argument("missing key \"authors\"");
  if (!authors->is_array()) throw std::invalid_argument("key \"authors\" must be a list of strings");
  std::unordered_set<std::string> seen;
  for (const auto& a : *authors) {
    if (!a.is_string()) throw std::invalid_argument("key \"authors\" must be a list of strings");
    std::string name = normalize_author(a.get<std::string>());
    if (name.empty()) throw std::invalid_argument("empty author name");
    if (!seen.insert(name).second) {
      throw std::invalid_argument(fmt::format("duplicate author \"{}\"", name));
    }
    doc.authors.push_back(std::move(name));
  }

  if (auto issn = optional_string(obj, "issn")) {
    std::string norm = normalize_issn(*issn);
    if (!norm.empty()) doc.journal_issn = std::move(norm);
  }
  doc.journal_title = optional_string(obj, "journal");
  doc.publisher = optional_string(obj, "publisher");

  auto year = obj.find("year");
  if (year != obj.end() && !year->is_null()) {
    if (!year->is_number_integer()) throw std::invalid_argument("key \"year\" must be an integer");
    doc.year = year->get<int>();
  }
  return doc;
}

nlohmann::ordered_json record_to_json(const DocumentRecord& doc) {
  nlohmann::ordered_json obj;
  obj["id"] = doc.doc_id;
  obj["title"] = doc.title;
  obj["body"] = doc.body;
  obj["authors"] = doc.authors;
  if (doc.journal_issn) obj["issn"] = *doc.journal_issn;
  if (doc.journal_title) obj["journal"] = *doc.journal_title;
  if (doc.publisher) obj["publisher"] = *doc.publisher;
  if (doc.year) obj["year"] = *doc.year;
  return obj;
}

}  // namespace detail

std::vector<DocumentRecord> parse_corpus(std::istream& in) {
  std::vector<DocumentRecord> docs;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw CorpusError(line_no, fmt::format("malformed record: {}", e.what()));
    }

    DocumentRecord doc;
    try {
      doc = detail::record_from_json(obj);
    } catch (const std::exception& e) {
      throw CorpusError(line_no, e.what());
    }
    if (!ids.insert(doc.doc_id).second) {
      throw CorpusError(line_no, fmt::format("duplicate doc id \"{}\"", doc.doc_id));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<DocumentRecord> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open corpus file {}", path));
  return parse_corpus(in);
}

void serialize_corpus(const std::vector<DocumentRecord>& docs, std::ostream& out) {
  for (const auto& doc : docs) out << detail::record_to_json(doc).dump() << '\n';
}

}  // namespace lotkarank
