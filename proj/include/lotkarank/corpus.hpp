#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lotkarank {

/// One bibliographic metadata entry.
///
/// Text fields (title, body) feed the term index; entity fields (authors,
/// journal_issn) feed the informetric factors. Records produced by
/// parse_corpus() always satisfy:
///   - doc_id is non-empty and unique within the corpus,
///   - authors holds no empty and no duplicate names,
///   - journal_issn, when set, is non-empty and uppercased.
struct DocumentRecord {
  std::string doc_id;
  std::string title;
  std::string body;
  std::vector<std::string> authors;
  std::optional<std::string> journal_issn;
  std::optional<std::string> journal_title;
  std::optional<std::string> publisher;
  std::optional<int> year;

  /// Text that gets indexed: title and body joined by a space.
  std::string indexed_text() const;

  bool operator==(const DocumentRecord&) const = default;
};

/// Normalized terms in source order. Every token is non-empty, lowercase
/// and free of whitespace.
struct TokenStream {
  std::vector<std::string> tokens;

  bool operator==(const TokenStream&) const = default;
};

/// Raised for malformed corpus input. line() is 1-based, 0 when the error
/// is not tied to a single line (e.g. duplicate ids report the second line).
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Splits on every ASCII character that is not a letter or digit and
/// lowercases ASCII letters. Bytes >= 0x80 are kept as word characters so
/// UTF-8 encoded letters stay inside their token.
TokenStream tokenize(std::string_view text);

/// Trims, collapses internal whitespace runs to one space; case preserved.
std::string normalize_author(std::string_view name);

/// Trims and uppercases. Hyphens are kept.
std::string normalize_issn(std::string_view issn);

/// Parses a JSON-lines corpus: one object per line with keys id, title,
/// body, authors and optional issn, journal, publisher, year. Blank lines
/// are skipped. Throws CorpusError naming the line for malformed records,
/// unknown keys, or duplicate ids.
std::vector<DocumentRecord> parse_corpus(std::istream& in);
std::vector<DocumentRecord> load_corpus(const std::string& path);

/// Inverse of parse_corpus(): one line per record, in order.
void serialize_corpus(const std::vector<DocumentRecord>& docs, std::ostream& out);

}  // namespace lotkarank
