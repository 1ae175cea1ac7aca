#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lotkarank/index.hpp"
#include "lotkarank/rerank.hpp"

namespace lotkarank {

struct Topic {
  std::string topic_id;
  std::string query_text;
};

/// Raised for malformed topic or qrels input; the message names the line.
class EvalInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lines of "topic_id<TAB>query_text". Blank lines are skipped; ids must be
/// unique.
std::vector<Topic> parse_topics(std::istream& in);
std::vector<Topic> load_topics(const std::string& path);

/// Graded judgments; a document is relevant iff its grade is > 0.
class QrelSet {
 public:
  /// Throws EvalInputError on a repeated (topic, doc) pair or a negative grade.
  void add(std::string topic_id, std::string doc_id, int grade);

  bool is_relevant(std::string_view topic_id, std::string_view doc_id) const;
  /// Number of judged-relevant documents for a topic.
  std::size_t relevant_count(std::string_view topic_id) const;
  std::vector<std::string> topic_ids() const;
  std::size_t size() const { return judgments_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, int, std::less<>> judgments_;
};

/// Four whitespace-separated columns per line: "topic_id 0 doc_id grade".
QrelSet parse_qrels(std::istream& in);
QrelSet load_qrels(const std::string& path);

/// Relevant documents among the first min(k, size) entries, divided by k.
/// Relevance is looked up under list.query_id. Throws for k == 0.
double precision_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k);

/// |top-k(a) ∩ top-k(b)| by doc_id. Throws for k == 0.
std::size_t overlap_at_k(const RankedList& a, const RankedList& b, std::size_t k);

inline constexpr std::array<std::size_t, 5> kPrecisionCutoffs = {5, 10, 20, 30, 100};
inline constexpr std::size_t kOverlapDepth = 10;

struct TopicModeMetrics {
  std::string topic_id;
  std::array<double, kPrecisionCutoffs.size()> precision{};
  std::size_t retrieved = 0;
  std::size_t relevant_retrieved = 0;
  std::size_t dropped = 0;
};

struct ModeReport {
  std::string label;  // run tag
  RankingConfig config;
  std::vector<TopicModeMetrics> topics;  // in topic-file order
  std::array<double, kPrecisionCutoffs.size()> mean_precision{};
  std::size_t total_retrieved = 0;
  std::size_t total_relevant_retrieved = 0;
  std::size_t total_dropped = 0;
};

struct OverlapSummary {
  std::size_t mode_a = 0;  // indices into EvalReport::modes
  std::size_t mode_b = 0;
  double mean_overlap = 0.0;
};

struct EvalReport {
  std::vector<ModeReport> modes;       // in config order
  std::vector<OverlapSummary> overlaps;  // every pair a < b, mean top-10 overlap
  std::size_t topic_count = 0;
  std::size_t empty_result_topics = 0;  // topics whose tf-idf search returned nothing
  std::size_t ignored_qrel_topics = 0;  // qrels topics absent from the topic list
};

/// Ranked lists for every topic under every config.
struct TopicRuns {
  std::vector<std::vector<RankedList>> lists;  // lists[config][topic]
  std::vector<std::size_t> result_sizes;       // tf-idf result size per topic
};

/// Searches and re-ranks every topic. Topics are processed in parallel and
/// stored by topic position, so the output does not depend on scheduling.
TopicRuns run_topics(const InvertedIndex& index, std::span<const Topic> topics,
                     std::span<const RankingConfig> configs);

/// Metrics over precomputed runs. Macro averages are over all topics;
/// topics that retrieve nothing count as zero precision.
EvalReport evaluate_runs(const TopicRuns& runs, std::span<const Topic> topics, const QrelSet& qrels,
                         std::span<const RankingConfig> configs);

/// run_topics() followed by evaluate_runs().
EvalReport run_evaluation(const InvertedIndex& index, std::span<const Topic> topics,
                          const QrelSet& qrels, std::span<const RankingConfig> configs);

/// CSV: header "topic_id,mode,retrieved,relevant_retrieved,dropped,p5,p10,p20,p30,p100",
/// one row per (topic, mode), then one "ALL" row per mode holding totals
/// and macro-averaged precision.
void write_report_csv(const EvalReport& report, std::ostream& out);
/// CSV: "mode_a,mode_b,mean_overlap_at_10".
void write_overlap_csv(const EvalReport& report, std::ostream& out);
/// Fixed-width p@k grid, one row per mode, plus set sizes and overlaps.
void write_precision_table(const EvalReport& report, std::ostream& out);

}  // namespace lotkarank
