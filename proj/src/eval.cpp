#include "lotkarank/eval.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace lotkarank {

namespace {

void check_cutoff(std::size_t k) {
  if (k == 0) throw std::invalid_argument("cutoff k must be at least 1");
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

std::vector<Topic> parse_topics(std::istream& in) {
  std::vector<Topic> topics;
  std::unordered_set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (blank(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw EvalInputError(fmt::format("topics line {}: expected \"topic_id<TAB>query\"", line_no));
    }
    Topic topic{std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))};
    if (topic.topic_id.empty() || topic.topic_id.find_first_of(" \t") != std::string::npos) {
      throw EvalInputError(fmt::format("topics line {}: invalid topic id", line_no));
    }
    if (!seen.insert(topic.topic_id).second) {
      throw EvalInputError(fmt::format("topics line {}: duplicate topic id \"{}\"", line_no, topic.topic_id));
    }
    topics.push_back(std::move(topic));
  }
  return topics;
}

std::vector<Topic> load_topics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalInputError(fmt::format("cannot open topics file {}", path));
  return parse_topics(in);
}

void QrelSet::add(std::string topic_id, std::string doc_id, int grade) {
  if (grade < 0) throw EvalInputError(fmt::format("negative grade {} for {}/{}", grade, topic_id, doc_id));
  auto key = std::make_pair(std::move(topic_id), std::move(doc_id));
  if (judgments_.contains(key)) {
    throw EvalInputError(fmt::format("duplicate judgment for topic {} doc {}", key.first, key.second));
  }
  judgments_.emplace(std::move(key), grade);
}

bool QrelSet::is_relevant(std::string_view topic_id, std::string_view doc_id) const {
  auto it = judgments_.find(std::make_pair(std::string(topic_id), std::string(doc_id)));
  return it != judgments_.end() && it->second > 0;
}

std::size_t QrelSet::relevant_count(std::string_view topic_id) const {
  std::size_t n = 0;
  for (const auto& [key, grade] : judgments_) {
    if (key.first == topic_id && grade > 0) ++n;
  }
  return n;
}

std::vector<std::string> QrelSet::topic_ids() const {
  std::vector<std::string> ids;
  for (const auto& [key, grade] : judgments_) {
    if (ids.empty() || ids.back() != key.first) ids.push_back(key.first);
  }
  return ids;
}

QrelSet parse_qrels(std::istream& in) {
  QrelSet qrels;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (blank(raw)) continue;
    std::istringstream fields(raw);
    std::string topic, iteration, doc, grade_text, extra;
    if (!(fields >> topic >> iteration >> doc >> grade_text) || (fields >> extra)) {
      throw EvalInputError(fmt::format("qrels line {}: expected \"topic_id 0 doc_id grade\"", line_no));
    }
    int grade = 0;
    auto [end, ec] = std::from_chars(grade_text.data(), grade_text.data() + grade_text.size(), grade);
    if (ec != std::errc{} || end != grade_text.data() + grade_text.size()) {
      throw EvalInputError(fmt::format("qrels line {}: grade \"{}\" is not an integer", line_no, grade_text));
    }
    try {
      qrels.add(std::move(topic), std::move(doc), grade);
    } catch (const EvalInputError& e) {
      throw EvalInputError(fmt::format("qrels line {}: {}", line_no, e.what()));
    }
  }
  return qrels;
}

QrelSet load_qrels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalInputError(fmt::format("cannot open qrels file {}", path));
  return parse_qrels(in);
}

double precision_at_k(const RankedList& list, const QrelSet& qrels, std::size_t k) {
  check_cutoff(k);
  const std::size_t depth = std::min(k, list.entries.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (qrels.is_relevant(list.query_id, list.entries[i].doc_id)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

std::size_t overlap_at_k(const RankedList& a, const RankedList& b, std::size_t k) {
  check_cutoff(k);
  std::set<std::string_view> top_a;
  for (std::size_t i = 0; i < std::min(k, a.entries.size()); ++i) top_a.insert(a.entries[i].doc_id);
  std::set<std::string_view> top_b;
  for (std::size_t i = 0; i < std::min(k, b.entries.size()); ++i) top_b.insert(b.entries[i].doc_id);
  std::size_t shared = 0;
  for (auto id : top_b) shared += top_a.count(id);
  return shared;
}

TopicRuns run_topics(const InvertedIndex& index, std::span<const Topic> topics,
                     std::span<const RankingConfig> configs) {
  for (const auto& config : configs) config.validate();

  // per_topic[t][c]; each slot is written by exactly one worker.
  std::vector<std::vector<RankedList>> per_topic(topics.size());
  std::vector<std::size_t> result_sizes(topics.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < topics.size(); t = next++) {
      try {
        const ResultSet rs = search(topics[t].query_text, index, topics[t].topic_id);
        result_sizes[t] = rs.size();
        auto& lists = per_topic[t];
        lists.reserve(configs.size());
        for (const auto& config : configs) lists.push_back(rerank(rs, config, index));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(topics.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  TopicRuns runs;
  runs.result_sizes = std::move(result_sizes);
  runs.lists.resize(configs.size());
  for (auto& c : runs.lists) c.reserve(topics.size());
  for (auto& lists : per_topic) {
    for (std::size_t c = 0; c < configs.size(); ++c) runs.lists[c].push_back(std::move(lists[c]));
  }
  return runs;
}

EvalReport run_evaluation(const InvertedIndex& index, std::span<const Topic> topics,
                          const QrelSet& qrels, std::span<const RankingConfig> configs) {
  if (configs.empty()) throw std::invalid_argument("at least one ranking config is required");
  return evaluate_runs(run_topics(index, topics, configs), topics, qrels, configs);
}

EvalReport evaluate_runs(const TopicRuns& runs, std::span<const Topic> topics, const QrelSet& qrels,
                         std::span<const RankingConfig> configs) {
  if (configs.empty()) throw std::invalid_argument("at least one ranking config is required");
  if (runs.lists.size() != configs.size() || runs.result_sizes.size() != topics.size()) {
    throw std::invalid_argument("runs do not match the topic and config lists");
  }
  const auto& lists = runs.lists;

  EvalReport report;
  report.topic_count = topics.size();

  std::unordered_set<std::string_view> topic_ids;
  for (const auto& t : topics) topic_ids.insert(t.topic_id);
  for (const auto& id : qrels.topic_ids()) {
    if (!topic_ids.contains(id)) ++report.ignored_qrel_topics;
  }
  report.empty_result_topics = static_cast<std::size_t>(
      std::count(runs.result_sizes.begin(), runs.result_sizes.end(), std::size_t{0}));

  for (std::size_t c = 0; c < configs.size(); ++c) {
    ModeReport mode;
    mode.config = configs[c];
    mode.label = configs[c].run_tag();
    for (std::size_t t = 0; t < topics.size(); ++t) {
      const RankedList& list = lists[c][t];
      TopicModeMetrics m;
      m.topic_id = topics[t].topic_id;
      for (std::size_t i = 0; i < kPrecisionCutoffs.size(); ++i) {
        m.precision[i] = precision_at_k(list, qrels, kPrecisionCutoffs[i]);
        mode.mean_precision[i] += m.precision[i];
      }
      m.retrieved = list.size();
      m.relevant_retrieved = static_cast<std::size_t>(std::count_if(
          list.entries.begin(), list.entries.end(),
          [&](const RankedEntry& e) { return qrels.is_relevant(list.query_id, e.doc_id); }));
      m.dropped = list.dropped;
      mode.total_retrieved += m.retrieved;
      mode.total_relevant_retrieved += m.relevant_retrieved;
      mode.total_dropped += m.dropped;
      mode.topics.push_back(std::move(m));
    }
    if (!topics.empty()) {
      for (auto& p : mode.mean_precision) p /= static_cast<double>(topics.size());
    }
    report.modes.push_back(std::move(mode));
  }

  for (std::size_t a = 0; a < configs.size(); ++a) {
    for (std::size_t b = a + 1; b < configs.size(); ++b) {
      double sum = 0.0;
      for (std::size_t t = 0; t < topics.size(); ++t) {
        sum += static_cast<double>(overlap_at_k(lists[a][t], lists[b][t], kOverlapDepth));
      }
      const double mean = topics.empty() ? 0.0 : sum / static_cast<double>(topics.size());
      report.overlaps.push_back({a, b, mean});
    }
  }
  return report;
}

void write_report_csv(const EvalReport& report, std::ostream& out) {
  out << "topic_id,mode,retrieved,relevant_retrieved,dropped,p5,p10,p20,p30,p100\n";
  auto row = [&out](std::string_view topic, std::string_view mode, std::size_t retrieved,
                    std::size_t relevant, std::size_t dropped, const auto& precision) {
    out << fmt::format("{},{},{},{},{}", topic, mode, retrieved, relevant, dropped);
    for (double p : precision) out << fmt::format(",{:.4f}", p);
    out << '\n';
  };
  for (const auto& mode : report.modes) {
    for (const auto& m : mode.topics) {
      row(m.topic_id, mode.label, m.retrieved, m.relevant_retrieved, m.dropped, m.precision);
    }
  }
  for (const auto& mode : report.modes) {
    row("ALL", mode.label, mode.total_retrieved, mode.total_relevant_retrieved, mode.total_dropped,
        mode.mean_precision);
  }
}

void write_overlap_csv(const EvalReport& report, std::ostream& out) {
  out << "mode_a,mode_b,mean_overlap_at_10\n";
  for (const auto& o : report.overlaps) {
    out << fmt::format("{},{},{:.4f}\n", report.modes[o.mode_a].label, report.modes[o.mode_b].label,
                       o.mean_overlap);
  }
}

void write_precision_table(const EvalReport& report, std::ostream& out) {
  out << fmt::format("topics: {} (empty result sets: {}, qrels topics ignored: {})\n\n",
                     report.topic_count, report.empty_result_topics, report.ignored_qrel_topics);
  out << fmt::format("{:<20}", "mode");
  for (auto k : kPrecisionCutoffs) out << fmt::format("{:>8}", fmt::format("p@{}", k));
  out << fmt::format("{:>11}{:>10}{:>9}\n", "retrieved", "relevant", "dropped");
  for (const auto& mode : report.modes) {
    out << fmt::format("{:<20}", mode.label);
    for (double p : mode.mean_precision) out << fmt::format("{:>8.4f}", p);
    out << fmt::format("{:>11}{:>10}{:>9}\n", mode.total_retrieved, mode.total_relevant_retrieved,
                       mode.total_dropped);
  }
  if (!report.overlaps.empty()) {
    out << "\nmean top-10 overlap\n";
    for (const auto& o : report.overlaps) {
      out << fmt::format("{:<20}{:<20}{:>8.2f}\n", report.modes[o.mode_a].label,
                         report.modes[o.mode_b].label, o.mean_overlap);
    }
  }
}

}  // namespace lotkarank
