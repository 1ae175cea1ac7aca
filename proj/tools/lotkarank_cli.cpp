// lotkarank: build an index, search, re-rank by journal/author frequency,
// evaluate ranking modes against relevance judgments, and export
// rank-frequency series with a power-law fit.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lotkarank/corpus.hpp"
#include "lotkarank/eval.hpp"
#include "lotkarank/index.hpp"
#include "lotkarank/informetrics.hpp"
#include "lotkarank/rerank.hpp"

namespace {

using namespace lotkarank;

// Path -> contents, written only once every output has been rendered.
using PendingOutputs = std::vector<std::pair<std::string, std::string>>;

void write_all(const PendingOutputs& outputs) {
  for (const auto& [path, contents] : outputs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot open {} for writing", path));
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error(fmt::format("failed writing {}", path));
  }
}

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

// `shared_flags` marks eval, where --field/--missing are given once for
// every mode and only apply to combined runs.
RankingConfig make_config(RankingMode mode, const std::optional<std::string>& field, double k,
                          const std::string& missing, bool shared_flags) {
  RankingConfig config;
  config.mode = mode;
  config.k = k;
  config.missing_policy = parse_missing_policy(missing);
  if (field) {
    config.field = parse_entity_field(*field);
  }
  if (shared_flags && mode != RankingMode::Combined) {
    config.field.reset();
    if (config.missing_policy == MissingPolicy::Passthrough) config.missing_policy = MissingPolicy::Drop;
  }
  config.validate();
  return config;
}

struct IndexArgs {
  std::string corpus;
  std::string out;
};

int cmd_index(const IndexArgs& args) {
  auto docs = load_corpus(args.corpus);
  if (docs.empty()) throw std::runtime_error(fmt::format("corpus {} has no records", args.corpus));
  const auto index = InvertedIndex::build(std::move(docs));
  index.save(args.out);
  std::cout << fmt::format("docs={} terms={}\n", index.corpus_size(), index.term_count());
  return 0;
}

struct QueryArgs {
  std::string index;
  std::string query;
  std::string query_id = "q";
  std::string mode = "tfidf";
  std::optional<std::string> field;
  double k = 1.0;
  std::string missing = "drop";
  std::optional<std::string> out;
};

int emit_run(const RankedList& list, const std::optional<std::string>& out) {
  std::ostringstream run;
  write_run(list, run);
  if (out) {
    write_all({{*out, run.str()}});
  } else {
    std::cout << run.str();
  }
  if (list.dropped > 0) std::cerr << fmt::format("dropped={}\n", list.dropped);
  return 0;
}

int cmd_search(const QueryArgs& args) {
  const auto index = InvertedIndex::load(args.index);
  const auto rs = search(args.query, index, args.query_id);
  return emit_run(rerank(rs, RankingConfig::tfidf(), index), args.out);
}

int cmd_rerank(const QueryArgs& args) {
  const auto config = make_config(parse_ranking_mode(args.mode), args.field, args.k, args.missing, false);
  const auto index = InvertedIndex::load(args.index);
  const auto rs = search(args.query, index, args.query_id);
  return emit_run(rerank(rs, config, index), args.out);
}

struct EvalArgs {
  std::string index;
  std::string topics;
  std::string qrels;
  std::string modes = "tfidf,brad,lotka";
  std::optional<std::string> field;
  double k = 1.0;
  std::string missing = "drop";
  std::string out;
};

int cmd_eval(const EvalArgs& args) {
  std::vector<RankingConfig> configs;
  for (const auto& name : split_csv_list(args.modes)) {
    configs.push_back(make_config(parse_ranking_mode(name), args.field, args.k, args.missing, true));
  }
  if (configs.empty()) throw std::invalid_argument("--modes lists no ranking modes");

  const auto index = InvertedIndex::load(args.index);
  const auto topics = load_topics(args.topics);
  const auto qrels = load_qrels(args.qrels);

  const auto runs = run_topics(index, topics, configs);
  const auto report = evaluate_runs(runs, topics, qrels, configs);

  PendingOutputs outputs;
  std::ostringstream csv, overlap, table;
  write_report_csv(report, csv);
  write_overlap_csv(report, overlap);
  write_precision_table(report, table);
  outputs.emplace_back(args.out + ".report.csv", csv.str());
  outputs.emplace_back(args.out + ".overlap.csv", overlap.str());
  outputs.emplace_back(args.out + ".table.txt", table.str());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    std::ostringstream run;
    for (const auto& list : runs.lists[c]) write_run(list, run);
    outputs.emplace_back(fmt::format("{}.{}.run", args.out, configs[c].run_tag()), run.str());
  }
  write_all(outputs);

  std::cout << table.str();
  if (report.ignored_qrel_topics > 0) {
    std::cerr << fmt::format("warning: {} qrels topic(s) not in the topic file were ignored\n",
                             report.ignored_qrel_topics);
  }
  return 0;
}

struct AnalyzeArgs {
  std::string index;
  std::string query;
  std::string field;
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& args) {
  const EntityField field = parse_entity_field(args.field);
  const auto index = InvertedIndex::load(args.index);
  const auto rs = search(args.query, index);
  const auto table = entity_frequencies(rs, field, index);
  const auto series = rank_frequency_series(table);
  if (series.size() < 2) {
    std::cerr << fmt::format("error: result set has {} distinct {} entities; < 2 entities, cannot fit\n",
                             series.size(), to_string(field));
    return 1;
  }
  const auto fit = fit_power_law(std::span<const RankFrequencyPoint>(series));

  std::ostringstream linear, loglog;
  write_rank_frequency_csv(series, linear);
  write_log_log_csv(series, loglog);
  write_all({{args.out + ".rank_frequency.csv", linear.str()}, {args.out + ".loglog.csv", loglog.str()}});

  std::cout << fmt::format("alpha={:.4f} c={:.4f} r2={:.4f}\n", fit.alpha, fit.c, fit.r_squared);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informetric re-ranking and evaluation for bibliographic search results", "lotkarank"};
  app.require_subcommand(1);

  IndexArgs index_args;
  auto* index_cmd = app.add_subcommand("index", "Parse a JSON-lines corpus and save its inverted index");
  index_cmd->add_option("--corpus", index_args.corpus, "Corpus file (one JSON record per line)")->required();
  index_cmd->add_option("--out", index_args.out, "Index output path")->required();

  QueryArgs search_args;
  auto* search_cmd = app.add_subcommand("search", "tf-idf search; prints a run file");
  search_cmd->add_option("--index", search_args.index, "Saved index")->required();
  search_cmd->add_option("--query", search_args.query, "Query text")->required();
  search_cmd->add_option("--query-id", search_args.query_id, "Query id for the run file");
  search_cmd->add_option("--out", search_args.out, "Run file path (default: stdout)");

  QueryArgs rerank_args;
  auto* rerank_cmd = app.add_subcommand("rerank", "Search and re-rank one query");
  rerank_cmd->add_option("--index", rerank_args.index, "Saved index")->required();
  rerank_cmd->add_option("--query", rerank_args.query, "Query text")->required();
  rerank_cmd->add_option("--query-id", rerank_args.query_id, "Query id for the run file");
  rerank_cmd->add_option("--mode", rerank_args.mode, "tfidf, brad, lotka or combined")->required();
  rerank_cmd->add_option("--field", rerank_args.field, "journal or author (combined mode)");
  rerank_cmd->add_option("--k", rerank_args.k, "Exponent on ef/N for combined mode");
  rerank_cmd->add_option("--missing", rerank_args.missing, "drop or passthrough (combined mode)");
  rerank_cmd->add_option("--out", rerank_args.out, "Run file path (default: stdout)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate ranking modes over a topic set");
  eval_cmd->add_option("--index", eval_args.index, "Saved index")->required();
  eval_cmd->add_option("--topics", eval_args.topics, "Topic file: topic_id<TAB>query")->required();
  eval_cmd->add_option("--qrels", eval_args.qrels, "Judgments: topic_id 0 doc_id grade")->required();
  eval_cmd->add_option("--modes", eval_args.modes, "Comma-separated subset of tfidf,brad,lotka,combined");
  eval_cmd->add_option("--field", eval_args.field, "journal or author (combined mode)");
  eval_cmd->add_option("--k", eval_args.k, "Exponent on ef/N for combined mode");
  eval_cmd->add_option("--missing", eval_args.missing, "drop or passthrough (combined mode)");
  eval_cmd->add_option("--out", eval_args.out, "Output prefix")->required();

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Rank-frequency series and power-law fit for a query");
  analyze_cmd->add_option("--index", analyze_args.index, "Saved index")->required();
  analyze_cmd->add_option("--query", analyze_args.query, "Query text")->required();
  analyze_cmd->add_option("--field", analyze_args.field, "journal or author")->required();
  analyze_cmd->add_option("--out", analyze_args.out, "Output prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*index_cmd) return cmd_index(index_args);
    if (*search_cmd) return cmd_search(search_args);
    if (*rerank_cmd) return cmd_rerank(rerank_args);
    if (*eval_cmd) return cmd_eval(eval_args);
    if (*analyze_cmd) return cmd_analyze(analyze_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
