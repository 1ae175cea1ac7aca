// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "lotkarank/eval.hpp"
#include "lotkarank/index.hpp"
#include "lotkarank/informetrics.hpp"
#include "lotkarank/rerank.hpp"
#include "support/metric_fixtures.hpp"
#include "support/naive_ranker.hpp"
#include "support/synthetic.hpp"

using namespace lotkarank;

namespace {

// Collects failure messages for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ = failed_ || !ok;
  }
  void note(std::string text) { notes_ = std::move(text); }
  bool ok() const { return !failed_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::string& notes() const { return notes_; }

 private:
  bool failed_ = false;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::vector<std::string> ids_of(const RankedList& list) {
  std::vector<std::string> out;
  for (const auto& e : list.entries) out.push_back(e.doc_id);
  return out;
}

// The shared 25-topic suite for the directional, disjointness criteria.
testkit::SyntheticCollection directional_suite() {
  testkit::SyntheticSpec spec;
  spec.docs = 1000;
  spec.topics = 25;
  spec.authors = 300;
  spec.journals = 60;
  spec.alpha = 2.0;
  spec.missing_authors = 80;
  spec.missing_journals = 150;
  spec.relevance_follows_authors = true;
  spec.prolific_authors = 5;
  spec.seed = 2011;
  return testkit::make_collection(spec);
}

void k_zero_identity(Check& check) {
  const auto start = std::chrono::steady_clock::now();
  testkit::SyntheticSpec spec;
  spec.docs = 1000;
  spec.topics = 10;
  spec.alpha = 2.0;
  spec.missing_authors = 100;
  spec.missing_journals = 200;
  spec.seed = 77;
  const auto c = testkit::make_collection(spec);
  const auto index = InvertedIndex::build(c.docs);

  std::size_t compared = 0;
  for (const auto& topic : c.topics) {
    const auto rs = search(topic.query_text, index, topic.topic_id);
    const auto tfidf = rerank(rs, RankingConfig::tfidf(), index);
    for (auto field : {EntityField::Journal, EntityField::Author}) {
      const auto combined = rerank(rs, RankingConfig::combined(field, 0.0), index);
      std::vector<std::string> restricted;
      for (const auto& e : tfidf.entries) {
        if (!entity_values(index.document(e.doc_id), field).empty()) restricted.push_back(e.doc_id);
      }
      check.expect(ids_of(combined) == restricted,
                   fmt::format("topic {} field {}: orderings differ", topic.topic_id, to_string(field)));
      check.expect(combined.dropped + restricted.size() == rs.size(), "dropped count mismatch");
      compared += restricted.size();
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check.expect(seconds < 10.0, fmt::format("runtime {:.2f}s exceeds 10s", seconds));
  check.note(fmt::format("10 queries x 2 fields, {} docs compared, {:.3f}s", compared, seconds));
}

void brute_force_oracle(Check& check) {
  testkit::Rng rng(20110101);
  std::size_t lists = 0;
  double worst = 0.0;
  for (int corpus = 0; corpus < 50; ++corpus) {
    const auto docs = testkit::random_small_corpus(rng, 50);
    const auto query = testkit::random_query(rng, 8);
    const auto index = InvertedIndex::build(docs);
    const auto rs = search(TokenStream{query}, index);
    const double k = static_cast<double>(static_cast<int>(rng.index(9)) - 4) * 0.5;  // -2 .. 2
    const std::vector<RankingConfig> configs = {
        RankingConfig::tfidf(), RankingConfig::bradford(), RankingConfig::lotka(),
        RankingConfig::combined(EntityField::Journal, k), RankingConfig::combined(EntityField::Author, k)};
    for (const auto& config : configs) {
      const auto got = rerank(rs, config, index);
      const auto want = testkit::naive_rank(docs, query, config);
      ++lists;
      bool same = got.size() == want.entries.size() && got.dropped == want.dropped;
      for (std::size_t i = 0; same && i < got.size(); ++i) {
        same = got.entries[i].doc_id == want.entries[i].doc_id;
        const double diff = std::abs(got.entries[i].score - want.entries[i].score);
        worst = std::max(worst, diff);
        same = same && diff <= 1e-9;
      }
      check.expect(same, fmt::format("corpus {} mode {}: differs from naive ranking", corpus, config.run_tag()));
    }
  }
  check.note(fmt::format("{} ranked lists, max |score diff| {:.1e}", lists, worst));
}

void power_law_recovery(Check& check) {
  double worst_alpha = 0.0, worst_c = 0.0, worst_r2 = 0.0;
  for (double alpha : {0.8, 1.5, 2.0, 3.0}) {
    for (double c : {10.0, 1000.0}) {
      std::vector<SeriesPoint> series;
      for (int x = 1; x <= 50; ++x) series.push_back({double(x), c * std::pow(double(x), -alpha)});
      const auto fit = fit_power_law(std::span<const SeriesPoint>(series));
      const double ea = std::abs(fit.alpha - alpha) / alpha;
      const double ec = std::abs(fit.c - c) / c;
      worst_alpha = std::max(worst_alpha, ea);
      worst_c = std::max(worst_c, ec);
      worst_r2 = std::max(worst_r2, 1.0 - fit.r_squared);
      check.expect(ea <= 1e-6, fmt::format("alpha={} c={}: alpha rel err {:.2e}", alpha, c, ea));
      check.expect(ec <= 1e-6, fmt::format("alpha={} c={}: c rel err {:.2e}", alpha, c, ec));
      check.expect(fit.r_squared >= 1.0 - 1e-9, fmt::format("alpha={} c={}: r2 {}", alpha, c, fit.r_squared));
    }
  }
  check.note(fmt::format("max rel err alpha {:.1e}, c {:.1e}; max 1-r2 {:.1e}", worst_alpha, worst_c, worst_r2));
}

void metric_correctness(Check& check) {
  const auto precision = testkit::precision_fixtures();
  const auto overlap = testkit::overlap_fixtures();
  check.expect(precision.size() >= 10 && overlap.size() >= 10, "fewer than 10 fixtures");
  for (const auto& f : precision) {
    QrelSet q;
    for (const auto& [doc, grade] : f.judgments) q.add("t", doc, grade);
    const double got = precision_at_k(testkit::ranked("t", f.ranked), q, f.k);
    check.expect(got == f.expected, fmt::format("p@k fixture '{}': got {}, want {}", f.name, got, f.expected));
  }
  for (const auto& f : overlap) {
    const auto got = overlap_at_k(testkit::ranked("t", f.a), testkit::ranked("t", f.b), f.k);
    check.expect(got == f.expected, fmt::format("overlap fixture '{}': got {}, want {}", f.name, got, f.expected));
  }

  const auto c = directional_suite();
  const auto index = InvertedIndex::build(c.docs);
  const std::vector<RankingConfig> configs = {RankingConfig::tfidf(), RankingConfig::bradford(),
                                              RankingConfig::lotka(),
                                              RankingConfig::combined(EntityField::Author, 1.0)};
  std::string first;
  for (int run = 0; run < 3; ++run) {
    std::ostringstream csv;
    write_report_csv(run_evaluation(index, c.topics, c.qrels, configs), csv);
    if (run == 0) {
      first = csv.str();
    } else {
      check.expect(csv.str() == first, "report CSV differs between runs");
    }
  }
  check.note(fmt::format("{} p@k fixtures, {} overlap fixtures, report {} bytes x3 identical", precision.size(),
                         overlap.size(), first.size()));
}

struct SuiteReport {
  EvalReport report;
  std::size_t tfidf = 0, lotka = 0;
};

SuiteReport evaluate_directional() {
  const auto c = directional_suite();
  const auto index = InvertedIndex::build(c.docs);
  const std::vector<RankingConfig> configs = {RankingConfig::tfidf(), RankingConfig::bradford(),
                                              RankingConfig::lotka()};
  return {run_evaluation(index, c.topics, c.qrels, configs), 0, 2};
}

void directional_reproduction(Check& check) {
  const auto s = evaluate_directional();
  const auto& tfidf = s.report.modes[s.tfidf].mean_precision;
  const auto& lotka = s.report.modes[s.lotka].mean_precision;
  check.expect(s.report.topic_count == 25, "expected 25 topics");
  for (std::size_t i = 0; i < 4; ++i) {
    check.expect(lotka[i] > tfidf[i], fmt::format("p@{} lotka {:.4f} <= tfidf {:.4f}", kPrecisionCutoffs[i],
                                                  lotka[i], tfidf[i]));
  }
  check.note(fmt::format("p@5/10/20/30 tfidf {:.3f}/{:.3f}/{:.3f}/{:.3f}, lotka {:.3f}/{:.3f}/{:.3f}/{:.3f}",
                         tfidf[0], tfidf[1], tfidf[2], tfidf[3], lotka[0], lotka[1], lotka[2], lotka[3]));
}

void disjointness(Check& check) {
  const auto s = evaluate_directional();
  double mean = -1.0;
  for (const auto& o : s.report.overlaps) {
    if (o.mode_a == s.tfidf && o.mode_b == s.lotka) mean = o.mean_overlap;
  }
  check.expect(mean >= 0.0, "tfidf/lotka overlap missing");
  check.expect(mean < 10.0, fmt::format("mean top-10 overlap {:.2f} is not < 10", mean));
  check.note(fmt::format("mean top-10 overlap tfidf vs lotka = {:.2f}", mean));
}

void drop_accounting(Check& check) {
  const std::size_t docs = 500;
  std::string summary;
  for (double fraction : {0.0, 0.1, 0.25, 0.5}) {
    testkit::SyntheticSpec spec;
    spec.docs = docs;
    spec.topics = 20;
    spec.missing_authors = static_cast<std::size_t>(std::lround(fraction * docs));
    spec.missing_journals = static_cast<std::size_t>(std::lround(fraction * docs * 0.8));
    spec.seed = 5 + static_cast<std::uint64_t>(fraction * 100);
    const auto c = testkit::make_collection(spec);
    const auto index = InvertedIndex::build(c.docs);
    const std::vector<RankingConfig> configs = {
        RankingConfig::tfidf(), RankingConfig::bradford(), RankingConfig::lotka(),
        RankingConfig::combined(EntityField::Journal, 1.0), RankingConfig::combined(EntityField::Author, -1.0),
        RankingConfig::combined(EntityField::Author, 1.0, MissingPolicy::Passthrough)};
    const auto report = run_evaluation(index, c.topics, c.qrels, configs);

    std::size_t retrieved_tfidf = report.modes[0].total_retrieved;
    check.expect(retrieved_tfidf == docs, "topic queries should retrieve every document exactly once");
    for (const auto& mode : report.modes) {
      std::size_t want = 0;
      const auto& cfg = mode.config;
      if (cfg.mode != RankingMode::Tfidf && cfg.missing_policy == MissingPolicy::Drop) {
        want = cfg.effective_field() == EntityField::Journal ? spec.missing_journals : spec.missing_authors;
      }
      std::size_t sum = 0;
      for (const auto& t : mode.topics) sum += t.dropped;
      check.expect(sum == want && mode.total_dropped == want,
                   fmt::format("f={} mode {}: dropped {} want {}", fraction, mode.label, sum, want));
      check.expect(mode.total_retrieved + sum == docs,
                   fmt::format("f={} mode {}: retrieved + dropped != {}", fraction, mode.label, docs));
    }
    summary += fmt::format(" f={}: authors {} journals {};", fraction, spec.missing_authors, spec.missing_journals);
  }
  check.note("planted missing" + summary);
}

void monotonicity_sweep(Check& check) {
  const double tfidf = 3.25;
  const std::size_t n = 100;
  for (double k : {0.5, 1.0, 2.0, -0.5, -1.0}) {
    for (std::size_t ef = 1; ef < n; ++ef) {
      const double lo = combined_score(tfidf, ef, n, k);
      const double hi = combined_score(tfidf, ef + 1, n, k);
      if (k > 0) {
        check.expect(hi > lo, fmt::format("k={} ef={}: not increasing", k, ef));
      } else {
        check.expect(hi < lo, fmt::format("k={} ef={}: not decreasing", k, ef));
      }
    }
  }
  check.note("k in {0.5,1,2} increasing, k in {-0.5,-1} decreasing over ef=1..100");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"k=0 identity (1000 docs, 10 queries, both fields, < 10 s)", k_zero_identity},
      {"brute-force oracle equivalence (50 corpora, 4 modes)", brute_force_oracle},
      {"power-law recovery (rel err 1e-6, r2 >= 1-1e-9)", power_law_recovery},
      {"metric correctness (p@k, overlap@k fixtures; byte-identical report)", metric_correctness},
      {"directional: lotka p@5..p@30 > tfidf (25 topics)", directional_reproduction},
      {"disjointness: mean top-10 overlap tfidf/lotka < 10", disjointness},
      {"drop accounting matches planted missing fields", drop_accounting},
      {"monotonicity sweep of combined score in ef (N=100)", monotonicity_sweep},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check check;
    try {
      fn(check);
    } catch (const std::exception& e) {
      check.expect(false, fmt::format("exception: {}", e.what()));
    }
    fmt::print("[{}] {}\n", check.ok() ? "PASS" : "FAIL", name);
    if (!check.notes().empty()) fmt::print("       {}\n", check.notes());
    for (const auto& f : check.failures()) fmt::print("       - {}\n", f);
    failed += check.ok() ? 0 : 1;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
