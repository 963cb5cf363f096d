// End-to-end acceptance checks. Each numbered criterion prints exactly
// one [PASS]/[FAIL] line; the process exits nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"

#include "leap/campaign.hpp"
#include "leap/dataset.hpp"
#include "leap/levy.hpp"
#include "leap/lexicon.hpp"
#include "leap/metrics.hpp"
#include "leap/search.hpp"
#include "leap/text.hpp"
#include "leap/victim.hpp"
#include "search_fixtures.hpp"

namespace fs = std::filesystem;
using namespace leap;

namespace {

const fs::path kData = LEAP_DATA_DIR;
const std::string kBin = LEAP_CLI_BIN;

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void guarded(int criterion, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(criterion, false, std::string("exception: ") + e.what());
  }
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---- criterion 1: Mantegna scale against a frozen high-precision oracle

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  // values frozen from an independent 50-digit evaluation of the closed form
  bool ok = close(levy::sigma_mu(0.5), 1.4793375595943194462, 1e-9) &&
            close(levy::sigma_mu(1.0), 1.0, 1e-9) &&
            close(levy::sigma_mu(1.5), 0.69657450255769679272, 1e-9) &&
            close(levy::sigma_mu(2.0), 0.0, 1e-9);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream msg;
  msg << "sigma_mu at beta {0.5, 1.0, 1.5, 2.0} within 1e-9 of the oracle, " << secs << " s";
  report(1, ok && secs < 1.0, msg.str());
}

// ---- criterion 2: heavy tail of the step distribution

void criterion_2() {
  auto t0 = std::chrono::steady_clock::now();
  auto params = levy::LevyParams::make(1.5);
  std::mt19937_64 rng(424242);
  const int n = 1'000'000;
  int over = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(levy::levy_step(params, rng)) > 5.0) ++over;
  double p = static_cast<double>(over) / n;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // 0.030 frozen beforehand from a 10^7-sample run of the same formula;
  // the Gaussian tail P(|Z| > 5) is about 5.7e-7.
  bool ok = p >= 0.030 && p >= 100.0 * 5.7e-7 && secs < 10.0;
  std::ostringstream msg;
  msg << "P(|s|>5) = " << p << " (threshold 0.030, Gaussian tail 5.7e-7), " << secs << " s";
  report(2, ok, msg.str());
}

// ---- criterion 3: agreement with exhaustive enumeration on small instances

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(777);
  search::SearchConfig cfg;

  int solvable_seen = 0, unsolvable_seen = 0;
  int solved = 0, wrong_success = 0, bad_adversarial = 0;
  int attempts = 0;
  while ((solvable_seen < 100 || unsolvable_seen < 20) && attempts < 20000) {
    ++attempts;
    auto inst = leap_tests::random_instance(gen);
    if (inst.solvable && solvable_seen >= 100) continue;
    if (!inst.solvable && unsolvable_seen >= 20) continue;

    auto t = text::TokenizedText::tokenize(inst.text);
    auto lex = inst.lexicon();
    auto stops = inst.stopwords();
    auto model = inst.victim();
    std::mt19937_64 rng(1000 + attempts);
    auto res = search::run(t, inst.label, model, lex, stops, cfg, rng);

    if (inst.solvable) {
      ++solvable_seen;
      if (res.status == search::Status::Success) {
        ++solved;
        if (!victim::is_adversarial(model.predict(res.adversarial_text), inst.label) ||
            res.adversarial_change_rate > cfg.max_change_rate + 1e-12)
          ++bad_adversarial;
      }
    } else {
      ++unsolvable_seen;
      if (res.status == search::Status::Success) ++wrong_success;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = solvable_seen == 100 && unsolvable_seen == 20 && solved >= 95 &&
            wrong_success == 0 && bad_adversarial == 0 && secs < 60.0;
  std::ostringstream msg;
  msg << solved << "/100 solvable fixtures cracked (need 95), " << (20 - wrong_success)
      << "/20 proven-unsolvable exhausted, " << secs << " s";
  report(3, ok, msg.str());
}

// ---- criteria 4 and 5 share one full campaign over the bundled corpus

struct CorpusRun {
  metrics::CampaignReport report;
  std::uint64_t counted_queries = 0;
  lexicon::SynonymLexicon lex = lexicon::SynonymLexicon::from_entries({}, "");
  lexicon::StopwordList stops = lexicon::StopwordList::from_words({"the"});
};

CorpusRun run_corpus_campaign() {
  CorpusRun r;
  auto ds = dataset::load_csv(kData / "mini_corpus.csv");
  auto model = victim::KeywordVictim::load_json((kData / "keyword_weights.json").string());
  r.lex = lexicon::SynonymLexicon::load_wordnet(kData / "wordnet_mini");
  r.stops = lexicon::StopwordList::load(kData / "stopwords.txt");

  victim::QueryLedger ledger;
  victim::CountingVictim counted(model, ledger);
  campaign::CampaignOptions opts;
  opts.seed = 11;
  opts.workers = 4;
  r.report = campaign::run_campaign(ds, counted, r.lex, r.stops, opts);
  r.counted_queries = ledger.total();
  return r;
}

void criterion_4(const CorpusRun& run) {
  // Velocity and intermediate-state feasibility are asserted inside the
  // engine (logic_error on violation), so completing the campaign covers
  // them; here every emitted adversarial is re-checked from its text.
  int violations = 0;
  std::size_t successes = 0;
  for (const auto& rec : run.report.records) {
    if (rec.status != metrics::Outcome::Success) continue;
    ++successes;
    auto orig = text::TokenizedText::tokenize(rec.original_text);
    auto adv = text::TokenizedText::tokenize(*rec.adversarial_text);
    if (orig.tokens().size() != adv.tokens().size() || orig.word_count() != adv.word_count()) {
      ++violations;
      continue;
    }
    std::size_t changed = 0;
    for (std::size_t d = 0; d < orig.word_count(); ++d) {
      if (orig.word_lower(d) == adv.word_lower(d)) continue;
      ++changed;
      if (run.stops.contains(orig.word_lower(d))) ++violations;
      const auto& syns = run.lex.synonyms(orig.word_lower(d));
      if (std::find(syns.begin(), syns.end(), adv.word_lower(d)) == syns.end()) ++violations;
    }
    double rate = static_cast<double>(changed) / static_cast<double>(orig.word_count());
    if (!close(rate, *rec.change_rate, 1e-12)) ++violations;
    if (rate > 0.25 + 1e-12) ++violations;
  }
  std::ostringstream msg;
  msg << violations << " feasibility violations across " << successes
      << " adversarials (cap 0.25, lexicon-only substitutions, stopwords untouched)";
  report(4, violations == 0 && successes > 0, msg.str());
}

void criterion_5(const CorpusRun& run) {
  std::uint64_t reported = 0;
  for (const auto& rec : run.report.records) reported += rec.queries;
  std::ostringstream msg;
  msg << "instrumented victim counted " << run.counted_queries << " queries, reports sum to "
      << reported;
  report(5, reported == run.counted_queries && reported > 0, msg.str());
}

// ---- criterion 6: determinism through the CLI

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  int rc = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Wall-clock fields are the one nondeterministic part of a report and are
// zeroed before byte comparison.
std::string mask_timing(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::ordered_json::parse(line);
    if (j.contains("elapsed")) j["elapsed"] = 0.0;
    if (j.contains("summary")) {
      j["summary"]["mean_time_per_success"] = 0.0;
      j["summary"]["total_wall_seconds"] = 0.0;
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

void criterion_6() {
  auto tmp = [](const char* n) {
    return (fs::temp_directory_path() / (std::string("leap_acc_") + std::to_string(::getpid()) +
                                         "_" + n)).string();
  };
  std::string a = tmp("a.jsonl"), b = tmp("b.jsonl"), c = tmp("c.jsonl");
  std::string flags = " run --dataset " + (kData / "mini_corpus.csv").string() +
                      " --victim keyword:" + (kData / "keyword_weights.json").string() +
                      " --wordnet " + (kData / "wordnet_mini").string() + " --stopwords " +
                      (kData / "stopwords.txt").string() + " --seed 21 --sample 60";
  bool ran = shell(kBin + flags + " --workers 1 --out " + a) == 0 &&
             shell(kBin + flags + " --workers 1 --out " + b) == 0 &&
             shell(kBin + flags + " --workers 3 --out " + c) == 0;
  bool identical = ran && mask_timing(slurp(a)) == mask_timing(slurp(b));
  bool worker_free = ran && mask_timing(slurp(a)) == mask_timing(slurp(c));
  fs::remove(a);
  fs::remove(b);
  fs::remove(c);
  report(6, identical && worker_free,
         std::string("repeat run ") + (identical ? "byte-identical" : "differs") +
             " (timing fields masked); workers 1 vs 3 records " +
             (worker_free ? "identical" : "differ"));
}

// ---- criterion 7: component ablation over the bundled benchmark

void criterion_7() {
  auto t0 = std::chrono::steady_clock::now();
  auto ds = dataset::load_csv(kData / "mini_corpus.csv");
  auto model = victim::KeywordVictim::load_json((kData / "keyword_weights.json").string());
  auto lex = lexicon::SynonymLexicon::load_wordnet(kData / "wordnet_mini");
  auto stops = lexicon::StopwordList::load(kData / "stopwords.txt");

  campaign::CampaignOptions base;
  base.workers = 4;
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
  auto rows = campaign::run_ablation(ds, model, lex, stops, base, seeds);

  const auto& baseline = rows.front();  // brownian+linear+none
  const auto& full = rows.back();       // levy+adaptive+greedy
  bool s_rate_ok = true;
  for (const auto& row : rows)
    if (full.mean_s_rate < row.mean_s_rate - 0.02) s_rate_ok = false;
  bool time_ok = full.mean_time_per_success <= baseline.mean_time_per_success;
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream msg;
  msg << "mean S-rates over 10 seeds:";
  for (const auto& row : rows) msg << " " << row.name << "=" << row.mean_s_rate;
  msg << "; time/success full=" << full.mean_time_per_success
      << "s vs baseline=" << baseline.mean_time_per_success << "s; " << secs << " s total";
  report(7, s_rate_ok && time_ok && secs < 600.0, msg.str());
}

// ---- criterion 8: hand-substituted update formulas, exact to 1e-12

void criterion_8() {
  bool ok = true;
  search::SearchConfig cfg;
  auto t = text::TokenizedText::tokenize("aa bb cc");

  // velocity update with omega = 0.5, v = 0, v_max = 1:
  // matching both bests -> +1.0; neither -> -1.0; local best only -> 0.0
  search::Particle p;
  p.position = text::CandidateText{&t, {}};
  p.lbest = text::CandidateText{&t, {}};
  p.velocity = {0.0, 0.0, 0.0};
  text::CandidateText gbest_same{&t, {}};
  text::CandidateText gbest_diff{&t, {{0, "xx"}, {1, "yy"}, {2, "zz"}}};
  for (double v : search::update_velocity(p, gbest_same, 0.5, cfg))
    ok = ok && close(v, 1.0, 1e-12);
  for (double v : search::update_velocity(p, gbest_diff, 0.5, cfg))
    ok = ok && close(v, 0.0, 1e-12);
  p.lbest = gbest_diff;
  for (double v : search::update_velocity(p, gbest_diff, 0.5, cfg))
    ok = ok && close(v, -1.0, 1e-12);

  // mutation gate: gamma 1, change rate 0 -> 1; change rate 1 -> 0
  ok = ok && close(search::mutation_probability({&t, {}}, cfg), 1.0, 1e-12);
  ok = ok && close(search::mutation_probability({&t, {{0, "x"}, {1, "y"}, {2, "z"}}}, cfg),
                   0.0, 1e-12);

  // inertia branch 1: the worst below-mean particle sits at omega_min
  std::mt19937_64 rng(1);
  ok = ok && close(search::adaptive_inertia(0.1, {0.1, 0.9, 0.5}, cfg, rng), cfg.omega_min,
                   1e-12);
  // 0.2 + (0.19 - 0) * (1.0 - 0) / (0.2 - 0) = 1.15, clamped to omega_max
  ok = ok && close(search::adaptive_inertia(0.19, {0.0, 1.0, 0.2}, cfg, rng), cfg.omega_max,
                   1e-12);

  report(8, ok, "indicator/velocity, mutation gate and inertia formulas match hand "
                "substitution at 1e-12");
}

}  // namespace

int main() {
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);
  guarded(4, [] {
    auto run = run_corpus_campaign();
    criterion_4(run);
    criterion_5(run);
  });
  guarded(6, criterion_6);
  guarded(7, criterion_7);
  guarded(8, criterion_8);
  return failures == 0 ? 0 : 1;
}
