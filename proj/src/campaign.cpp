#include "leap/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace leap::campaign {

std::unique_ptr<victim::VictimModel> make_victim(const std::string& spec) {
  if (spec.rfind("keyword:", 0) == 0) {
    return std::make_unique<victim::KeywordVictim>(
        victim::KeywordVictim::load_json(spec.substr(8)));
  }
  if (spec.rfind("nb:", 0) == 0) {
    auto corpus = dataset::load_csv(spec.substr(3));
    return std::make_unique<victim::NaiveBayesVictim>(
        victim::NaiveBayesVictim::train(corpus.rows));
  }
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    return std::make_unique<victim::HttpVictim>(spec);
  if (spec.rfind("http:", 0) == 0)
    return std::make_unique<victim::HttpVictim>(spec.substr(5));
  throw std::invalid_argument("bad victim spec '" + spec +
                              "' (expected keyword:<file>, nb:<file> or http:<url>)");
}

namespace {

std::mt19937_64 example_rng(std::uint64_t campaign_seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(campaign_seed),
                    static_cast<std::uint32_t>(campaign_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

metrics::Outcome to_outcome(search::Status s) {
  switch (s) {
    case search::Status::Success: return metrics::Outcome::Success;
    case search::Status::BudgetExhausted: return metrics::Outcome::BudgetExhausted;
    case search::Status::Skipped: return metrics::Outcome::Skipped;
  }
  throw std::logic_error("bad status");
}

}  // namespace

metrics::CampaignReport run_campaign(const dataset::Dataset& ds,
                                     const victim::VictimModel& model,
                                     const lexicon::SynonymLexicon& lex,
                                     const lexicon::StopwordList& stops,
                                     const CampaignOptions& opts) {
  opts.search.validate();
  if (ds.rows.empty()) throw std::invalid_argument("empty dataset");

  std::vector<std::pair<std::string, int>> rows;
  if (opts.sample_n) {
    if (*opts.sample_n > ds.rows.size())
      throw std::invalid_argument("sample exceeds dataset (" +
                                  std::to_string(*opts.sample_n) + " > " +
                                  std::to_string(ds.rows.size()) + ")");
    std::mt19937_64 sample_rng(opts.seed);
    std::sample(ds.rows.begin(), ds.rows.end(), std::back_inserter(rows), *opts.sample_n,
                sample_rng);
  } else {
    rows = ds.rows;
  }

  std::vector<metrics::ExampleRecord> records(rows.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      try {
        const auto& [raw, label] = rows[i];
        auto tokenized = text::TokenizedText::tokenize(raw);
        auto rng = example_rng(opts.seed, i);
        auto result = search::run(tokenized, static_cast<std::size_t>(label), model, lex,
                                  stops, opts.search, rng);
        metrics::ExampleRecord rec;
        rec.index = i;
        rec.original_text = raw;
        rec.original_label = label;
        rec.status = to_outcome(result.status);
        if (result.status == search::Status::Success) {
          rec.adversarial_text = result.adversarial_text;
          rec.change_rate = result.adversarial_change_rate;
        }
        rec.queries = result.queries;
        rec.elapsed = result.elapsed_seconds;
        rec.iterations = result.iterations_used;
        records[i] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(rows.size());
        return;
      }
    }
  };

  int workers = std::max(1, opts.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  return metrics::aggregate(std::move(records));
}

std::vector<AblationRow> run_ablation(const dataset::Dataset& ds,
                                      const victim::VictimModel& model,
                                      const lexicon::SynonymLexicon& lex,
                                      const lexicon::StopwordList& stops,
                                      const CampaignOptions& base,
                                      const std::vector<std::uint64_t>& seeds) {
  using search::InertiaMode;
  using search::InitMode;
  using search::MutationMode;
  struct Variant {
    const char* name;
    InitMode init;
    InertiaMode inertia;
    MutationMode mutation;
  };
  const Variant variants[] = {
      {"brownian+linear+none", InitMode::Brownian, InertiaMode::Linear, MutationMode::Off},
      {"levy+linear+none", InitMode::Levy, InertiaMode::Linear, MutationMode::Off},
      {"levy+adaptive+none", InitMode::Levy, InertiaMode::Adaptive, MutationMode::Off},
      {"levy+adaptive+greedy", InitMode::Levy, InertiaMode::Adaptive, MutationMode::Greedy},
  };

  std::vector<AblationRow> rows;
  for (const auto& v : variants) {
    AblationRow row;
    row.name = v.name;
    double s_sum = 0.0, c_sum = 0.0, t_sum = 0.0, q_sum = 0.0;
    std::size_t c_runs = 0;
    for (std::uint64_t seed : seeds) {
      CampaignOptions opts = base;
      opts.seed = seed;
      opts.search.init_mode = v.init;
      opts.search.inertia_mode = v.inertia;
      opts.search.mutation_mode = v.mutation;
      auto report = run_campaign(ds, model, lex, stops, opts);
      s_sum += report.summary.s_rate;
      q_sum += report.summary.mean_queries;
      if (report.summary.mean_c_rate) {
        c_sum += *report.summary.mean_c_rate;
        t_sum += *report.summary.mean_time_per_success;
        ++c_runs;
      }
    }
    auto runs = static_cast<double>(seeds.size());
    row.mean_s_rate = s_sum / runs;
    row.mean_queries = q_sum / runs;
    if (c_runs > 0) {
      row.mean_c_rate = c_sum / static_cast<double>(c_runs);
      row.mean_time_per_success = t_sum / static_cast<double>(c_runs);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace leap::campaign
