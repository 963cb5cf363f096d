#ifndef LEAP_CAMPAIGN_HPP
#define LEAP_CAMPAIGN_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leap/dataset.hpp"
#include "leap/lexicon.hpp"
#include "leap/metrics.hpp"
#include "leap/search.hpp"
#include "leap/victim.hpp"

namespace leap::campaign {

struct CampaignOptions {
  search::SearchConfig search;
  std::uint64_t seed = 0;
  std::optional<std::size_t> sample_n;  // default: whole dataset
  int workers = 1;
};

/// `keyword:<weights.json>` | `nb:<corpus.csv>` | `http:<url>`.
std::unique_ptr<victim::VictimModel> make_victim(const std::string& spec);

/// Runs the search over each (sampled) dataset row on a bounded worker
/// pool. Every example owns an rng stream derived from (seed, index), so
/// results are independent of worker count and scheduling. Records are
/// ordered by example index.
metrics::CampaignReport run_campaign(const dataset::Dataset& ds,
                                     const victim::VictimModel& model,
                                     const lexicon::SynonymLexicon& lex,
                                     const lexicon::StopwordList& stops,
                                     const CampaignOptions& opts);

struct AblationRow {
  std::string name;
  double mean_s_rate = 0.0;
  double mean_c_rate = 0.0;            // over runs that had successes
  double mean_time_per_success = 0.0;  // seconds, likewise
  double mean_queries = 0.0;
};

/// The four variants of the ablation study, run over the same sample for
/// each seed: baseline init + linear inertia + no mutation, then each
/// component restored in turn, then the full method.
std::vector<AblationRow> run_ablation(const dataset::Dataset& ds,
                                      const victim::VictimModel& model,
                                      const lexicon::SynonymLexicon& lex,
                                      const lexicon::StopwordList& stops,
                                      const CampaignOptions& base,
                                      const std::vector<std::uint64_t>& seeds);

}  // namespace leap::campaign

#endif
