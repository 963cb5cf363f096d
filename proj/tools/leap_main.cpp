#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "leap/campaign.hpp"
#include "leap/dataset.hpp"
#include "leap/lexicon.hpp"
#include "leap/metrics.hpp"
#include "leap/search.hpp"

namespace {

using leap::campaign::CampaignOptions;
using leap::search::SearchConfig;

struct CommonArgs {
  std::string config_path;
  std::string dataset_path;
  std::string victim_spec;
  std::string out_path;
  std::string wordnet_dir;
  std::string lexicon_path;
  std::string stopwords_path;
  std::uint64_t seed = 0;
  std::size_t sample_n = 0;  // 0: whole dataset
  int workers = 1;
  std::string init_mode;      // levy|brownian
  std::string inertia_mode;   // adaptive|linear
  std::string mutation_mode;  // greedy|off
};

leap::search::InitMode parse_init(const std::string& s) {
  if (s == "levy") return leap::search::InitMode::Levy;
  if (s == "brownian") return leap::search::InitMode::Brownian;
  throw CLI::ValidationError("--init must be levy or brownian");
}

leap::search::InertiaMode parse_inertia(const std::string& s) {
  if (s == "adaptive") return leap::search::InertiaMode::Adaptive;
  if (s == "linear") return leap::search::InertiaMode::Linear;
  throw CLI::ValidationError("--inertia must be adaptive or linear");
}

leap::search::MutationMode parse_mutation(const std::string& s) {
  if (s == "greedy") return leap::search::MutationMode::Greedy;
  if (s == "off") return leap::search::MutationMode::Off;
  throw CLI::ValidationError("--mutation must be greedy or off");
}

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON config file");
  cmd->add_option("--dataset", a.dataset_path, "dataset CSV (header text,label)");
  cmd->add_option("--victim", a.victim_spec, "keyword:<file> | nb:<file> | http:<url>");
  cmd->add_option("--out", a.out_path, "output path");
  cmd->add_option("--seed", a.seed, "campaign seed");
  cmd->add_option("--sample", a.sample_n, "number of examples to sample");
  cmd->add_option("--workers", a.workers, "worker thread count");
  cmd->add_option("--wordnet", a.wordnet_dir, "WordNet data directory");
  cmd->add_option("--lexicon", a.lexicon_path, "prebuilt lexicon JSON");
  cmd->add_option("--stopwords", a.stopwords_path, "stopword file");
  cmd->add_option("--init", a.init_mode, "population init: levy | brownian");
  cmd->add_option("--inertia", a.inertia_mode, "inertia mode: adaptive | linear");
  cmd->add_option("--mutation", a.mutation_mode, "mutation mode: greedy | off");
}

// Config file provides defaults; command-line flags win.
void merge_config(const CLI::App* cmd, CommonArgs& a, CampaignOptions& opts) {
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) throw std::runtime_error("cannot open config: " + a.config_path);
    nlohmann::json j = nlohmann::json::parse(in);
    SearchConfig& s = opts.search;
    s.pop_size = j.value("pop_size", s.pop_size);
    s.max_iters = j.value("max_iters", s.max_iters);
    s.omega_min = j.value("omega_min", s.omega_min);
    s.omega_max = j.value("omega_max", s.omega_max);
    s.p1 = j.value("p1", s.p1);
    s.p2 = j.value("p2", s.p2);
    s.gamma = j.value("gamma", s.gamma);
    s.v_min = j.value("v_min", s.v_min);
    s.v_max = j.value("v_max", s.v_max);
    s.max_change_rate = j.value("max_change_rate", s.max_change_rate);
    if (j.contains("levy_beta"))
      s.levy_params = leap::levy::LevyParams::make(j["levy_beta"].get<double>());
    if (j.contains("init_mode")) s.init_mode = parse_init(j["init_mode"]);
    if (j.contains("inertia_mode")) s.inertia_mode = parse_inertia(j["inertia_mode"]);
    if (j.contains("mutation_mode")) s.mutation_mode = parse_mutation(j["mutation_mode"]);
    s.move_prob_schedule = j.value("move_prob_schedule", s.move_prob_schedule);
    if (j.contains("seed") && cmd->count("--seed") == 0) a.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample") && cmd->count("--sample") == 0)
      a.sample_n = j["sample"].get<std::size_t>();
    if (j.contains("workers") && cmd->count("--workers") == 0)
      a.workers = j["workers"].get<int>();
    auto str = [&](const char* key, std::string& dst, const char* flag) {
      if (j.contains(key) && cmd->count(flag) == 0) dst = j[key].get<std::string>();
    };
    str("dataset", a.dataset_path, "--dataset");
    str("victim", a.victim_spec, "--victim");
    str("out", a.out_path, "--out");
    str("wordnet", a.wordnet_dir, "--wordnet");
    str("lexicon", a.lexicon_path, "--lexicon");
    str("stopwords", a.stopwords_path, "--stopwords");
  }
  if (cmd->count("--init")) opts.search.init_mode = parse_init(a.init_mode);
  if (cmd->count("--inertia")) opts.search.inertia_mode = parse_inertia(a.inertia_mode);
  if (cmd->count("--mutation")) opts.search.mutation_mode = parse_mutation(a.mutation_mode);
  opts.seed = a.seed;
  opts.search.seed = a.seed;
  if (a.sample_n > 0) opts.sample_n = a.sample_n;
  opts.workers = a.workers;
}

leap::lexicon::SynonymLexicon load_lexicon(const CommonArgs& a) {
  if (!a.lexicon_path.empty())
    return leap::lexicon::SynonymLexicon::load_json(a.lexicon_path);
  if (!a.wordnet_dir.empty())
    return leap::lexicon::SynonymLexicon::load_wordnet(a.wordnet_dir);
  throw std::runtime_error("need --lexicon or --wordnet");
}

int cmd_run(const CLI::App* cmd, CommonArgs& a) {
  CampaignOptions opts;
  merge_config(cmd, a, opts);
  if (a.dataset_path.empty()) throw std::runtime_error("missing --dataset");
  if (a.victim_spec.empty()) throw std::runtime_error("missing --victim");
  if (a.stopwords_path.empty()) throw std::runtime_error("missing --stopwords");

  auto ds = leap::dataset::load_csv(a.dataset_path);
  auto model = leap::campaign::make_victim(a.victim_spec);
  auto lex = load_lexicon(a);
  auto stops = leap::lexicon::StopwordList::load(a.stopwords_path);

  auto report = leap::campaign::run_campaign(ds, *model, lex, stops, opts);
  if (a.out_path.empty()) {
    leap::metrics::write_jsonl(report, std::cout);
  } else {
    leap::metrics::write_jsonl(report, a.out_path);
  }
  std::fprintf(stderr,
               "attempted=%zu successes=%zu skipped=%zu s_rate=%.4f mean_queries=%.1f\n",
               report.summary.attempted, report.summary.successes,
               report.summary.skipped_count, report.summary.s_rate,
               report.summary.mean_queries);
  return 0;
}

int cmd_ablate(const CLI::App* cmd, CommonArgs& a, int seed_count) {
  CampaignOptions opts;
  merge_config(cmd, a, opts);
  if (a.dataset_path.empty()) throw std::runtime_error("missing --dataset");
  if (a.victim_spec.empty()) throw std::runtime_error("missing --victim");
  if (a.stopwords_path.empty()) throw std::runtime_error("missing --stopwords");

  auto ds = leap::dataset::load_csv(a.dataset_path);
  auto model = leap::campaign::make_victim(a.victim_spec);
  auto lex = load_lexicon(a);
  auto stops = leap::lexicon::StopwordList::load(a.stopwords_path);

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < seed_count; ++i) seeds.push_back(a.seed + static_cast<std::uint64_t>(i));
  auto rows = leap::campaign::run_ablation(ds, *model, lex, stops, opts, seeds);

  std::printf("%-24s %8s %8s %12s %12s\n", "variant", "S-rate", "C-rate", "T-O(s/suc)",
              "Q-N");
  for (const auto& r : rows)
    std::printf("%-24s %8.4f %8.4f %12.4f %12.1f\n", r.name.c_str(), r.mean_s_rate,
                r.mean_c_rate, r.mean_time_per_success, r.mean_queries);

  if (!a.out_path.empty()) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      j.push_back({{"variant", r.name},
                   {"mean_s_rate", r.mean_s_rate},
                   {"mean_c_rate", r.mean_c_rate},
                   {"mean_time_per_success", r.mean_time_per_success},
                   {"mean_queries", r.mean_queries}});
    std::ofstream out(a.out_path);
    out << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_replay(const std::string& report_path, const std::string& victim_spec) {
  auto report = leap::metrics::read_jsonl(report_path);
  auto model = leap::campaign::make_victim(victim_spec);
  auto result = leap::metrics::replay(report, *model);
  for (const auto& r : result.records)
    std::printf("index=%zu transferred=%s\n", r.index, r.still_adversarial ? "yes" : "no");
  std::printf("transfer_rate=%.4f (%zu cases)\n", result.transfer_rate,
              result.records.size());
  return 0;
}

int cmd_lexicon(const CommonArgs& a) {
  if (a.wordnet_dir.empty()) throw std::runtime_error("missing --wordnet");
  if (a.out_path.empty()) throw std::runtime_error("missing --out");
  auto lex = leap::lexicon::SynonymLexicon::load_wordnet(a.wordnet_dir);
  if (!a.dataset_path.empty()) {
    auto ds = leap::dataset::load_csv(a.dataset_path);
    std::set<std::string> vocab;
    for (const auto& [raw, label] : ds.rows) {
      auto t = leap::text::TokenizedText::tokenize(raw);
      for (std::size_t d = 0; d < t.word_count(); ++d) vocab.insert(t.word_lower(d));
    }
    lex = lex.restrict_to(vocab);
  }
  lex.save_json(a.out_path);
  std::printf("wrote %zu entries to %s\n", lex.entries().size(), a.out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"black-box adversarial test-case generation for text classifiers"};
  app.require_subcommand(1);

  CommonArgs run_args, ablate_args, lex_args;
  std::string report_path, replay_victim;
  int seed_count = 10;

  auto* run = app.add_subcommand("run", "run a campaign and write a JSONL report");
  add_common_flags(run, run_args);

  auto* ablate = app.add_subcommand("ablate", "compare the four component variants");
  add_common_flags(ablate, ablate_args);
  ablate->add_option("--seeds", seed_count, "number of consecutive seeds");

  auto* replay = app.add_subcommand("replay", "re-test a report's adversarials on another victim");
  replay->add_option("report", report_path, "JSONL report path")->required();
  replay->add_option("--victim", replay_victim, "victim spec")->required();

  auto* lexicon = app.add_subcommand("lexicon", "build a synonym lexicon from WordNet data");
  add_common_flags(lexicon, lex_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run, run_args);
    if (ablate->parsed()) return cmd_ablate(ablate, ablate_args, seed_count);
    if (replay->parsed()) return cmd_replay(report_path, replay_victim);
    if (lexicon->parsed()) return cmd_lexicon(lex_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
