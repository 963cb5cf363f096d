#ifndef LEAP_SEARCH_HPP
#define LEAP_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "leap/levy.hpp"
#include "leap/lexicon.hpp"
#include "leap/text.hpp"
#include "leap/victim.hpp"

namespace leap::search {

enum class InitMode { Levy, Brownian };
enum class InertiaMode { Adaptive, Linear };
enum class MutationMode { Greedy, Off };

struct SearchConfig {
  int pop_size = 60;
  int max_iters = 20;
  double omega_min = 0.2;
  double omega_max = 0.8;
  double p1 = 0.8;
  double p2 = 0.2;
  double gamma = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;
  double max_change_rate = 0.25;
  levy::LevyParams levy_params = levy::LevyParams::make(1.5);
  InitMode init_mode = InitMode::Levy;
  InertiaMode inertia_mode = InertiaMode::Adaptive;
  MutationMode mutation_mode = MutationMode::Greedy;
  bool move_prob_schedule = false;  // linear P1/P2 schedule, off by default
  std::uint64_t seed = 0;

  void validate() const;
};

struct FitStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct Particle {
  text::CandidateText position;
  std::vector<double> velocity;  // one entry per word dimension
  double fitness = 0.0;
  text::CandidateText lbest;
  double lbest_fitness = 0.0;
};

struct Swarm {
  std::vector<Particle> particles;
  text::CandidateText gbest;
  double gbest_fitness = 0.0;
  int iteration = 0;
  FitStats stats;
};

struct SaliencyEntry {
  std::string best_neighbor;
  double best_fitness = 0.0;
};

/// Per mutable word dimension: the single-substitution synonym with the
/// highest fitness against the original text.
struct SaliencyTable {
  std::map<std::size_t, SaliencyEntry> entries;
  double original_fitness = 0.0;
};

enum class Status { Success, BudgetExhausted, Skipped };

struct SearchResult {
  Status status = Status::BudgetExhausted;
  std::optional<text::CandidateText> adversarial;
  std::string adversarial_text;
  double adversarial_change_rate = 0.0;
  std::string gbest_text;
  double gbest_fitness = 0.0;
  int iterations_used = 0;
  std::uint64_t queries = 0;
  double elapsed_seconds = 0.0;
};

/// Mutable dimensions of `t`: word positions that are not stopwords and
/// have at least one lexicon synonym.
std::vector<std::size_t> mutable_dims(const text::TokenizedText& t,
                                      const lexicon::SynonymLexicon& lex,
                                      const lexicon::StopwordList& stops);

SaliencyTable saliency_pass(const text::TokenizedText& t,
                            const lexicon::SynonymLexicon& lex,
                            const lexicon::StopwordList& stops,
                            const victim::VictimModel& model,
                            std::size_t original_label);

Swarm init_population(const text::TokenizedText& t, const SaliencyTable& table,
                      const SearchConfig& cfg, const victim::VictimModel& model,
                      std::size_t original_label, std::mt19937_64& rng);

double adaptive_inertia(double fit_n, const FitStats& stats, const SearchConfig& cfg,
                        std::mt19937_64& rng);

/// Baseline schedule: omega decreases linearly omega_max -> omega_min.
double linear_inertia(int iteration, const SearchConfig& cfg);

std::vector<double> update_velocity(const Particle& p, const text::CandidateText& gbest,
                                    double omega, const SearchConfig& cfg);

text::CandidateText update_position(const text::CandidateText& position,
                                    const std::vector<double>& velocity,
                                    const text::CandidateText& target, double move_prob,
                                    const SearchConfig& cfg, std::mt19937_64& rng);

/// Mutation gate probability 1 - gamma * change_rate, floored at 0.
double mutation_probability(const text::CandidateText& position, const SearchConfig& cfg);

using EvalObserver =
    std::function<void(const text::CandidateText&, const victim::Prediction&)>;

/// One greedy mutation step: gated by mutation_probability, scans the
/// best-neighbor substitution of every mutable dimension and adopts the
/// single strictly-improving variant with the highest fitness (ties to
/// the lowest dimension). Returns true when the particle changed.
bool greedy_mutate(Particle& p, const SaliencyTable& table,
                   const victim::VictimModel& model, std::size_t original_label,
                   const SearchConfig& cfg, std::mt19937_64& rng,
                   const EvalObserver& observer = {});

SearchResult run(const text::TokenizedText& t, std::size_t original_label,
                 const victim::VictimModel& model, const lexicon::SynonymLexicon& lex,
                 const lexicon::StopwordList& stops, const SearchConfig& cfg,
                 std::mt19937_64& rng);

}  // namespace leap::search

#endif
