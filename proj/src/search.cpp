#include "leap/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace leap::search {

namespace {

using text::CandidateText;
using text::TokenizedText;
using victim::Prediction;

std::size_t max_replacements(std::size_t word_count, double max_change_rate) {
  return static_cast<std::size_t>(
      std::floor(max_change_rate * static_cast<double>(word_count) + 1e-12));
}

std::vector<double> softmax_probs(const std::vector<double>& v) {
  double m = *std::max_element(v.begin(), v.end());
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::exp(v[i] - m);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

// Invariant checks on every state a particle may hold.
void check_feasible(const CandidateText& c, const SearchConfig& cfg,
                    const lexicon::SynonymLexicon* lex, const lexicon::StopwordList* stops) {
  std::size_t cap = max_replacements(c.base->word_count(), cfg.max_change_rate);
  if (c.replacements.size() > cap) throw std::logic_error("change rate cap violated");
  for (const auto& [dim, word] : c.replacements) {
    if (word == c.base->word_lower(dim))
      throw std::logic_error("replacement equals original word");
    if (stops && stops->contains(c.base->word_lower(dim)))
      throw std::logic_error("stopword position replaced");
    if (lex) {
      const auto& syns = lex->synonyms(c.base->word_lower(dim));
      if (std::find(syns.begin(), syns.end(), word) == syns.end())
        throw std::logic_error("replacement not a lexicon synonym");
    }
  }
}

void check_velocity(const std::vector<double>& v, const SearchConfig& cfg) {
  for (double x : v)
    if (!(x >= -cfg.v_max - 1e-12 && x <= cfg.v_max + 1e-12))
      throw std::logic_error("velocity outside [-v_max, v_max]");
}

struct FoundAdversarial {
  CandidateText candidate;
  double change_rate = 0.0;
  std::size_t order = 0;
};

// Keeps the best adversarial seen within one evaluation batch: lowest
// change rate, then earliest encounter.
class AdversarialSink {
 public:
  explicit AdversarialSink(std::size_t original_label) : label_(original_label) {}

  void consider(const CandidateText& c, const Prediction& pred) {
    ++order_;
    if (!victim::is_adversarial(pred, label_)) return;
    double cr = text::change_rate(c);
    if (!best_ || cr < best_->change_rate) best_ = FoundAdversarial{c, cr, order_};
  }

  const std::optional<FoundAdversarial>& best() const { return best_; }

 private:
  std::size_t label_;
  std::size_t order_ = 0;
  std::optional<FoundAdversarial> best_;
};

FitStats compute_stats(const std::vector<Particle>& particles) {
  FitStats s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& p : particles) {
    s.min = std::min(s.min, p.fitness);
    s.max = std::max(s.max, p.fitness);
    sum += p.fitness;
  }
  s.mean = sum / static_cast<double>(particles.size());
  return s;
}

// Evaluates every single-synonym substitution at the mutable dimensions
// and records the best neighbor per dimension. original_fitness must
// already be set on `table`.
void fill_saliency(SaliencyTable& table, const TokenizedText& t,
                   const lexicon::SynonymLexicon& lex, const lexicon::StopwordList& stops,
                   const victim::VictimModel& model, std::size_t original_label,
                   const EvalObserver& observer) {
  auto dims = mutable_dims(t, lex, stops);
  std::vector<std::string> texts;
  std::vector<CandidateText> variants;
  for (std::size_t d : dims) {
    for (const auto& syn : lex.synonyms(t.word_lower(d))) {
      CandidateText c{&t, {{d, syn}}};
      texts.push_back(text::realize(c));
      variants.push_back(std::move(c));
    }
  }
  if (variants.empty()) return;
  auto preds = model.predict_batch(texts);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (observer) observer(variants[i], preds[i]);
    std::size_t d = variants[i].replacements.begin()->first;
    const std::string& word = variants[i].replacements.begin()->second;
    double fit = victim::fitness(preds[i], original_label);
    auto it = table.entries.find(d);
    // Ties keep the lexicographically smallest word; the lexicon list is
    // sorted, so strict improvement suffices.
    if (it == table.entries.end()) {
      table.entries.emplace(d, SaliencyEntry{word, fit});
    } else if (fit > it->second.best_fitness) {
      it->second = SaliencyEntry{word, fit};
    }
  }
}

Swarm build_population(const TokenizedText& t, const SaliencyTable& table,
                       const SearchConfig& cfg, const victim::VictimModel& model,
                       std::size_t original_label, std::mt19937_64& rng,
                       const EvalObserver& observer) {
  if (table.entries.empty()) throw std::invalid_argument("empty saliency table");
  std::size_t n = t.word_count();

  std::vector<std::size_t> dims;
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& [d, entry] : table.entries) {
    dims.push_back(d);
    double w = std::max(entry.best_fitness - table.original_fitness, 0.0) + 1e-6;
    weights.push_back(w);
    total += w;
  }

  Swarm swarm;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < cfg.pop_size; ++i) {
    double u = unit(rng) * total;
    std::size_t pick = weights.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      acc += weights[k];
      if (u < acc) {
        pick = k;
        break;
      }
    }
    std::size_t d = dims[pick];
    Particle p;
    p.position = CandidateText{&t, {{d, table.entries.at(d).best_neighbor}}};
    p.velocity.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      p.velocity[k] = cfg.init_mode == InitMode::Levy
                          ? levy::init_velocity(cfg.levy_params, cfg.v_min, cfg.v_max, rng)
                          : levy::brownian_step(cfg.v_min, cfg.v_max, rng);
      p.velocity[k] = std::clamp(p.velocity[k], -cfg.v_max, cfg.v_max);
    }
    swarm.particles.push_back(std::move(p));
  }

  std::vector<std::string> texts;
  texts.reserve(swarm.particles.size());
  for (const auto& p : swarm.particles) texts.push_back(text::realize(p.position));
  auto preds = model.predict_batch(texts);
  for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
    auto& p = swarm.particles[i];
    if (observer) observer(p.position, preds[i]);
    p.fitness = victim::fitness(preds[i], original_label);
    p.lbest = p.position;
    p.lbest_fitness = p.fitness;
    if (i == 0 || p.fitness > swarm.gbest_fitness) {
      swarm.gbest = p.position;
      swarm.gbest_fitness = p.fitness;
    }
  }
  swarm.stats = compute_stats(swarm.particles);
  return swarm;
}

}  // namespace

void SearchConfig::validate() const {
  if (pop_size < 2) throw std::invalid_argument("pop_size must be >= 2");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
  if (!(omega_min < omega_max)) throw std::invalid_argument("require omega_min < omega_max");
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0)
    throw std::invalid_argument("move probabilities must be in [0,1]");
  if (!(max_change_rate > 0.0 && max_change_rate <= 1.0))
    throw std::invalid_argument("max_change_rate must be in (0,1]");
  if (!(v_min < v_max)) throw std::invalid_argument("require v_min < v_max");
}

std::vector<std::size_t> mutable_dims(const TokenizedText& t,
                                      const lexicon::SynonymLexicon& lex,
                                      const lexicon::StopwordList& stops) {
  std::vector<std::size_t> dims;
  for (std::size_t d = 0; d < t.word_count(); ++d) {
    const std::string& w = t.word_lower(d);
    if (stops.contains(w)) continue;
    if (lex.synonyms(w).empty()) continue;
    dims.push_back(d);
  }
  return dims;
}

SaliencyTable saliency_pass(const TokenizedText& t, const lexicon::SynonymLexicon& lex,
                            const lexicon::StopwordList& stops,
                            const victim::VictimModel& model, std::size_t original_label) {
  SaliencyTable table;
  Prediction orig = model.predict(t.raw());
  table.original_fitness = victim::fitness(orig, original_label);
  fill_saliency(table, t, lex, stops, model, original_label, {});
  return table;
}

Swarm init_population(const TokenizedText& t, const SaliencyTable& table,
                      const SearchConfig& cfg, const victim::VictimModel& model,
                      std::size_t original_label, std::mt19937_64& rng) {
  return build_population(t, table, cfg, model, original_label, rng, {});
}

double adaptive_inertia(double fit_n, const FitStats& stats, const SearchConfig& cfg,
                        std::mt19937_64& rng) {
  if (fit_n < stats.mean) {
    double denom = std::max(stats.mean - stats.min, 1e-9);
    double omega = cfg.omega_min + (fit_n - stats.min) * (stats.max - stats.min) / denom;
    return std::clamp(omega, cfg.omega_min, cfg.omega_max);
  }
  double omega_mean = (cfg.omega_min + cfg.omega_max) / 2.0;
  for (int attempt = 0; attempt < 16; ++attempt) {
    double s = levy::levy_step(cfg.levy_params, rng);
    if (s > omega_mean && s < cfg.omega_max) return s;
  }
  return levy::brownian_step(omega_mean, cfg.omega_max, rng);
}

double linear_inertia(int iteration, const SearchConfig& cfg) {
  if (cfg.max_iters <= 1) return cfg.omega_max;
  double frac = static_cast<double>(iteration) / static_cast<double>(cfg.max_iters - 1);
  return cfg.omega_max - (cfg.omega_max - cfg.omega_min) * frac;
}

std::vector<double> update_velocity(const Particle& p, const CandidateText& gbest,
                                    double omega, const SearchConfig& cfg) {
  std::size_t n = p.velocity.size();
  std::vector<double> out(n);
  for (std::size_t d = 0; d < n; ++d) {
    double il = p.lbest.word_at(d) == p.position.word_at(d) ? 1.0 : -1.0;
    double ig = gbest.word_at(d) == p.position.word_at(d) ? 1.0 : -1.0;
    double v = omega * p.velocity[d] + cfg.v_max * (1.0 - omega) * (il + ig);
    out[d] = std::clamp(v, -cfg.v_max, cfg.v_max);
  }
  return out;
}

text::CandidateText update_position(const CandidateText& position,
                                    const std::vector<double>& velocity,
                                    const CandidateText& target, double move_prob,
                                    const SearchConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) >= move_prob) return position;

  std::size_t n = position.base->word_count();
  std::size_t cap = max_replacements(n, cfg.max_change_rate);
  auto probs = softmax_probs(velocity);
  CandidateText out = position;
  for (std::size_t d = 0; d < n; ++d) {
    const std::string& cur = out.word_at(d);
    const std::string& want = target.word_at(d);
    if (cur == want) continue;
    double adopt_prob = std::min(1.0, static_cast<double>(n) * probs[d]);
    if (unit(rng) >= adopt_prob) continue;
    if (want == position.base->word_lower(d)) {
      out.replacements.erase(d);
    } else {
      bool adds = out.replacements.find(d) == out.replacements.end();
      if (adds && out.replacements.size() + 1 > cap) continue;  // cap: skip adoption
      out.replacements[d] = want;
    }
  }
  return out;
}

double mutation_probability(const CandidateText& position, const SearchConfig& cfg) {
  return std::max(0.0, 1.0 - cfg.gamma * text::change_rate(position));
}

bool greedy_mutate(Particle& p, const SaliencyTable& table, const victim::VictimModel& model,
                   std::size_t original_label, const SearchConfig& cfg, std::mt19937_64& rng,
                   const EvalObserver& observer) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) >= mutation_probability(p.position, cfg)) return false;

  std::size_t n = p.position.base->word_count();
  std::size_t cap = max_replacements(n, cfg.max_change_rate);
  std::vector<CandidateText> variants;
  std::vector<std::string> texts;
  for (const auto& [d, entry] : table.entries) {
    if (p.position.word_at(d) == entry.best_neighbor) continue;
    bool adds = p.position.replacements.find(d) == p.position.replacements.end();
    if (adds && p.position.replacements.size() + 1 > cap) continue;
    CandidateText v = p.position;
    v.replacements[d] = entry.best_neighbor;
    texts.push_back(text::realize(v));
    variants.push_back(std::move(v));
  }
  if (variants.empty()) return false;

  auto preds = model.predict_batch(texts);
  std::size_t best_idx = variants.size();
  double best_fit = p.fitness;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (observer) observer(variants[i], preds[i]);
    double fit = victim::fitness(preds[i], original_label);
    if (fit > best_fit) {  // strict improvement; ties keep lowest dimension
      best_fit = fit;
      best_idx = i;
    }
  }
  if (best_idx == variants.size()) return false;
  p.position = std::move(variants[best_idx]);
  p.fitness = best_fit;
  return true;
}

SearchResult run(const TokenizedText& t, std::size_t original_label,
                 const victim::VictimModel& model, const lexicon::SynonymLexicon& lex,
                 const lexicon::StopwordList& stops, const SearchConfig& cfg,
                 std::mt19937_64& rng) {
  cfg.validate();
  auto start = std::chrono::steady_clock::now();
  victim::QueryLedger ledger;
  victim::CountingVictim counted(model, ledger);

  SearchResult result;
  auto finish = [&](Status status) {
    result.status = status;
    result.queries = ledger.total();
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  };
  auto succeed = [&](const FoundAdversarial& found, int iterations) {
    check_feasible(found.candidate, cfg, &lex, &stops);
    result.adversarial = found.candidate;
    result.adversarial_text = text::realize(found.candidate);
    result.adversarial_change_rate = found.change_rate;
    result.iterations_used = iterations;
    return finish(Status::Success);
  };

  Prediction orig = counted.predict(t.raw());
  result.gbest_text = t.raw();
  result.gbest_fitness = victim::fitness(orig, original_label);
  if (victim::is_adversarial(orig, original_label)) return finish(Status::Skipped);

  std::size_t n = t.word_count();
  if (n == 0 || std::floor(cfg.max_change_rate * static_cast<double>(n) + 1e-12) < 1.0)
    return finish(Status::BudgetExhausted);

  // Saliency pre-pass; a single substitution that already flips the
  // label ends the search before any iteration.
  SaliencyTable table;
  table.original_fitness = result.gbest_fitness;
  {
    AdversarialSink sink(original_label);
    fill_saliency(table, t, lex, stops, counted, original_label,
                  [&](const CandidateText& c, const Prediction& pred) {
                    sink.consider(c, pred);
                  });
    if (sink.best()) return succeed(*sink.best(), 0);
    if (table.entries.empty()) return finish(Status::BudgetExhausted);
  }

  AdversarialSink init_sink(original_label);
  Swarm swarm = build_population(t, table, cfg, counted, original_label, rng,
                                 [&](const CandidateText& c, const Prediction& pred) {
                                   init_sink.consider(c, pred);
                                 });
  for (const auto& p : swarm.particles) {
    check_feasible(p.position, cfg, &lex, &stops);
    check_velocity(p.velocity, cfg);
  }
  if (init_sink.best()) return succeed(*init_sink.best(), 0);

  result.gbest_text = text::realize(swarm.gbest);
  result.gbest_fitness = swarm.gbest_fitness;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    swarm.iteration = iter;
    swarm.stats = compute_stats(swarm.particles);

    double p1 = cfg.p1, p2 = cfg.p2;
    if (cfg.move_prob_schedule && cfg.max_iters > 1) {
      // shift emphasis from the local to the global best over time
      double frac = static_cast<double>(iter) / static_cast<double>(cfg.max_iters - 1);
      p1 = cfg.p1 + (cfg.p2 - cfg.p1) * frac;
      p2 = cfg.p2 + (cfg.p1 - cfg.p2) * frac;
    }

    for (auto& p : swarm.particles) {
      double omega = cfg.inertia_mode == InertiaMode::Adaptive
                         ? adaptive_inertia(p.fitness, swarm.stats, cfg, rng)
                         : linear_inertia(iter, cfg);
      p.velocity = update_velocity(p, swarm.gbest, omega, cfg);
      check_velocity(p.velocity, cfg);
      p.position = update_position(p.position, p.velocity, p.lbest, p1, cfg, rng);
      p.position = update_position(p.position, p.velocity, swarm.gbest, p2, cfg, rng);
      check_feasible(p.position, cfg, &lex, &stops);
    }

    {
      AdversarialSink iter_sink(original_label);
      std::vector<std::string> texts;
      texts.reserve(swarm.particles.size());
      for (const auto& p : swarm.particles) texts.push_back(text::realize(p.position));
      auto preds = counted.predict_batch(texts);
      for (std::size_t i = 0; i < swarm.particles.size(); ++i) {
        swarm.particles[i].fitness = victim::fitness(preds[i], original_label);
        iter_sink.consider(swarm.particles[i].position, preds[i]);
      }
      if (iter_sink.best()) return succeed(*iter_sink.best(), iter + 1);
    }

    if (cfg.mutation_mode == MutationMode::Greedy) {
      for (auto& p : swarm.particles) {
        AdversarialSink mut_sink(original_label);
        greedy_mutate(p, table, counted, original_label, cfg, rng,
                      [&](const CandidateText& c, const Prediction& pred) {
                        mut_sink.consider(c, pred);
                      });
        check_feasible(p.position, cfg, &lex, &stops);
        if (mut_sink.best()) return succeed(*mut_sink.best(), iter + 1);
      }
    }

    for (auto& p : swarm.particles) {
      if (p.fitness > p.lbest_fitness) {
        p.lbest = p.position;
        p.lbest_fitness = p.fitness;
      }
      if (p.lbest_fitness > swarm.gbest_fitness) {
        swarm.gbest = p.lbest;
        swarm.gbest_fitness = p.lbest_fitness;
      }
    }
    result.iterations_used = iter + 1;
  }

  result.gbest_text = text::realize(swarm.gbest);
  result.gbest_fitness = swarm.gbest_fitness;
  return finish(Status::BudgetExhausted);
}

}  // namespace leap::search
