#ifndef LEAP_VICTIM_HPP
#define LEAP_VICTIM_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace leap::victim {

/// Probability vector over classes. Argmax ties break to the lowest index.
struct Prediction {
  std::vector<double> probabilities;

  std::size_t label_count() const { return probabilities.size(); }
  std::size_t argmax() const;
};

/// 1 - P(original label): the quantity the swarm maximizes.
double fitness(const Prediction& pred, std::size_t original_label);

/// True iff the predicted label differs from the original one.
bool is_adversarial(const Prediction& pred, std::size_t original_label);

/// Black-box classifier. Implementations must be safe for concurrent
/// predict calls. Batching is an optimization only; one query is counted
/// per text element regardless.
class VictimModel {
 public:
  virtual ~VictimModel() = default;
  virtual std::vector<Prediction> predict_batch(std::span<const std::string> texts) const = 0;
  Prediction predict(const std::string& text) const;
};

class QueryLedger {
 public:
  void add(std::uint64_t n) { total_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t total() const { return total_.load(std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> total_{0};
};

/// Wraps a victim, charging one ledger increment per text evaluated.
class CountingVictim : public VictimModel {
 public:
  CountingVictim(const VictimModel& inner, QueryLedger& ledger)
      : inner_(inner), ledger_(ledger) {}
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override;

 private:
  const VictimModel& inner_;
  QueryLedger& ledger_;
};

std::vector<double> softmax(std::span<const double> scores);

/// Deterministic toy classifier: class scores are sums of per-word weight
/// vectors over the word tokens; probabilities are softmax(scores).
class KeywordVictim : public VictimModel {
 public:
  KeywordVictim(std::map<std::string, std::vector<double>> weights, std::size_t class_count);
  static KeywordVictim load_json(const std::string& path);
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override;
  std::size_t class_count() const { return class_count_; }

 private:
  std::map<std::string, std::vector<double>> weights_;
  std::size_t class_count_;
};

/// Multinomial naive Bayes with add-one smoothing over word tokens.
class NaiveBayesVictim : public VictimModel {
 public:
  static NaiveBayesVictim train(const std::vector<std::pair<std::string, int>>& corpus);
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override;

 private:
  std::vector<std::map<std::string, std::uint64_t>> word_counts_;
  std::vector<std::uint64_t> class_totals_;
  std::vector<std::uint64_t> class_docs_;
  std::uint64_t doc_count_ = 0;
  std::size_t vocab_size_ = 0;
};

struct TransportError : std::runtime_error {
  TransportError(const std::string& what, int attempts)
      : std::runtime_error(what), attempts(attempts) {}
  int attempts;
};

/// HTTP client victim. POST {endpoint}/predict with {"texts": [...]};
/// expects {"probabilities": [[...], ...]} in request order. Retries with
/// exponential backoff up to `max_retries` attempts.
class HttpVictim : public VictimModel {
 public:
  explicit HttpVictim(std::string endpoint,
                      std::chrono::milliseconds timeout = std::chrono::seconds(30),
                      int max_retries = 3,
                      std::chrono::milliseconds initial_backoff = std::chrono::milliseconds(100));
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override;

 private:
  std::string host_;
  std::string path_prefix_;
  std::chrono::milliseconds timeout_;
  int max_retries_;
  std::chrono::milliseconds initial_backoff_;
};

}  // namespace leap::victim

#endif
