#include "leap/victim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "leap/text.hpp"
#include "httplib.h"
#include "json.hpp"

namespace leap::victim {

std::size_t Prediction::argmax() const {
  if (probabilities.empty()) throw std::invalid_argument("empty prediction");
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
}

double fitness(const Prediction& pred, std::size_t original_label) {
  if (original_label >= pred.probabilities.size())
    throw std::out_of_range("original label out of range");
  return 1.0 - pred.probabilities[original_label];
}

bool is_adversarial(const Prediction& pred, std::size_t original_label) {
  return pred.argmax() != original_label;
}

Prediction VictimModel::predict(const std::string& text) const {
  return predict_batch(std::span<const std::string>(&text, 1)).front();
}

std::vector<Prediction> CountingVictim::predict_batch(std::span<const std::string> texts) const {
  ledger_.add(texts.size());
  return inner_.predict_batch(texts);
}

std::vector<double> softmax(std::span<const double> scores) {
  double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

KeywordVictim::KeywordVictim(std::map<std::string, std::vector<double>> weights,
                             std::size_t class_count)
    : weights_(std::move(weights)), class_count_(class_count) {
  if (class_count_ < 2) throw std::invalid_argument("keyword victim needs >= 2 classes");
  for (const auto& [word, w] : weights_)
    if (w.size() != class_count_)
      throw std::invalid_argument("weight vector size mismatch for '" + word + "'");
}

KeywordVictim KeywordVictim::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  std::map<std::string, std::vector<double>> weights;
  for (auto& [word, w] : j.at("weights").items())
    weights.emplace(text::to_lower(word), w.get<std::vector<double>>());
  return KeywordVictim(std::move(weights), j.at("classes").get<std::size_t>());
}

std::vector<Prediction> KeywordVictim::predict_batch(std::span<const std::string> texts) const {
  std::vector<Prediction> out;
  out.reserve(texts.size());
  for (const auto& raw : texts) {
    std::vector<double> scores(class_count_, 0.0);
    auto toks = text::TokenizedText::tokenize(raw);
    for (std::size_t d = 0; d < toks.word_count(); ++d) {
      auto it = weights_.find(toks.word_lower(d));
      if (it == weights_.end()) continue;
      for (std::size_t c = 0; c < class_count_; ++c) scores[c] += it->second[c];
    }
    out.push_back(Prediction{softmax(scores)});
  }
  return out;
}

NaiveBayesVictim NaiveBayesVictim::train(
    const std::vector<std::pair<std::string, int>>& corpus) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  int max_label = 0;
  for (const auto& [t, l] : corpus) {
    if (l < 0) throw std::invalid_argument("negative label");
    max_label = std::max(max_label, l);
  }
  NaiveBayesVictim nb;
  std::size_t classes = static_cast<std::size_t>(max_label) + 1;
  nb.word_counts_.resize(classes);
  nb.class_totals_.assign(classes, 0);
  nb.class_docs_.assign(classes, 0);
  std::set<std::string> vocab;
  for (const auto& [raw, label] : corpus) {
    auto toks = text::TokenizedText::tokenize(raw);
    auto c = static_cast<std::size_t>(label);
    ++nb.class_docs_[c];
    ++nb.doc_count_;
    for (std::size_t d = 0; d < toks.word_count(); ++d) {
      const std::string& w = toks.word_lower(d);
      ++nb.word_counts_[c][w];
      ++nb.class_totals_[c];
      vocab.insert(w);
    }
  }
  nb.vocab_size_ = vocab.size();
  return nb;
}

std::vector<Prediction> NaiveBayesVictim::predict_batch(
    std::span<const std::string> texts) const {
  std::size_t classes = word_counts_.size();
  std::vector<Prediction> out;
  out.reserve(texts.size());
  for (const auto& raw : texts) {
    auto toks = text::TokenizedText::tokenize(raw);
    std::vector<double> log_post(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      // add-one smoothing on priors as well, so empty classes stay finite
      double lp = std::log((class_docs_[c] + 1.0) / (doc_count_ + classes));
      double denom = std::log(class_totals_[c] + vocab_size_ + 1.0);
      for (std::size_t d = 0; d < toks.word_count(); ++d) {
        auto it = word_counts_[c].find(toks.word_lower(d));
        double count = it != word_counts_[c].end() ? static_cast<double>(it->second) : 0.0;
        lp += std::log(count + 1.0) - denom;
      }
      log_post[c] = lp;
    }
    out.push_back(Prediction{softmax(log_post)});
  }
  return out;
}

HttpVictim::HttpVictim(std::string endpoint, std::chrono::milliseconds timeout,
                       int max_retries, std::chrono::milliseconds initial_backoff)
    : timeout_(timeout), max_retries_(max_retries), initial_backoff_(initial_backoff) {
  // split "http://host:port/prefix" into host part and path prefix
  auto scheme_end = endpoint.find("://");
  std::size_t path_start =
      endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) {
    host_ = endpoint;
  } else {
    host_ = endpoint.substr(0, path_start);
    path_prefix_ = endpoint.substr(path_start);
    if (path_prefix_ == "/") path_prefix_.clear();
  }
}

std::vector<Prediction> HttpVictim::predict_batch(std::span<const std::string> texts) const {
  nlohmann::json body;
  body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  std::string payload = body.dump();

  std::string last_error;
  auto backoff = initial_backoff_;
  for (int attempt = 1; attempt <= max_retries_; ++attempt) {
    httplib::Client client(host_);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
    auto res = client.Post(path_prefix_ + "/predict", payload, "application/json");
    if (res && res->status == 200) {
      nlohmann::json j = nlohmann::json::parse(res->body);
      std::vector<Prediction> out;
      for (const auto& row : j.at("probabilities"))
        out.push_back(Prediction{row.get<std::vector<double>>()});
      if (out.size() != texts.size())
        throw TransportError("victim returned wrong row count", attempt);
      return out;
    }
    last_error = res ? "http status " + std::to_string(res->status)
                     : "transport failure contacting " + host_;
    if (attempt < max_retries_) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError(last_error + " after " + std::to_string(max_retries_) + " attempts",
                       max_retries_);
}

}  // namespace leap::victim
