#ifndef LEAP_METRICS_HPP
#define LEAP_METRICS_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leap/victim.hpp"

namespace leap::metrics {

enum class Outcome { Success, BudgetExhausted, Skipped };

std::string to_string(Outcome o);
Outcome outcome_from_string(const std::string& s);

struct ExampleRecord {
  std::size_t index = 0;
  std::string original_text;
  int original_label = 0;
  Outcome status = Outcome::BudgetExhausted;
  std::optional<std::string> adversarial_text;
  std::optional<double> change_rate;
  std::uint64_t queries = 0;
  double elapsed = 0.0;  // seconds
  int iterations = 0;
};

struct Summary {
  std::size_t attempted = 0;
  std::size_t successes = 0;
  std::size_t skipped_count = 0;
  double s_rate = 0.0;
  std::optional<double> mean_c_rate;
  double mean_queries = 0.0;
  std::optional<double> mean_time_per_success;
  double total_wall_seconds = 0.0;
};

struct CampaignReport {
  std::vector<ExampleRecord> records;
  Summary summary;
};

/// S-rate = successes / attempted; C-rate and time averaged over
/// successes only; skipped examples excluded everywhere.
/// Throws if no record was attempted.
CampaignReport aggregate(std::vector<ExampleRecord> records);

void write_jsonl(const CampaignReport& report, std::ostream& out);
void write_jsonl(const CampaignReport& report, const std::filesystem::path& path);
CampaignReport read_jsonl(const std::filesystem::path& path);

struct TransferRecord {
  std::size_t index = 0;
  bool still_adversarial = false;
};

struct TransferResult {
  std::vector<TransferRecord> records;
  double transfer_rate = 0.0;
};

/// Re-predicts every successful adversarial text on another victim.
/// Transfer rate is the fraction still misclassified against the
/// original labels. The input report is not modified.
TransferResult replay(const CampaignReport& report, const victim::VictimModel& other);

/// Appends successful (adversarial text, original label) pairs to the
/// corpus rows and writes them in dataset CSV format.
void export_training_set(const CampaignReport& report,
                         const std::vector<std::pair<std::string, int>>& original_corpus,
                         const std::filesystem::path& path);

/// Optional external fluency scorer. Same wire shape as the HTTP victim:
/// POST {endpoint}/ppl with {"texts": [...]} returns {"ppl": [...]}.
/// No language model ships with this project.
class PerplexityScorer {
 public:
  explicit PerplexityScorer(std::string endpoint,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));
  std::vector<double> score(const std::vector<std::string>& texts) const;

 private:
  std::string host_;
  std::string path_prefix_;
  std::chrono::milliseconds timeout_;
};

}  // namespace leap::metrics

#endif
