#include "leap/metrics.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "leap/dataset.hpp"
#include "httplib.h"
#include "json.hpp"

namespace leap::metrics {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Success: return "success";
    case Outcome::BudgetExhausted: return "budget_exhausted";
    case Outcome::Skipped: return "skipped";
  }
  throw std::logic_error("bad outcome");
}

Outcome outcome_from_string(const std::string& s) {
  if (s == "success") return Outcome::Success;
  if (s == "budget_exhausted") return Outcome::BudgetExhausted;
  if (s == "skipped") return Outcome::Skipped;
  throw std::invalid_argument("unknown outcome '" + s + "'");
}

CampaignReport aggregate(std::vector<ExampleRecord> records) {
  CampaignReport report;
  report.records = std::move(records);
  Summary& s = report.summary;
  double c_rate_sum = 0.0, query_sum = 0.0, success_time_sum = 0.0;
  for (const auto& r : report.records) {
    s.total_wall_seconds += r.elapsed;
    if (r.status == Outcome::Skipped) {
      ++s.skipped_count;
      continue;
    }
    ++s.attempted;
    query_sum += static_cast<double>(r.queries);
    if (r.status == Outcome::Success) {
      ++s.successes;
      if (!r.change_rate) throw std::invalid_argument("success record without change_rate");
      c_rate_sum += *r.change_rate;
      success_time_sum += r.elapsed;
    }
  }
  if (s.attempted == 0) throw std::invalid_argument("no attempted records to aggregate");
  s.s_rate = static_cast<double>(s.successes) / static_cast<double>(s.attempted);
  s.mean_queries = query_sum / static_cast<double>(s.attempted);
  if (s.successes > 0) {
    s.mean_c_rate = c_rate_sum / static_cast<double>(s.successes);
    s.mean_time_per_success = success_time_sum / static_cast<double>(s.successes);
  }
  return report;
}

namespace {

nlohmann::ordered_json record_to_json(const ExampleRecord& r) {
  nlohmann::ordered_json j;
  j["index"] = r.index;
  j["original_text"] = r.original_text;
  j["original_label"] = r.original_label;
  j["status"] = to_string(r.status);
  j["adversarial_text"] = r.adversarial_text ? nlohmann::ordered_json(*r.adversarial_text)
                                             : nlohmann::ordered_json(nullptr);
  j["change_rate"] = r.change_rate ? nlohmann::ordered_json(*r.change_rate)
                                   : nlohmann::ordered_json(nullptr);
  j["queries"] = r.queries;
  j["elapsed"] = r.elapsed;
  j["iterations"] = r.iterations;
  return j;
}

}  // namespace

void write_jsonl(const CampaignReport& report, std::ostream& out) {
  for (const auto& r : report.records) out << record_to_json(r).dump() << '\n';
  const Summary& s = report.summary;
  nlohmann::ordered_json sum;
  sum["attempted"] = s.attempted;
  sum["successes"] = s.successes;
  sum["skipped_count"] = s.skipped_count;
  sum["s_rate"] = s.s_rate;
  sum["mean_c_rate"] = s.mean_c_rate ? nlohmann::ordered_json(*s.mean_c_rate)
                                     : nlohmann::ordered_json(nullptr);
  sum["mean_queries"] = s.mean_queries;
  sum["mean_time_per_success"] = s.mean_time_per_success
                                     ? nlohmann::ordered_json(*s.mean_time_per_success)
                                     : nlohmann::ordered_json(nullptr);
  sum["total_wall_seconds"] = s.total_wall_seconds;
  nlohmann::ordered_json trailer;
  trailer["summary"] = std::move(sum);
  out << trailer.dump() << '\n';
}

void write_jsonl(const CampaignReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report: " + path.string());
  write_jsonl(report, out);
}

CampaignReport read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path.string());
  std::vector<ExampleRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("summary")) continue;  // recomputed below
    ExampleRecord r;
    r.index = j.at("index").get<std::size_t>();
    r.original_text = j.at("original_text").get<std::string>();
    r.original_label = j.at("original_label").get<int>();
    r.status = outcome_from_string(j.at("status").get<std::string>());
    if (!j.at("adversarial_text").is_null())
      r.adversarial_text = j.at("adversarial_text").get<std::string>();
    if (!j.at("change_rate").is_null()) r.change_rate = j.at("change_rate").get<double>();
    r.queries = j.at("queries").get<std::uint64_t>();
    r.elapsed = j.at("elapsed").get<double>();
    r.iterations = j.at("iterations").get<int>();
    records.push_back(std::move(r));
  }
  return aggregate(std::move(records));
}

TransferResult replay(const CampaignReport& report, const victim::VictimModel& other) {
  std::vector<std::string> texts;
  std::vector<const ExampleRecord*> successes;
  for (const auto& r : report.records) {
    if (r.status != Outcome::Success) continue;
    if (!r.adversarial_text) throw std::invalid_argument("success record without text");
    successes.push_back(&r);
    texts.push_back(*r.adversarial_text);
  }
  if (successes.empty()) throw std::invalid_argument("report contains no successes");

  TransferResult result;
  auto preds = other.predict_batch(texts);
  std::size_t transferred = 0;
  for (std::size_t i = 0; i < successes.size(); ++i) {
    bool adv = victim::is_adversarial(preds[i],
                                      static_cast<std::size_t>(successes[i]->original_label));
    if (adv) ++transferred;
    result.records.push_back({successes[i]->index, adv});
  }
  result.transfer_rate = static_cast<double>(transferred) / static_cast<double>(successes.size());
  return result;
}

void export_training_set(const CampaignReport& report,
                         const std::vector<std::pair<std::string, int>>& original_corpus,
                         const std::filesystem::path& path) {
  auto rows = original_corpus;
  for (const auto& r : report.records) {
    if (r.status == Outcome::Success && r.adversarial_text)
      rows.emplace_back(*r.adversarial_text, r.original_label);
  }
  dataset::write_csv(path, rows);
}

PerplexityScorer::PerplexityScorer(std::string endpoint, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
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

std::vector<double> PerplexityScorer::score(const std::vector<std::string>& texts) const {
  nlohmann::json body;
  body["texts"] = texts;
  httplib::Client client(host_);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout_));
  auto res = client.Post(path_prefix_ + "/ppl", body.dump(), "application/json");
  if (!res || res->status != 200)
    throw victim::TransportError("ppl scorer unreachable or non-200", 1);
  auto ppl = nlohmann::json::parse(res->body).at("ppl").get<std::vector<double>>();
  if (ppl.size() != texts.size())
    throw victim::TransportError("ppl scorer returned wrong row count", 1);
  return ppl;
}

}  // namespace leap::metrics
