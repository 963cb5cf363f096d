#ifndef LEAP_DATASET_HPP
#define LEAP_DATASET_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace leap::dataset {

/// Rows of (text, class id). Labels are dense in [0, class_count).
struct Dataset {
  std::vector<std::pair<std::string, int>> rows;
  int class_count = 0;
};

/// Loads a UTF-8 CSV with header `text,label`. Quoted fields may contain
/// commas, newlines and doubled quotes.
Dataset load_csv(const std::filesystem::path& path);

std::string csv_escape(const std::string& field);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::pair<std::string, int>>& rows);

}  // namespace leap::dataset

#endif
