#include "leap/dataset.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leap::dataset {

namespace {

// Minimal RFC-4180 reader: returns one record (list of fields), or false
// at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset: " + path.string());

  std::vector<std::string> fields;
  if (!read_record(in, fields) || fields.size() != 2 || fields[0] != "text" ||
      fields[1] != "label")
    throw std::runtime_error(path.string() + ": expected header 'text,label'");

  Dataset ds;
  std::size_t line = 1;
  while (read_record(in, fields)) {
    ++line;
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != 2)
      throw std::runtime_error(path.string() + ": record " + std::to_string(line) +
                               " has " + std::to_string(fields.size()) + " fields");
    if (fields[0].empty())
      throw std::runtime_error(path.string() + ": record " + std::to_string(line) +
                               " has empty text");
    int label = 0;
    try {
      std::size_t pos = 0;
      label = std::stoi(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("trailing chars");
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ": record " + std::to_string(line) +
                               " has bad label '" + fields[1] + "'");
    }
    if (label < 0)
      throw std::runtime_error(path.string() + ": record " + std::to_string(line) +
                               " has negative label");
    ds.class_count = std::max(ds.class_count, label + 1);
    ds.rows.emplace_back(std::move(fields[0]), label);
  }
  return ds;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::pair<std::string, int>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path.string());
  out << "text,label\n";
  for (const auto& [text, label] : rows)
    out << csv_escape(text) << ',' << label << '\n';
}

}  // namespace leap::dataset
