#ifndef LEAP_LEXICON_HPP
#define LEAP_LEXICON_HPP

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leap::lexicon {

struct ParseError : std::runtime_error {
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file(file),
        line(line) {}
  std::string file;
  std::size_t line;
};

/// word -> candidate replacement words, built from WordNet data files.
/// Immutable after construction; safe for concurrent reads.
class SynonymLexicon {
 public:
  /// Parses Princeton-format data.{noun,verb,adj,adv} files found in
  /// `data_dir` and merges all four parts of speech. Multi-word lemmas
  /// (underscore separator) are dropped; entries never contain their own
  /// headword; lists are deduplicated and sorted.
  static SynonymLexicon load_wordnet(const std::filesystem::path& data_dir);

  static SynonymLexicon from_entries(std::map<std::string, std::vector<std::string>> entries,
                                     std::string source_version);

  static SynonymLexicon load_json(const std::filesystem::path& path);
  void save_json(const std::filesystem::path& path) const;

  /// Case-insensitive lookup; unknown word yields an empty list.
  const std::vector<std::string>& synonyms(std::string_view word) const;

  /// Lexicon restricted to headwords present in `vocab` (lowercase).
  SynonymLexicon restrict_to(const std::set<std::string>& vocab) const;

  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }
  const std::string& source_version() const { return source_version_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::string source_version_;
};

class StopwordList {
 public:
  /// One lowercase word per line; '#' starts a comment. Throws on I/O
  /// failure or if no words remain.
  static StopwordList load(const std::filesystem::path& path);
  static StopwordList from_words(std::set<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

}  // namespace leap::lexicon

#endif
