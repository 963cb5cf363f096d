#include "leap/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "leap/text.hpp"
#include "json.hpp"

namespace leap::lexicon {

namespace {

const std::vector<std::string> kEmpty;

bool single_word(const std::string& lemma) {
  return lemma.find('_') == std::string::npos &&
         lemma.find(' ') == std::string::npos && !lemma.empty();
}

// Lemma fields may carry a syntactic marker suffix like "(a)" or "(ip)"
// in the adjective file; it is not part of the word.
std::string strip_marker(const std::string& lemma) {
  auto p = lemma.find('(');
  return p == std::string::npos ? lemma : lemma.substr(0, p);
}

// Parses the lemma list of one synset line. Returns false for license
// header lines (they start with two spaces).
bool parse_synset_lemmas(const std::string& line, const std::string& file,
                         std::size_t line_no, std::vector<std::string>& out) {
  if (line.empty()) return false;
  if (line.size() >= 2 && line[0] == ' ') return false;

  std::istringstream in(line.substr(0, line.find('|')));
  std::string synset_offset, lex_filenum, ss_type, w_cnt_hex;
  if (!(in >> synset_offset >> lex_filenum >> ss_type >> w_cnt_hex))
    throw ParseError(file, line_no, "truncated synset header");
  if (synset_offset.size() != 8 ||
      synset_offset.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(file, line_no, "bad synset offset '" + synset_offset + "'");

  std::size_t pos = 0;
  unsigned long w_cnt = 0;
  try {
    w_cnt = std::stoul(w_cnt_hex, &pos, 16);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != w_cnt_hex.size() || w_cnt == 0)
    throw ParseError(file, line_no, "bad word count '" + w_cnt_hex + "'");

  out.clear();
  for (unsigned long i = 0; i < w_cnt; ++i) {
    std::string word, lex_id;
    if (!(in >> word >> lex_id))
      throw ParseError(file, line_no, "truncated lemma list");
    out.push_back(text::to_lower(strip_marker(word)));
  }
  return true;
}

}  // namespace

SynonymLexicon SynonymLexicon::load_wordnet(const std::filesystem::path& data_dir) {
  std::map<std::string, std::set<std::string>> acc;
  std::vector<std::string> lemmas;
  for (const char* name : {"data.noun", "data.verb", "data.adj", "data.adv"}) {
    std::filesystem::path path = data_dir / name;
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!parse_synset_lemmas(line, path.string(), line_no, lemmas)) continue;
      for (const auto& a : lemmas) {
        if (!single_word(a)) continue;
        for (const auto& b : lemmas) {
          if (a != b && single_word(b)) acc[a].insert(b);
        }
      }
    }
  }
  std::map<std::string, std::vector<std::string>> entries;
  for (auto& [word, syns] : acc)
    entries.emplace(word, std::vector<std::string>(syns.begin(), syns.end()));
  return from_entries(std::move(entries), "wordnet-3.x");
}

SynonymLexicon SynonymLexicon::from_entries(
    std::map<std::string, std::vector<std::string>> entries, std::string source_version) {
  SynonymLexicon lex;
  for (auto& [word, syns] : entries) {
    std::sort(syns.begin(), syns.end());
    syns.erase(std::unique(syns.begin(), syns.end()), syns.end());
    std::erase(syns, word);
  }
  lex.entries_ = std::move(entries);
  lex.source_version_ = std::move(source_version);
  return lex;
}

SynonymLexicon SynonymLexicon::load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  std::map<std::string, std::vector<std::string>> entries;
  for (auto& [word, syns] : j.at("entries").items())
    entries.emplace(word, syns.get<std::vector<std::string>>());
  return from_entries(std::move(entries), j.value("source_version", std::string{}));
}

void SynonymLexicon::save_json(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["source_version"] = source_version_;
  j["entries"] = nlohmann::json::object();
  for (const auto& [word, syns] : entries_) j["entries"][word] = syns;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write lexicon file: " + path.string());
  out << j.dump(2) << '\n';
}

const std::vector<std::string>& SynonymLexicon::synonyms(std::string_view word) const {
  if (word.empty()) return kEmpty;
  auto it = entries_.find(text::to_lower(word));
  return it != entries_.end() ? it->second : kEmpty;
}

SynonymLexicon SynonymLexicon::restrict_to(const std::set<std::string>& vocab) const {
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& word : vocab) {
    auto it = entries_.find(word);
    if (it != entries_.end() && !it->second.empty()) entries.insert(*it);
  }
  return from_entries(std::move(entries), source_version_);
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path.string());
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) words.insert(text::to_lower(word));
  }
  if (words.empty()) throw std::runtime_error("empty stopword list: " + path.string());
  StopwordList s;
  s.words_ = std::move(words);
  return s;
}

StopwordList StopwordList::from_words(std::set<std::string> words) {
  StopwordList s;
  for (auto& w : words) s.words_.insert(text::to_lower(w));
  return s;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.count(text::to_lower(word)) > 0;
}

}  // namespace leap::lexicon
