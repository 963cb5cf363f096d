#ifndef LEAP_TEXT_HPP
#define LEAP_TEXT_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leap::text {

/// One lexical unit of the original string. Word tokens are maximal runs
/// of letters, digits and apostrophes; everything between them (spaces,
/// punctuation) is kept verbatim as non-word tokens so that joining all
/// surfaces reproduces the input byte for byte.
struct Token {
  std::string surface;
  bool is_word = false;
};

std::string to_lower(std::string_view s);

/// Transfers the casing pattern of `original` onto `replacement`:
/// ALLCAPS, Initial-cap, otherwise lowercase as-is.
std::string match_casing(const std::string& original, const std::string& replacement);

class TokenizedText {
 public:
  static TokenizedText tokenize(std::string raw);

  const std::string& raw() const { return raw_; }
  const std::vector<Token>& tokens() const { return tokens_; }

  // Word positions are indexed 0..word_count()-1 ("dimensions").
  std::size_t word_count() const { return word_dims_.size(); }
  const std::string& word(std::size_t dim) const { return tokens_[word_dims_.at(dim)].surface; }
  const std::string& word_lower(std::size_t dim) const { return words_lower_.at(dim); }
  std::size_t token_index(std::size_t dim) const { return word_dims_.at(dim); }

  std::string detokenize() const;

 private:
  std::string raw_;
  std::vector<Token> tokens_;
  std::vector<std::size_t> word_dims_;
  std::vector<std::string> words_lower_;
};

/// A substitution assignment over a tokenized base text. Keys are word
/// dimensions; values are lowercase replacement words. A replacement must
/// differ (case-insensitively) from the original word at its position.
struct CandidateText {
  const TokenizedText* base = nullptr;
  std::map<std::size_t, std::string> replacements;

  /// Lowercased word currently occupying dimension `dim`.
  const std::string& word_at(std::size_t dim) const {
    auto it = replacements.find(dim);
    return it != replacements.end() ? it->second : base->word_lower(dim);
  }
};

/// Splices the replacements into the base string, transferring per-word
/// casing. Non-word tokens are emitted unchanged.
std::string realize(const CandidateText& c);

/// |replacements| / number of word tokens. Throws if the base has none.
double change_rate(const CandidateText& c);

}  // namespace leap::text

#endif
