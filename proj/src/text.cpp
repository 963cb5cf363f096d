#include "leap/text.hpp"

#include <cctype>

namespace leap::text {

namespace {

// UTF-8 continuation/lead bytes are treated as word characters so that
// multibyte words stay intact.
bool is_word_char(unsigned char ch) {
  return std::isalnum(ch) != 0 || ch == '\'' || ch >= 0x80;
}

bool is_upper_ascii(unsigned char ch) { return std::isupper(ch) != 0; }
bool is_alpha_ascii(unsigned char ch) { return std::isalpha(ch) != 0; }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string match_casing(const std::string& original, const std::string& replacement) {
  bool any_alpha = false, all_upper = true;
  for (unsigned char ch : original) {
    if (is_alpha_ascii(ch)) {
      any_alpha = true;
      if (!is_upper_ascii(ch)) all_upper = false;
    }
  }
  std::string out = to_lower(replacement);
  if (!any_alpha || out.empty()) return out;
  if (all_upper && original.size() > 1) {
    for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
  }
  if (is_upper_ascii(static_cast<unsigned char>(original[0]))) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

TokenizedText TokenizedText::tokenize(std::string raw) {
  TokenizedText t;
  t.raw_ = std::move(raw);
  const std::string& s = t.raw_;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    bool word = is_word_char(static_cast<unsigned char>(s[i]));
    while (j < s.size() && is_word_char(static_cast<unsigned char>(s[j])) == word) ++j;
    Token tok{s.substr(i, j - i), word};
    if (word) {
      t.word_dims_.push_back(t.tokens_.size());
      t.words_lower_.push_back(to_lower(tok.surface));
    }
    t.tokens_.push_back(std::move(tok));
    i = j;
  }
  return t;
}

std::string TokenizedText::detokenize() const {
  std::string out;
  out.reserve(raw_.size());
  for (const auto& tok : tokens_) out += tok.surface;
  return out;
}

std::string realize(const CandidateText& c) {
  const TokenizedText& base = *c.base;
  std::vector<std::string> surfaces;
  surfaces.reserve(base.tokens().size());
  for (const auto& tok : base.tokens()) surfaces.push_back(tok.surface);
  for (const auto& [dim, word] : c.replacements) {
    std::size_t ti = base.token_index(dim);
    surfaces[ti] = match_casing(base.word(dim), word);
  }
  std::string out;
  out.reserve(base.raw().size());
  for (const auto& s : surfaces) out += s;
  return out;
}

double change_rate(const CandidateText& c) {
  std::size_t n = c.base->word_count();
  if (n == 0) throw std::invalid_argument("change_rate: text has no word tokens");
  return static_cast<double>(c.replacements.size()) / static_cast<double>(n);
}

}  // namespace leap::text
