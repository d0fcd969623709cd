// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/text_pipeline.hpp"

#include <cstdint>
#include <fstream>

#include "relarec/error.hpp"

namespace relarec {

namespace {

// Decodes one UTF-8 codepoint starting at i, advancing i. Malformed bytes
// decode as U+FFFD, which is a separator.
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = (b0 >= 0xF0) ? 4 : (b0 >= 0xE0) ? 3 : (b0 >= 0xC0) ? 2 : 0;
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  std::uint32_t cp = b0 & (0x7F >> len);
  for (int k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (bk & 0x3F);
  }
  i += len;
  return cp;
}

void encode_utf8(std::uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Letter test over the script ranges that occur in scholarly metadata:
// ASCII, Latin-1 and extended Latin, Greek, Cyrillic. Everything else
// (digits, punctuation, symbols, unsupported scripts) separates.
bool is_letter(std::uint32_t cp) {
  if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
  if (cp < 0x80) return false;
  if (cp >= 0xC0 && cp <= 0xFF) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x100 && cp <= 0x24F) return true;    // Latin Extended-A/B
  if (cp >= 0x391 && cp <= 0x3A9) return cp != 0x3A2;  // Greek upper
  if (cp >= 0x3B1 && cp <= 0x3C9) return true;    // Greek lower
  if (cp >= 0x400 && cp <= 0x4FF) return true;    // Cyrillic
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;  // Latin Extended Additional
  return false;
}

std::uint32_t to_lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x177 && (cp % 2) == 0) return cp + 1;  // paired
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E && (cp % 2) == 1) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x1E00 && cp <= 0x1EFF && (cp % 2) == 0) return cp + 1;
  return cp;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::string current;
  std::size_t i = 0;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(Token{std::move(current), "", "", tokens.size()});
      current = {};
    }
  };
  while (i < text.size()) {
    std::uint32_t cp = decode_utf8(text, i);
    if (is_letter(cp)) {
      encode_utf8(to_lower(cp), current);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

namespace {

constexpr const char* kDefaultStopwords[] = {
    "a",    "an",   "and",   "are",   "as",    "at",    "be",   "but",
    "by",   "for",  "if",    "in",    "into",  "is",    "it",   "no",
    "not",  "of",   "on",    "or",    "such",  "that",  "the",  "their",
    "then", "there", "these", "they",  "this",  "to",    "was",  "will",
    "with",
};

}  // namespace

StopwordSet::StopwordSet() {
  for (const char* w : kDefaultStopwords) words_.insert(w);
}

StopwordSet StopwordSet::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file: " + path);
  StopwordSet set;
  set.words_.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t");
    set.words_.insert(line.substr(b, e - b + 1));
  }
  return set;
}

StopwordSet StopwordSet::from_words(const std::vector<std::string>& words) {
  StopwordSet set;
  set.words_.clear();
  for (const auto& w : words) set.words_.insert(w);
  return set;
}

std::vector<Token> TextPipeline::run(std::string_view text) const {
  return run(text, nullptr);
}

std::vector<Token> TextPipeline::run(std::string_view text,
                                     std::size_t* total_tokens) const {
  std::vector<Token> tokens = tokenize(text);
  if (total_tokens) *total_tokens = tokens.size();
  tagger_.tag(tokens);
  std::erase_if(tokens, [&](const Token& t) { return stopwords_.contains(t.surface); });
  for (auto& t : tokens) t.stem = porter_stem(t.surface);
  return tokens;
}

std::vector<std::string> TextPipeline::stems(std::string_view text) const {
  std::vector<Token> tokens = run(text);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (auto& t : tokens) out.push_back(std::move(t.stem));
  return out;
}

}  // namespace relarec
