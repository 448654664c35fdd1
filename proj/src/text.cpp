#include "sdikit/text.hpp"

#include <algorithm>
#include <cctype>

namespace sdikit::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
char to_lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

}  // namespace

std::string normalize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(to_lower(c));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '?' || out.back() == '!' ||
                          out.back() == ',' || out.back() == ';' || out.back() == ':')) {
    out.pop_back();
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  };
  for (char c : s) {
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      tokens.push_back(std::string(1, to_lower(c)));
    } else {
      cur.push_back(to_lower(c));
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> split_sentences(const std::string& s) {
  std::vector<std::string> sentences;
  std::string cur;
  for (char c : s) {
    if (c == '.' || c == '?' || c == '!' || c == ';') {
      if (!cur.empty()) sentences.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) sentences.push_back(cur);
  return sentences;
}

bool contains_normalized(const std::string& haystack, const std::string& needle) {
  const std::string h = " " + normalize(haystack) + " ";
  const std::string n = normalize(needle);
  if (n.empty()) return false;
  // Token-boundary containment: the match must be flanked by non-word chars.
  std::size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    const char before = h[pos - 1];
    const char after = pos + n.size() < h.size() ? h[pos + n.size()] : ' ';
    const bool left_ok = !std::isalnum(static_cast<unsigned char>(before));
    const bool right_ok = !std::isalnum(static_cast<unsigned char>(after));
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string lower_first(const std::string& s) {
  std::string out = s;
  if (!out.empty()) out[0] = to_lower(out[0]);
  return out;
}

bool ends_with_sentence_punct(const std::string& s) {
  auto it = std::find_if(s.rbegin(), s.rend(), [](char c) { return !is_space(c); });
  if (it == s.rend()) return false;
  return *it == '.' || *it == '?' || *it == '!';
}

std::string join(const std::vector<std::string>& tokens, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace sdikit::text
