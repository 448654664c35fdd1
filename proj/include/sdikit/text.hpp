#pragma once

#include <string>
#include <vector>

namespace sdikit::text {

// Lowercase, collapse runs of whitespace to single spaces, trim, and strip
// trailing sentence punctuation. This is the normal form used for proposition
// containment checks and deduplication.
std::string normalize(const std::string& s);

// Word-level tokens: lowercased words split on whitespace, with punctuation
// characters emitted as single-character tokens.
std::vector<std::string> tokenize(const std::string& s);

// Split into sentences on . ? ! ; (terminators dropped).
std::vector<std::string> split_sentences(const std::string& s);

// True if `needle` (normalized) occurs in `haystack` (normalized) on token
// boundaries.
bool contains_normalized(const std::string& haystack, const std::string& needle);

// Lowercase the first character (ASCII).
std::string lower_first(const std::string& s);

// True if the trimmed string ends with . ? or !
bool ends_with_sentence_punct(const std::string& s);

std::string join(const std::vector<std::string>& tokens, const std::string& sep);

}  // namespace sdikit::text
