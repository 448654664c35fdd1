#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdikit/pipeline.hpp"

namespace sdikit::prep {

// Reserved token ids; fixed by the vocab contract.
inline constexpr int kPadId = 0;
inline constexpr int kBosId = 1;
inline constexpr int kEosId = 2;
inline constexpr int kUnkId = 3;
inline constexpr int kSepId = 4;
inline constexpr std::size_t kReservedTokens = 5;

class Vocab {
 public:
  Vocab();

  // Frequency-ranked word-level vocabulary, ties broken lexicographically.
  static Vocab build(const std::vector<pipeline::SyntheticExample>& examples,
                     std::size_t max_size);

  int id_of(const std::string& token) const;  // kUnkId for unknown tokens
  const std::string& token_of(int id) const;
  std::size_t size() const { return id_to_token_.size(); }

  std::vector<int> encode_text(const std::string& s) const;
  // Joins non-special tokens with spaces.
  std::string decode(const std::vector<int>& ids) const;

  void save(const std::string& path) const;  // line-oriented "token<TAB>id"
  static Vocab load(const std::string& path);

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
};

struct EncodedExample {
  std::vector<int> token_ids;   // bos prompt... sep response... eos
  std::vector<bool> loss_mask;  // true on response tokens and eos only
  std::size_t length() const { return token_ids.size(); }
};

EncodedExample encode_example(const pipeline::SyntheticExample& example, const Vocab& vocab,
                              std::size_t max_len);

struct Batch {
  std::vector<std::vector<int>> tokens;       // rows padded with kPadId
  std::vector<std::vector<bool>> pad_mask;    // true on real tokens
  std::vector<std::vector<bool>> loss_mask;   // true on supervised positions
  std::size_t rows() const { return tokens.size(); }
  std::size_t cols() const { return tokens.empty() ? 0 : tokens[0].size(); }
};

std::vector<Batch> make_batches(const std::vector<EncodedExample>& encoded,
                                std::size_t batch_size, std::uint64_t seed);

}  // namespace sdikit::prep
