#include "sdikit/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "sdikit/rng.hpp"
#include "sdikit/text.hpp"

namespace sdikit::prep {

Vocab::Vocab() {
  id_to_token_ = {"<pad>", "<bos>", "<eos>", "<unk>", "<sep>"};
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    token_to_id_[id_to_token_[i]] = static_cast<int>(i);
  }
}

Vocab Vocab::build(const std::vector<pipeline::SyntheticExample>& examples,
                   std::size_t max_size) {
  if (examples.empty()) throw std::invalid_argument("build_vocab: empty corpus");
  if (max_size < 16) throw std::invalid_argument("build_vocab: max_size must be >= 16");

  std::map<std::string, std::size_t> freq;  // ordered map: lexicographic ties for free
  for (const auto& ex : examples) {
    for (const auto& tok : text::tokenize(ex.prompt_text)) freq[tok]++;
    for (const auto& tok : text::tokenize(ex.target_response)) freq[tok]++;
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  Vocab vocab;
  for (const auto& [tok, count] : ranked) {
    if (vocab.id_to_token_.size() >= max_size) break;
    const int id = static_cast<int>(vocab.id_to_token_.size());
    vocab.id_to_token_.push_back(tok);
    vocab.token_to_id_[tok] = id;
  }
  return vocab;
}

int Vocab::id_of(const std::string& token) const {
  const auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocab::token_of(int id) const {
  static const std::string unk = "<unk>";
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) return unk;
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::encode_text(const std::string& s) const {
  std::vector<int> ids;
  for (const auto& tok : text::tokenize(s)) ids.push_back(id_of(tok));
  return ids;
}

std::string Vocab::decode(const std::vector<int>& ids) const {
  std::vector<std::string> words;
  for (int id : ids) {
    if (id == kPadId || id == kBosId || id == kEosId || id == kSepId) continue;
    words.push_back(token_of(id));
  }
  return text::join(words, " ");
}

void Vocab::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocab file: " + path);
  for (std::size_t i = 0; i < id_to_token_.size(); ++i) {
    out << id_to_token_[i] << "\t" << i << "\n";
  }
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocab file: " + path);
  Vocab vocab;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) + ": expected token<TAB>id");
    }
    const std::string token = line.substr(0, tab);
    const int id = std::stoi(line.substr(tab + 1));
    if (static_cast<std::size_t>(id) < kReservedTokens) {
      if (vocab.id_to_token_[static_cast<std::size_t>(id)] != token) {
        throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                                 ": reserved id mismatch");
      }
      continue;
    }
    if (static_cast<std::size_t>(id) != vocab.id_to_token_.size()) {
      throw std::runtime_error(path + ": line " + std::to_string(lineno) +
                               ": ids must be dense and ascending");
    }
    vocab.id_to_token_.push_back(token);
    vocab.token_to_id_[token] = id;
  }
  return vocab;
}

EncodedExample encode_example(const pipeline::SyntheticExample& example, const Vocab& vocab,
                              std::size_t max_len) {
  if (max_len < 8) throw std::invalid_argument("encode_example: max_len must be >= 8");
  std::vector<int> prompt_ids = vocab.encode_text(example.prompt_text);
  const std::vector<int> response_ids = vocab.encode_text(example.target_response);

  // bos + sep + eos plus the response must fit; prompts are truncated from the
  // left so supervised targets are never dropped.
  const std::size_t overhead = 3;
  if (response_ids.size() + overhead > max_len) {
    throw std::invalid_argument("encode_example: response alone exceeds max_len (" +
                                example.example_id + ")");
  }
  const std::size_t prompt_budget = max_len - overhead - response_ids.size();
  if (prompt_ids.size() > prompt_budget) {
    prompt_ids.erase(prompt_ids.begin(),
                     prompt_ids.begin() + static_cast<std::ptrdiff_t>(prompt_ids.size() - prompt_budget));
  }

  EncodedExample enc;
  enc.token_ids.reserve(prompt_ids.size() + response_ids.size() + overhead);
  enc.token_ids.push_back(kBosId);
  enc.token_ids.insert(enc.token_ids.end(), prompt_ids.begin(), prompt_ids.end());
  enc.token_ids.push_back(kSepId);
  enc.token_ids.insert(enc.token_ids.end(), response_ids.begin(), response_ids.end());
  enc.token_ids.push_back(kEosId);

  enc.loss_mask.assign(enc.token_ids.size(), false);
  const std::size_t response_begin = 1 + prompt_ids.size() + 1;
  for (std::size_t i = response_begin; i < enc.token_ids.size(); ++i) enc.loss_mask[i] = true;
  return enc;
}

std::vector<Batch> make_batches(const std::vector<EncodedExample>& encoded,
                                std::size_t batch_size, std::uint64_t seed) {
  if (encoded.empty()) throw std::invalid_argument("make_batches: empty input");
  if (batch_size < 1) throw std::invalid_argument("make_batches: batch_size must be >= 1");

  std::vector<std::size_t> order(encoded.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng::derive(seed, "batches");
  rng.shuffle(order);

  std::vector<Batch> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    std::size_t width = 0;
    for (std::size_t k = start; k < end; ++k) width = std::max(width, encoded[order[k]].length());

    Batch batch;
    for (std::size_t k = start; k < end; ++k) {
      const auto& ex = encoded[order[k]];
      std::vector<int> row(width, kPadId);
      std::vector<bool> pad(width, false);
      std::vector<bool> loss(width, false);
      for (std::size_t i = 0; i < ex.length(); ++i) {
        row[i] = ex.token_ids[i];
        pad[i] = true;
        loss[i] = ex.loss_mask[i];
      }
      batch.tokens.push_back(std::move(row));
      batch.pad_mask.push_back(std::move(pad));
      batch.loss_mask.push_back(std::move(loss));
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

}  // namespace sdikit::prep
