// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "uat/common.hpp"

namespace uat::tools {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

LexicalEmbedder LexicalEmbedder::fit(std::span<const std::string> corpus) {
  std::set<std::string> vocab;
  for (const auto& doc : corpus)
    for (auto& token : tokenize(doc)) vocab.insert(std::move(token));
  LexicalEmbedder embedder;
  embedder.vocabulary_.assign(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < embedder.vocabulary_.size(); ++i)
    embedder.index_.emplace(embedder.vocabulary_[i], static_cast<Eigen::Index>(i));
  return embedder;
}

Eigen::VectorXd LexicalEmbedder::embed(std::string_view text) const {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(dimension());
  for (const auto& token : tokenize(text))
    if (const auto it = index_.find(token); it != index_.end()) counts(it->second) += 1.0;
  return counts;
}

DocIndex::DocIndex(std::string source_id, std::vector<Chunk> chunks, Eigen::MatrixXd vectors)
    : source_id_(std::move(source_id)), chunks_(std::move(chunks)), vectors_(std::move(vectors)) {
  if (chunks_.empty()) throw std::invalid_argument("an index needs at least one chunk");
  if (static_cast<std::size_t>(vectors_.rows()) != chunks_.size())
    throw std::invalid_argument("one vector per chunk is required");
  if (vectors_.cols() <= 0) throw std::invalid_argument("vectors need a positive dimension");
  std::set<std::size_t> ids;
  for (const auto& chunk : chunks_) {
    if (chunk.text.empty()) throw std::invalid_argument("chunk text must not be empty");
    if (!ids.insert(chunk.id).second) throw std::invalid_argument("duplicate chunk id");
  }
}

DocIndex build_index(std::span<const std::string> chunks, const Embedder& embedder, std::string source_id) {
  if (chunks.empty()) throw std::invalid_argument("build_index needs at least one chunk");
  const Eigen::Index dim = embedder.dimension();
  if (dim <= 0) throw EmbedError("embedder has no dimensions");
  Eigen::MatrixXd vectors(static_cast<Eigen::Index>(chunks.size()), dim);
  std::vector<Chunk> out;
  out.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const Eigen::VectorXd v = embedder.embed(chunks[i]);
    if (v.size() != dim) throw EmbedError("embedder returned a vector of the wrong dimension");
    vectors.row(static_cast<Eigen::Index>(i)) = v.transpose();
    out.push_back({i, chunks[i]});
  }
  return DocIndex(std::move(source_id), std::move(out), std::move(vectors));
}

std::vector<ScoredChunk> doc_retrieve(std::string_view query, const DocIndex& index, std::size_t k,
                                      const Embedder& embedder) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const Eigen::VectorXd q = embedder.embed(query);
  if (q.size() != index.dimension()) throw EmbedError("query vector dimension does not match the index");

  const Eigen::VectorXd norms = index.vectors().rowwise().norm();
  const Eigen::VectorXd dots = index.vectors() * q;
  const double query_norm = q.norm();

  std::vector<ScoredChunk> scored;
  scored.reserve(index.size());
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double denom = norms(r) * query_norm;
    const double sim = denom == 0.0 ? 0.0 : std::clamp(dots(r) / denom, -1.0, 1.0);
    scored.push_back({index.chunks()[i].id, sim, index.chunks()[i].text});
  }
  std::sort(scored.begin(), scored.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
    return a.similarity > b.similarity || (a.similarity == b.similarity && a.id < b.id);
  });
  scored.resize(std::min(k, scored.size()));
  return scored;
}

std::vector<std::string> chunk_text(std::string_view text, const ChunkingOptions& options) {
  if (options.window == 0 || options.overlap >= options.window)
    throw std::invalid_argument("overlap must be smaller than a positive window");
  std::vector<std::string> chunks;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = std::min(start + options.window, text.size());
    if (end < text.size()) {
      const std::size_t floor = start + options.window / 2;
      const std::size_t brk = end >= 2 ? text.rfind("\n\n", end - 2) : std::string_view::npos;
      if (brk != std::string_view::npos && brk >= floor) end = brk + 2;
    }
    auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) chunks.push_back(std::move(piece));
    if (end >= text.size()) break;
    std::size_t next = end > options.overlap ? end - options.overlap : end;
    // Move a mid-word overlap start forward to the next word.
    if (next > 0 && !std::isspace(static_cast<unsigned char>(text[next - 1]))) {
      std::size_t word = next;
      while (word < end && !std::isspace(static_cast<unsigned char>(text[word]))) ++word;
      if (word < end) next = word;
    }
    start = next > start ? next : end;
  }
  return chunks;
}

std::vector<std::string> load_corpus(std::span<const std::filesystem::path> files, const ChunkingOptions& options) {
  std::vector<std::string> chunks;
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read corpus file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    for (auto& chunk : chunk_text(buffer.str(), options)) chunks.push_back(std::move(chunk));
  }
  return chunks;
}

}  // namespace uat::tools
