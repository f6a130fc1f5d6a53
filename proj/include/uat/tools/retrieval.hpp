// SPDX-License-Identifier: Apache-2.0

// Embedding-based document retrieval over pre-extracted plain text.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uat::tools {

class EmbedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
  virtual Eigen::Index dimension() const = 0;
};

/// Lowercased ASCII alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

/// Term-frequency vectors over a vocabulary fixed from a corpus (sorted
/// alphabetically). Out-of-vocabulary tokens are ignored.
class LexicalEmbedder final : public Embedder {
 public:
  static LexicalEmbedder fit(std::span<const std::string> corpus);

  Eigen::VectorXd embed(std::string_view text) const override;
  Eigen::Index dimension() const override { return static_cast<Eigen::Index>(vocabulary_.size()); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

 private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, Eigen::Index, std::less<>> index_;
};

/// Cosine similarity; 0 when either vector is zero.
template <typename A, typename B>
double cosine_similarity(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double norms = a.norm() * b.norm();
  if (norms == 0.0) return 0.0;
  return std::clamp(a.dot(b) / norms, -1.0, 1.0);
}

struct Chunk {
  std::size_t id = 0;
  std::string text;
};

/// Immutable after construction. Chunk vectors are the rows of vectors().
class DocIndex {
 public:
  DocIndex(std::string source_id, std::vector<Chunk> chunks, Eigen::MatrixXd vectors);

  const std::string& source_id() const { return source_id_; }
  const std::vector<Chunk>& chunks() const { return chunks_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  Eigen::Index dimension() const { return vectors_.cols(); }
  std::size_t size() const { return chunks_.size(); }

 private:
  std::string source_id_;
  std::vector<Chunk> chunks_;
  Eigen::MatrixXd vectors_;
};

/// One vector per chunk in input order; chunk ids are 0..n-1.
DocIndex build_index(std::span<const std::string> chunks, const Embedder& embedder,
                     std::string source_id = {});

struct ScoredChunk {
  std::size_t id = 0;
  double similarity = 0.0;
  std::string text;
};

/// The min(k, size) best chunks by cosine similarity, ties by ascending id.
/// Throws invalid_argument for k == 0.
std::vector<ScoredChunk> doc_retrieve(std::string_view query, const DocIndex& index, std::size_t k,
                                      const Embedder& embedder);

struct ChunkingOptions {
  std::size_t window = 1000;
  std::size_t overlap = 200;
};

/// Fixed windows with overlap, ending early at the last paragraph break
/// in the second half of a window when there is one.
std::vector<std::string> chunk_text(std::string_view text, const ChunkingOptions& options = {});

/// Reads UTF-8 plain-text corpus files and chunks each of them.
std::vector<std::string> load_corpus(std::span<const std::filesystem::path> files,
                                     const ChunkingOptions& options = {});

}  // namespace uat::tools
