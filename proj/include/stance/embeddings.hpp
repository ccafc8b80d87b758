#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stance/error.hpp"
#include "stance/types.hpp"
#include "stance/vocabulary.hpp"

namespace stance {

// Input and output (context) vector tables of a skip-gram model, one row per
// vocabulary id.
struct EmbeddingMatrix {
  TableF input;
  TableF output;

  int vocab_size() const { return static_cast<int>(input.rows()); }
  int dim() const { return static_cast<int>(input.cols()); }
};

// a.b / (|a||b|); throws DataError("zero vector") on zero-norm input.
template <class DerivedA, class DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& a,
              const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.template cast<double>().norm();
  const double nb = b.template cast<double>().norm();
  if (na == 0.0 || nb == 0.0) throw DataError("zero vector");
  const double dot = a.template cast<double>().dot(b.template cast<double>());
  return dot / (na * nb);
}

// Componentwise mean of all input rows.
VecF oov_vector(const EmbeddingMatrix& emb);

struct Neighbor {
  int id;
  std::string token;
  double similarity;
};

// Top-k in-vocabulary tokens by descending cosine against the input table,
// ties broken by token id. Rows failing the filter, the excluded id, and
// zero-norm rows are skipped; fewer matches than k yields a shorter list.
std::vector<Neighbor> nearest_neighbors(
    const Eigen::Ref<const VecF>& query, const EmbeddingMatrix& emb,
    const Vocabulary& vocab, int k,
    const std::function<bool(const std::string&)>& filter = nullptr,
    int exclude_id = kOovId);

// Binary format: "SGNSv1", V and D as little-endian 64-bit integers, V rows
// of D float32 (input), the same for output, then the vocabulary text format.
void save_embeddings(const std::string& path, const EmbeddingMatrix& emb,
                     const Vocabulary& vocab);

struct EmbeddingFile {
  EmbeddingMatrix embeddings;
  Vocabulary vocab;
};

EmbeddingFile load_embeddings(const std::string& path);

// "token v1 ... vD" lines, input vectors only.
void export_embeddings_text(const std::string& path, const EmbeddingMatrix& emb,
                            const Vocabulary& vocab);

}  // namespace stance
