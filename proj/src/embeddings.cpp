#include "stance/embeddings.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace stance {

namespace {

constexpr char kMagic[6] = {'S', 'G', 'N', 'S', 'v', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void write_table(std::ostream& out, const TableF& table) {
  // Row-major storage: rows are already laid out as the file expects.
  out.write(reinterpret_cast<const char*>(table.data()),
            static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(table.size())));
}

void read_table(std::istream& in, TableF& table) {
  in.read(reinterpret_cast<char*>(table.data()),
          static_cast<std::streamsize>(sizeof(float) * static_cast<std::size_t>(table.size())));
}

}  // namespace

VecF oov_vector(const EmbeddingMatrix& emb) {
  if (emb.input.rows() == 0) throw DataError("empty vocabulary");
  return emb.input.colwise().mean().transpose();
}

std::vector<Neighbor> nearest_neighbors(
    const Eigen::Ref<const VecF>& query, const EmbeddingMatrix& emb,
    const Vocabulary& vocab, int k,
    const std::function<bool(const std::string&)>& filter, int exclude_id) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const double query_norm = query.cast<double>().norm();
  if (query_norm == 0.0) throw DataError("zero vector");

  std::vector<Neighbor> matches;
  const VecD q = query.cast<double>();
  for (int id = 0; id < emb.vocab_size(); ++id) {
    if (id == exclude_id) continue;
    if (filter && !filter(vocab.token(id))) continue;
    const VecD row = emb.input.row(id).transpose().cast<double>();
    const double norm = row.norm();
    if (norm == 0.0) continue;
    matches.push_back({id, vocab.token(id), row.dot(q) / (norm * query_norm)});
  }
  std::sort(matches.begin(), matches.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.id < b.id;
  });
  if (matches.size() > static_cast<std::size_t>(k)) {
    matches.resize(static_cast<std::size_t>(k));
  }
  return matches;
}

void save_embeddings(const std::string& path, const EmbeddingMatrix& emb,
                     const Vocabulary& vocab) {
  if (emb.input.rows() != emb.output.rows() ||
      emb.input.cols() != emb.output.cols()) {
    throw std::invalid_argument("input/output tables must have equal shape");
  }
  if (emb.vocab_size() != vocab.size()) {
    throw std::invalid_argument("embedding rows must match vocabulary size");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, static_cast<std::uint64_t>(emb.vocab_size()));
  write_u64(out, static_cast<std::uint64_t>(emb.dim()));
  write_table(out, emb.input);
  write_table(out, emb.output);
  vocab.write(out);
  if (!out) throw DataError("write failed: " + path);
}

EmbeddingFile load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path);
  char magic[6];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError(path + ": not an SGNSv1 embedding file");
  }
  const auto v = static_cast<Eigen::Index>(read_u64(in));
  const auto d = static_cast<Eigen::Index>(read_u64(in));
  EmbeddingFile file;
  file.embeddings.input.resize(v, d);
  file.embeddings.output.resize(v, d);
  read_table(in, file.embeddings.input);
  read_table(in, file.embeddings.output);
  if (!in) throw DataError(path + ": truncated embedding file");

  // Remaining bytes hold the vocabulary in its text format.
  file.vocab = Vocabulary::read(in, path);
  if (file.vocab.size() != static_cast<int>(v)) {
    throw DataError(path + ": vocabulary size does not match header");
  }
  return file;
}

void export_embeddings_text(const std::string& path, const EmbeddingMatrix& emb,
                            const Vocabulary& vocab) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (int id = 0; id < emb.vocab_size(); ++id) {
    out << vocab.token(id);
    for (int j = 0; j < emb.dim(); ++j) out << ' ' << emb.input(id, j);
    out << '\n';
  }
}

}  // namespace stance
