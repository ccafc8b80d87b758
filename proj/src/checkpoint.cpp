#include "stance/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "stance/error.hpp"
#include "stance/hash.hpp"

namespace stance {
namespace {

constexpr char kMagic[] = "NNCKPT1";
constexpr std::size_t kMagicLen = 7;

void write_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t read_u64(std::istream& in, const std::string& origin) {
  char buf[8];
  in.read(buf, 8);
  if (!in) throw DataError("truncated checkpoint: " + origin);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::uint64_t NamedTensor::element_count() const {
  std::uint64_t n = 1;
  for (std::uint64_t d : dims) n *= d;
  return dims.empty() ? 0 : n;
}

NamedTensor tensor_from(const std::string& name, const MatF& m) {
  NamedTensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(m.rows()),
            static_cast<std::uint64_t>(m.cols())};
  t.data.resize(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      t.data[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
    }
  }
  return t;
}

NamedTensor tensor_from(const std::string& name, const TableF& m) {
  NamedTensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(m.rows()),
            static_cast<std::uint64_t>(m.cols())};
  t.data.assign(m.data(), m.data() + m.size());
  return t;
}

NamedTensor tensor_from(const std::string& name, const VecF& v) {
  NamedTensor t;
  t.name = name;
  t.dims = {static_cast<std::uint64_t>(v.size())};
  t.data.assign(v.data(), v.data() + v.size());
  return t;
}

MatF tensor_to_matrix(const NamedTensor& t) {
  if (t.dims.size() != 2) throw DataError("tensor rank mismatch: " + t.name);
  MatF m(static_cast<Eigen::Index>(t.dims[0]),
         static_cast<Eigen::Index>(t.dims[1]));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = t.data[static_cast<std::size_t>(r * m.cols() + c)];
    }
  }
  return m;
}

TableF tensor_to_table(const NamedTensor& t) {
  if (t.dims.size() != 2) throw DataError("tensor rank mismatch: " + t.name);
  TableF m(static_cast<Eigen::Index>(t.dims[0]),
           static_cast<Eigen::Index>(t.dims[1]));
  std::memcpy(m.data(), t.data.data(), t.data.size() * sizeof(float));
  return m;
}

VecF tensor_to_vector(const NamedTensor& t) {
  if (t.dims.size() != 1) throw DataError("tensor rank mismatch: " + t.name);
  VecF v(static_cast<Eigen::Index>(t.dims[0]));
  std::memcpy(v.data(), t.data.data(), t.data.size() * sizeof(float));
  return v;
}

void save_checkpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, static_cast<std::streamsize>(kMagicLen));
  write_u64(out, tensors.size());
  std::uint64_t checksum = kFnvOffset;
  for (const NamedTensor& t : tensors) {
    if (t.element_count() != t.data.size()) {
      throw DataError("tensor shape mismatch: " + t.name);
    }
    write_u64(out, t.name.size());
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    write_u64(out, t.dims.size());
    for (std::uint64_t d : t.dims) write_u64(out, d);
    const char* bytes = reinterpret_cast<const char*>(t.data.data());
    const std::size_t nbytes = t.data.size() * sizeof(float);
    out.write(bytes, static_cast<std::streamsize>(nbytes));
    checksum = fnv1a(bytes, nbytes, checksum);
  }
  write_u64(out, checksum);
  if (!out) throw DataError("cannot write checkpoint: " + path);
}

std::vector<NamedTensor> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[kMagicLen];
  in.read(magic, static_cast<std::streamsize>(kMagicLen));
  if (!in || std::memcmp(magic, kMagic, kMagicLen) != 0) {
    throw DataError("bad checkpoint magic: " + path);
  }
  const std::uint64_t count = read_u64(in, path);
  std::vector<NamedTensor> tensors;
  tensors.reserve(count);
  std::uint64_t checksum = kFnvOffset;
  for (std::uint64_t i = 0; i < count; ++i) {
    NamedTensor t;
    const std::uint64_t name_len = read_u64(in, path);
    t.name.resize(name_len);
    in.read(t.name.data(), static_cast<std::streamsize>(name_len));
    const std::uint64_t rank = read_u64(in, path);
    if (rank == 0 || rank > 2) {
      throw DataError("tensor rank mismatch: " + t.name);
    }
    t.dims.resize(rank);
    for (std::uint64_t d = 0; d < rank; ++d) t.dims[d] = read_u64(in, path);
    t.data.resize(t.element_count());
    char* bytes = reinterpret_cast<char*>(t.data.data());
    const std::size_t nbytes = t.data.size() * sizeof(float);
    in.read(bytes, static_cast<std::streamsize>(nbytes));
    if (!in) throw DataError("truncated checkpoint: " + path);
    checksum = fnv1a(bytes, nbytes, checksum);
    tensors.push_back(std::move(t));
  }
  const std::uint64_t stored = read_u64(in, path);
  if (stored != checksum) {
    throw DataError("checkpoint checksum mismatch: " + path);
  }
  return tensors;
}

const NamedTensor& find_tensor(const std::vector<NamedTensor>& tensors,
                               const std::string& name) {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return t;
  }
  throw DataError("missing tensor: " + name);
}

}  // namespace stance
