#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stance/types.hpp"

namespace stance {

// One float32 tensor with a name and explicit dims; payload is row-major.
struct NamedTensor {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<float> data;

  std::uint64_t element_count() const;
};

NamedTensor tensor_from(const std::string& name, const MatF& m);
NamedTensor tensor_from(const std::string& name, const TableF& m);
NamedTensor tensor_from(const std::string& name, const VecF& v);

MatF tensor_to_matrix(const NamedTensor& t);
TableF tensor_to_table(const NamedTensor& t);
VecF tensor_to_vector(const NamedTensor& t);

// Binary checkpoint: magic "NNCKPT1", u64 tensor count, then per tensor a
// u64 name length, the name bytes, u64 rank, u64 dims, and the float32
// payload. A trailing u64 FNV-1a hash covers every payload byte in order.
void save_checkpoint(const std::string& path,
                     const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

// Lookup helper; throws DataError when the name is absent.
const NamedTensor& find_tensor(const std::vector<NamedTensor>& tensors,
                               const std::string& name);

}  // namespace stance
