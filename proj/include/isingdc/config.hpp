#pragma once

#include <cstddef>

namespace isingdc {

/// Worker pool and tiling knobs for matrix-vector products.
struct MatvecConfig {
  std::size_t workers = 1;
  std::size_t block_size = 1024;
};

}  // namespace isingdc
