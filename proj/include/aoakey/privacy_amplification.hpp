#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "aoakey/key_pipeline.hpp"

namespace aoakey {

/// Binary Toeplitz hashing. Function `function_index` is the output_length x input_length
/// Toeplitz matrix whose input_length + output_length - 1 diagonal bits are drawn from a
/// generator seeded by the index; y = T x over GF(2).
struct HashFunctionFamily {
  std::size_t input_length = 0;
  std::size_t output_length = 0;

  void validate() const;
};

std::vector<std::uint8_t> toeplitz_diagonals(const HashFunctionFamily& family, std::uint64_t function_index);

std::vector<std::uint8_t> toeplitz_hash(std::span<const std::uint8_t> bits, const HashFunctionFamily& family,
                                        std::uint64_t function_index);

BitStream privacy_amplify(const BitStream& bits, const HashFunctionFamily& family, std::uint64_t function_index);

}  // namespace aoakey
