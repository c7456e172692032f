#include "aoakey/privacy_amplification.hpp"

#include <stdexcept>

#include "aoakey/rng.hpp"

namespace aoakey {

void HashFunctionFamily::validate() const {
  if (output_length < 1) throw std::invalid_argument("hash family: output length must be >= 1");
  if (output_length >= input_length) throw std::invalid_argument("hash family: output must be shorter than input");
}

std::vector<std::uint8_t> toeplitz_diagonals(const HashFunctionFamily& family, std::uint64_t function_index) {
  family.validate();
  Rng rng(derive_seed(function_index, {stream::kHash}));
  std::vector<std::uint8_t> t(family.input_length + family.output_length - 1);
  for (auto& b : t) b = static_cast<std::uint8_t>(rng() >> 63);
  return t;
}

std::vector<std::uint8_t> toeplitz_hash(std::span<const std::uint8_t> bits, const HashFunctionFamily& family,
                                        std::uint64_t function_index) {
  family.validate();
  if (bits.size() != family.input_length) throw std::invalid_argument("privacy amplification: length mismatch");
  const auto t = toeplitz_diagonals(family, function_index);
  const std::size_t n = family.input_length;
  std::vector<std::uint8_t> out(family.output_length, 0);
  // T[i][j] = t[i - j + n - 1]
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc ^= static_cast<std::uint8_t>(t[i + n - 1 - j] & bits[j]);
    out[i] = acc;
  }
  return out;
}

BitStream privacy_amplify(const BitStream& bits, const HashFunctionFamily& family, std::uint64_t function_index) {
  BitStream out;
  out.provenance = bits.provenance;
  out.bits = toeplitz_hash(bits.bits, family, function_index);
  out.bits_per_sample = 1;
  return out;
}

}  // namespace aoakey
