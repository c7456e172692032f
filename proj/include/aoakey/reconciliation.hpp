#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aoakey {

/// One protocol message. Parity records are bits Alice disclosed (block parities and
/// binary-search sub-block parities); corrections are Bob's flips, by original bit index.
struct TranscriptRecord {
  enum class Kind { Parity, Correction, HashIndex };
  Kind kind = Kind::Parity;
  int pass = 0;
  std::size_t block = 0;
  std::uint64_t value = 0;
};

struct Transcript {
  std::vector<TranscriptRecord> records;

  std::size_t parity_count() const noexcept;
  std::size_t correction_count() const noexcept;
  /// One line per record: "pass=<p> block=<b> parity=<0|1>", "... correction=<index>" or
  /// "hash-index=<index>".
  std::string to_log() const;
};

/// Cascade: every pass permutes both strings with a permutation derived from the shared
/// seed, splits them into blocks of block_size * 2^pass bits and corrects blocks whose
/// parities disagree by binary search. A correction re-opens the blocks of earlier passes
/// that contain the flipped bit.
struct ReconciliationSession {
  std::uint64_t permutation_seed = 0;
  std::size_t block_size = 8;
  int pass_count = 4;

  void validate() const;
};

struct ReconciliationResult {
  std::vector<std::uint8_t> corrected;
  Transcript transcript;
};

/// Alice's bits are never modified; the result holds Bob's corrected copy.
ReconciliationResult reconcile(std::span<const std::uint8_t> alice, std::span<const std::uint8_t> bob,
                               const ReconciliationSession& session);

/// ceil(0.73 / bmr_estimate); `full_length` when the estimate is 0.
std::size_t estimate_initial_block_size(double bmr_estimate, std::size_t full_length);

std::size_t leakage_bits(const Transcript& transcript) noexcept;

/// Permutation of pass `pass`: position -> original index.
std::vector<std::size_t> pass_permutation(std::uint64_t seed, int pass, std::size_t length);

}  // namespace aoakey
