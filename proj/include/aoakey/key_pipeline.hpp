#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aoakey/angles.hpp"

namespace aoakey {

enum class ReferenceMode { SharedReference, OppositeReference };
enum class Rotation { Clockwise };
enum class Node { Alice, Bob };

/// Agreed once per session. With a shared reference direction the two nodes see the
/// transmitter on opposite sides, so Bob's raw azimuth is off by pi.
struct ReferenceConvention {
  ReferenceMode mode = ReferenceMode::SharedReference;
  Rotation rotation = Rotation::Clockwise;
};

std::string_view to_string(ReferenceMode mode) noexcept;
ReferenceMode parse_reference_mode(std::string_view name);

AngleOfArrival align_reference(const AngleOfArrival& local_estimate, const ReferenceConvention& conv, Node node);

/// Uniform quantizer over [low, high). With `wrap`, inputs are first reduced modulo the
/// range width (azimuth); otherwise the top edge maps to the last level (elevation).
struct QuantizerConfig {
  int n_quan = 7;
  double low = 0.0;
  double high = kTwoPi;
  bool wrap = true;

  static QuantizerConfig azimuth(int n_quan);
  static QuantizerConfig elevation(int n_quan);
  static QuantizerConfig unit(int n_quan);
  void validate() const;
};

/// Level index in [0, 2^n_quan). Throws std::invalid_argument for non-finite input or a
/// value outside the range of a non-wrapping quantizer.
std::uint32_t quantize(double value, const QuantizerConfig& cfg);

struct PipelineConfig {
  int n_quan = 7;
  int n_encod = 2;
  int n_comb = 2;

  int encoded_width() const noexcept { return n_quan + n_encod - 1; }
  /// Bits each stream contributes to a combined sample after the n_quan - n_comb least
  /// significant encoded bits are dropped.
  int combined_width() const noexcept { return n_comb + n_encod - 1; }
  void validate() const;
};

enum class Provenance { Azimuth, Elevation, Amplitude, Phase, Combined };

std::string_view to_string(Provenance p) noexcept;

/// One bit per byte, most significant bit of each sample first.
struct BitStream {
  std::vector<std::uint8_t> bits;
  Provenance provenance = Provenance::Combined;
  std::size_t bits_per_sample = 1;

  std::size_t size() const noexcept { return bits.size(); }
  std::size_t sample_count() const noexcept { return bits_per_sample ? bits.size() / bits_per_sample : 0; }

  /// Big-endian packing, zero-padded to whole bytes; hex is lowercase.
  std::vector<std::uint8_t> to_raw() const;
  std::string to_hex() const;
  /// Compact 0/1 text.
  std::string to_binary_string() const;
};

std::uint32_t gray_encode(std::uint32_t v) noexcept;
std::uint32_t gray_decode(std::uint32_t g) noexcept;

/// Gray-codes each index to n_quan bits and repeats the Gray MSB n_encod times:
/// n_quan + n_encod - 1 bits per sample, repeated MSB block first.
BitStream encode_levels(std::span<const std::uint32_t> indices, const PipelineConfig& cfg,
                        Provenance provenance = Provenance::Combined);

/// Drops the n_quan - n_comb least significant encoded bits of each sample of both
/// streams and concatenates the rest, A before B. The repeated MSB block is kept whole.
BitStream combine_streams(const BitStream& a, const BitStream& b, const PipelineConfig& cfg);

double bit_mismatch_rate(const BitStream& a, const BitStream& b);
double bit_mismatch_rate(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// A randomness source already mapped into [0, 1).
struct ScaledSequence {
  std::vector<double> values;
  Provenance source = Provenance::Azimuth;

  void validate() const;
};

/// Azimuth / 2pi (wrapped) and elevation / (pi/2), both kept strictly below 1.
ScaledSequence scale_azimuths(std::span<const AngleOfArrival> estimates);
ScaledSequence scale_elevations(std::span<const AngleOfArrival> estimates);

/// Common downstream path for every source: quantize on [0, 1) and encode.
BitStream bits_from_scaled(const ScaledSequence& seq, const PipelineConfig& cfg);
/// Two sources combined sample by sample.
BitStream bits_from_scaled(const ScaledSequence& a, const ScaledSequence& b, const PipelineConfig& cfg);

struct KeyPair {
  BitStream alice;
  BitStream bob;
  double bmr = 0.0;
};

}  // namespace aoakey
