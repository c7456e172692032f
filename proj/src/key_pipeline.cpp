#include "aoakey/key_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aoakey/kernels.hpp"

namespace aoakey {

namespace {
constexpr double kBelowOne = 1.0 - 1e-12;
}

std::string_view to_string(ReferenceMode mode) noexcept {
  return mode == ReferenceMode::SharedReference ? "shared" : "opposite";
}

ReferenceMode parse_reference_mode(std::string_view name) {
  if (name == "shared") return ReferenceMode::SharedReference;
  if (name == "opposite") return ReferenceMode::OppositeReference;
  throw std::invalid_argument("unknown reference mode '" + std::string(name) + "' (shared|opposite)");
}

AngleOfArrival align_reference(const AngleOfArrival& local_estimate, const ReferenceConvention& conv, Node node) {
  if (conv.mode == ReferenceMode::OppositeReference || node == Node::Alice) return local_estimate;
  return AngleOfArrival::make(wrap_two_pi(local_estimate.azimuth - kPi), local_estimate.elevation);
}

QuantizerConfig QuantizerConfig::azimuth(int n_quan) { return {n_quan, 0.0, kTwoPi, true}; }
QuantizerConfig QuantizerConfig::elevation(int n_quan) { return {n_quan, 0.0, kPi / 2.0, false}; }
QuantizerConfig QuantizerConfig::unit(int n_quan) { return {n_quan, 0.0, 1.0, false}; }

void QuantizerConfig::validate() const {
  if (n_quan < 1 || n_quan > 16) throw std::invalid_argument("quantizer: n_quan must be in [1, 16]");
  if (!std::isfinite(low) || !std::isfinite(high) || !(high > low)) {
    throw std::invalid_argument("quantizer: need finite low < high");
  }
}

std::uint32_t quantize(double value, const QuantizerConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(value)) throw std::invalid_argument("quantize: non-finite value");
  const double width = cfg.high - cfg.low;
  double offset = value - cfg.low;
  if (cfg.wrap) {
    offset = std::fmod(offset, width);
    if (offset < 0.0) offset += width;
  } else if (offset < 0.0 || offset > width) {
    throw std::invalid_argument("quantize: value outside quantizer range");
  }
  const std::uint32_t levels = 1u << cfg.n_quan;
  const double scaled = std::floor(offset / width * levels);
  if (scaled >= levels) return levels - 1;
  return static_cast<std::uint32_t>(scaled);
}

void PipelineConfig::validate() const {
  if (n_quan < 1 || n_quan > 16) throw std::invalid_argument("pipeline: n_quan must be in [1, 16]");
  if (n_encod < 1 || n_encod > 16) throw std::invalid_argument("pipeline: n_encod must be in [1, 16]");
  if (n_comb < 1 || n_comb > n_quan) throw std::invalid_argument("pipeline: n_comb must be in [1, n_quan]");
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Azimuth: return "azimuth";
    case Provenance::Elevation: return "elevation";
    case Provenance::Amplitude: return "amplitude";
    case Provenance::Phase: return "phase";
    case Provenance::Combined: return "combined";
  }
  return "combined";
}

std::vector<std::uint8_t> BitStream::to_raw() const {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

std::string BitStream::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  for (auto byte : to_raw()) {
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 0xf]);
  }
  return s;
}

std::string BitStream::to_binary_string() const {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

std::uint32_t gray_encode(std::uint32_t v) noexcept { return v ^ (v >> 1); }

std::uint32_t gray_decode(std::uint32_t g) noexcept {
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) g ^= g >> shift;
  return g;
}

BitStream encode_levels(std::span<const std::uint32_t> indices, const PipelineConfig& cfg, Provenance provenance) {
  cfg.validate();
  const std::uint32_t levels = 1u << cfg.n_quan;
  BitStream out;
  out.provenance = provenance;
  out.bits_per_sample = static_cast<std::size_t>(cfg.encoded_width());
  out.bits.reserve(indices.size() * out.bits_per_sample);
  for (auto idx : indices) {
    if (idx >= levels) throw std::invalid_argument("encode: level index out of range");
    const std::uint32_t g = gray_encode(idx);
    const auto msb = static_cast<std::uint8_t>((g >> (cfg.n_quan - 1)) & 1u);
    for (int r = 0; r < cfg.n_encod; ++r) out.bits.push_back(msb);
    for (int b = cfg.n_quan - 2; b >= 0; --b) out.bits.push_back(static_cast<std::uint8_t>((g >> b) & 1u));
  }
  return out;
}

BitStream combine_streams(const BitStream& a, const BitStream& b, const PipelineConfig& cfg) {
  cfg.validate();
  if (a.sample_count() != b.sample_count()) throw std::invalid_argument("combine: sample counts differ");
  const auto width = static_cast<std::size_t>(cfg.encoded_width());
  if (a.bits_per_sample != width || b.bits_per_sample != width) {
    throw std::invalid_argument("combine: streams were not encoded with this pipeline configuration");
  }
  const auto keep = static_cast<std::size_t>(cfg.combined_width());
  BitStream out;
  out.provenance = Provenance::Combined;
  out.bits_per_sample = 2 * keep;
  out.bits.reserve(a.sample_count() * out.bits_per_sample);
  for (std::size_t s = 0; s < a.sample_count(); ++s) {
    const auto* pa = a.bits.data() + s * a.bits_per_sample;
    const auto* pb = b.bits.data() + s * b.bits_per_sample;
    out.bits.insert(out.bits.end(), pa, pa + keep);
    out.bits.insert(out.bits.end(), pb, pb + keep);
  }
  return out;
}

double bit_mismatch_rate(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("bit mismatch rate: length mismatch");
  if (a.empty()) throw std::invalid_argument("bit mismatch rate: empty streams");
  return static_cast<double>(kernels::mismatch_count(a, b)) / static_cast<double>(a.size());
}

double bit_mismatch_rate(const BitStream& a, const BitStream& b) { return bit_mismatch_rate(a.bits, b.bits); }

void ScaledSequence::validate() const {
  if (values.empty()) throw std::invalid_argument("scaled sequence: empty");
  for (double v : values) {
    if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("scaled sequence: value outside [0, 1)");
  }
}

ScaledSequence scale_azimuths(std::span<const AngleOfArrival> estimates) {
  ScaledSequence s;
  s.source = Provenance::Azimuth;
  s.values.reserve(estimates.size());
  for (const auto& e : estimates) s.values.push_back(std::min(wrap_two_pi(e.azimuth) / kTwoPi, kBelowOne));
  return s;
}

ScaledSequence scale_elevations(std::span<const AngleOfArrival> estimates) {
  ScaledSequence s;
  s.source = Provenance::Elevation;
  s.values.reserve(estimates.size());
  for (const auto& e : estimates) s.values.push_back(std::clamp(e.elevation / (kPi / 2.0), 0.0, kBelowOne));
  return s;
}

BitStream bits_from_scaled(const ScaledSequence& seq, const PipelineConfig& cfg) {
  seq.validate();
  cfg.validate();
  const auto q = QuantizerConfig::unit(cfg.n_quan);
  std::vector<std::uint32_t> levels;
  levels.reserve(seq.values.size());
  for (double v : seq.values) levels.push_back(quantize(v, q));
  return encode_levels(levels, cfg, seq.source);
}

BitStream bits_from_scaled(const ScaledSequence& a, const ScaledSequence& b, const PipelineConfig& cfg) {
  return combine_streams(bits_from_scaled(a, cfg), bits_from_scaled(b, cfg), cfg);
}

}  // namespace aoakey
