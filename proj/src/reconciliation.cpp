#include "aoakey/reconciliation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "aoakey/rng.hpp"

namespace aoakey {

std::size_t Transcript::parity_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.kind == TranscriptRecord::Kind::Parity;
  }));
}

std::size_t Transcript::correction_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) {
    return r.kind == TranscriptRecord::Kind::Correction;
  }));
}

std::string Transcript::to_log() const {
  std::ostringstream os;
  for (const auto& r : records) {
    switch (r.kind) {
      case TranscriptRecord::Kind::Parity:
        os << "pass=" << r.pass << " block=" << r.block << " parity=" << r.value << '\n';
        break;
      case TranscriptRecord::Kind::Correction:
        os << "pass=" << r.pass << " block=" << r.block << " correction=" << r.value << '\n';
        break;
      case TranscriptRecord::Kind::HashIndex:
        os << "hash-index=" << r.value << '\n';
        break;
    }
  }
  return os.str();
}

void ReconciliationSession::validate() const {
  if (block_size < 1) throw std::invalid_argument("reconciliation: block size must be >= 1");
  if (pass_count < 1) throw std::invalid_argument("reconciliation: pass count must be >= 1");
}

std::size_t estimate_initial_block_size(double bmr_estimate, std::size_t full_length) {
  if (!(bmr_estimate >= 0.0) || bmr_estimate > 0.5) {
    throw std::invalid_argument("block size: BMR estimate must be in [0, 0.5]");
  }
  if (bmr_estimate == 0.0) return std::max<std::size_t>(full_length, 1);
  return static_cast<std::size_t>(std::ceil(0.73 / bmr_estimate - 1e-12));
}

std::size_t leakage_bits(const Transcript& transcript) noexcept { return transcript.parity_count(); }

std::vector<std::size_t> pass_permutation(std::uint64_t seed, int pass, std::size_t length) {
  std::vector<std::size_t> perm(length);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed(seed, {stream::kPermutation, static_cast<std::uint64_t>(pass)}));
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

namespace {

struct PassLayout {
  std::vector<std::size_t> order;     // position -> original index
  std::vector<std::size_t> position;  // original index -> position
  std::size_t block_size;
  std::vector<std::uint8_t> alice_parity;

  std::size_t block_of(std::size_t original) const { return position[original] / block_size; }
  std::size_t block_begin(std::size_t b) const { return b * block_size; }
  std::size_t block_end(std::size_t b) const { return std::min(order.size(), (b + 1) * block_size); }
};

class Cascade {
 public:
  Cascade(std::span<const std::uint8_t> alice, std::vector<std::uint8_t>& bob, Transcript& t)
      : alice_(alice), bob_(bob), transcript_(t) {}

  void run(const ReconciliationSession& s) {
    const std::size_t n = alice_.size();
    for (int p = 0; p < s.pass_count; ++p) {
      PassLayout layout;
      layout.order = pass_permutation(s.permutation_seed, p, n);
      layout.position.resize(n);
      for (std::size_t i = 0; i < n; ++i) layout.position[layout.order[i]] = i;
      const std::size_t shift = static_cast<std::size_t>(std::min(p, 62));
      layout.block_size = s.block_size > (n >> shift) ? n : s.block_size << shift;
      layout.block_size = std::max<std::size_t>(layout.block_size, 1);
      const std::size_t blocks = (n + layout.block_size - 1) / layout.block_size;
      layout.alice_parity.resize(blocks);
      passes_.push_back(std::move(layout));
      PassLayout& cur = passes_.back();

      std::deque<std::pair<int, std::size_t>> queue;
      for (std::size_t b = 0; b < blocks; ++b) {
        cur.alice_parity[b] = parity(alice_, cur, cur.block_begin(b), cur.block_end(b));
        transcript_.records.push_back({TranscriptRecord::Kind::Parity, p, b, cur.alice_parity[b]});
        if (parity(bob_, cur, cur.block_begin(b), cur.block_end(b)) != cur.alice_parity[b]) queue.emplace_back(p, b);
      }
      while (!queue.empty()) {
        const auto [q, b] = queue.front();
        queue.pop_front();
        const PassLayout& l = passes_[static_cast<std::size_t>(q)];
        if (parity(bob_, l, l.block_begin(b), l.block_end(b)) == l.alice_parity[b]) continue;
        const std::size_t flipped = binary_search(q, b);
        for (std::size_t r = 0; r < passes_.size(); ++r) {
          if (static_cast<int>(r) == q) continue;
          const PassLayout& lr = passes_[r];
          const std::size_t c = lr.block_of(flipped);
          if (parity(bob_, lr, lr.block_begin(c), lr.block_end(c)) != lr.alice_parity[c]) {
            queue.emplace_back(static_cast<int>(r), c);
          }
        }
      }
    }
  }

 private:
  static std::uint8_t parity(std::span<const std::uint8_t> bits, const PassLayout& l, std::size_t begin,
                             std::size_t end) {
    std::uint8_t p = 0;
    for (std::size_t i = begin; i < end; ++i) p ^= bits[l.order[i]];
    return p;
  }

  /// Locates one error in a block with odd parity difference; every half-parity Alice
  /// discloses is recorded.
  std::size_t binary_search(int pass, std::size_t block) {
    const PassLayout& l = passes_[static_cast<std::size_t>(pass)];
    std::size_t lo = l.block_begin(block), hi = l.block_end(block);
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const std::uint8_t pa = parity(alice_, l, lo, mid);
      transcript_.records.push_back({TranscriptRecord::Kind::Parity, pass, block, pa});
      if (parity(bob_, l, lo, mid) != pa) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const std::size_t original = l.order[lo];
    bob_[original] ^= 1u;
    transcript_.records.push_back({TranscriptRecord::Kind::Correction, pass, block, original});
    return original;
  }

  std::span<const std::uint8_t> alice_;
  std::vector<std::uint8_t>& bob_;
  Transcript& transcript_;
  std::vector<PassLayout> passes_;
};

}  // namespace

ReconciliationResult reconcile(std::span<const std::uint8_t> alice, std::span<const std::uint8_t> bob,
                               const ReconciliationSession& session) {
  session.validate();
  if (alice.size() != bob.size()) throw std::invalid_argument("reconcile: length mismatch");
  ReconciliationResult out;
  out.corrected.assign(bob.begin(), bob.end());
  if (alice.empty()) return out;
  Cascade(alice, out.corrected, out.transcript).run(session);
  return out;
}

}  // namespace aoakey
