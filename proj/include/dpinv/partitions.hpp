#pragma once

/// \file partitions.hpp
/// Integer partitions with centraliser orders and s-reduction, cycle
/// patterns over a slot alphabet, and the Theta_alpha combinatorics of
/// Young-subgroup conjugacy classes.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpinv/modarith.hpp"
#include "dpinv/perm.hpp"

namespace dpinv {

class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<std::uint32_t> parts) : parts_(std::move(parts)) {
    std::sort(parts_.rbegin(), parts_.rend());
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  Partition(std::initializer_list<std::uint32_t> parts)
      : Partition(std::vector<std::uint32_t>(parts)) {}

  const std::vector<std::uint32_t>& parts() const { return parts_; }
  std::uint32_t length() const { return static_cast<std::uint32_t>(parts_.size()); }

  std::uint64_t size() const {
    std::uint64_t s = 0;
    for (auto v : parts_) s += v;
    return s;
  }

  std::uint32_t multiplicity(std::uint32_t i) const {
    return static_cast<std::uint32_t>(std::count(parts_.begin(), parts_.end(), i));
  }

  /// m[i] = multiplicity of part i, for 1 <= i <= largest part.
  std::vector<std::uint32_t> multiplicities() const {
    std::vector<std::uint32_t> m(parts_.empty() ? 1 : parts_.front() + 1, 0);
    for (auto v : parts_) ++m[v];
    return m;
  }

  std::string to_string() const {
    if (parts_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) os << '+';
      os << parts_[i];
    }
    return os.str();
  }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return parts_ != o.parts_; }
  /// Reverse-lexicographic: (3) < (2,1) < (1,1,1).
  bool operator<(const Partition& o) const {
    return std::lexicographical_compare(parts_.begin(), parts_.end(), o.parts_.begin(),
                                        o.parts_.end(), std::greater<std::uint32_t>());
  }

 private:
  std::vector<std::uint32_t> parts_;
};

/// All partitions of r in reverse-lexicographic order, (r) first.
/// max_ones bounds the multiplicity of 1 strictly: m_1 < max_ones.
inline std::vector<Partition> enumerate_partitions(std::uint32_t r,
                                                   std::optional<std::uint32_t> max_length = {},
                                                   std::optional<std::uint32_t> max_ones = {}) {
  std::vector<Partition> out;
  std::vector<std::uint32_t> cur;
  auto rec = [&](auto&& self, std::uint32_t rest, std::uint32_t cap) -> void {
    if (rest == 0) {
      Partition lam(cur);
      if (!max_ones || lam.multiplicity(1) < *max_ones) out.push_back(std::move(lam));
      return;
    }
    if (max_length && cur.size() >= *max_length) return;
    for (std::uint32_t part = std::min(rest, cap); part >= 1; --part) {
      cur.push_back(part);
      self(self, rest - part, part);
      cur.pop_back();
    }
  };
  rec(rec, r, r == 0 ? 1 : r);
  return out;
}

struct CentraliserOrders {
  std::uint64_t z; // prod i^{m_i} m_i!
  std::uint64_t u; // prod m_i!
};

inline CentraliserOrders centraliser_orders(const Partition& lam) {
  CentraliserOrders c{1, 1};
  auto m = lam.multiplicities();
  for (std::uint32_t i = 1; i < m.size(); ++i) {
    for (std::uint32_t k = 0; k < m[i]; ++k) c.z *= i;
    for (std::uint32_t k = 2; k <= m[i]; ++k) {
      c.z *= k;
      c.u *= k;
    }
  }
  return c;
}

/// Repeatedly replace p^s occurrences of 1 by p^{s-1} occurrences of p.
/// The result has fewer than p^s ones and the same size.
inline Partition s_reduce(const Partition& lam, const PrimeCtx& ctx, std::uint32_t s) {
  if (s < 1) throw std::invalid_argument("s_reduce: s must be >= 1");
  std::uint64_t ps = 1, ps1 = 1;
  for (std::uint32_t k = 0; k < s; ++k) ps *= ctx.p();
  for (std::uint32_t k = 0; k + 1 < s; ++k) ps1 *= ctx.p();
  std::uint32_t ones = lam.multiplicity(1);
  std::uint64_t blocks = ones / ps;
  if (blocks == 0) return lam;
  std::vector<std::uint32_t> parts;
  for (auto v : lam.parts())
    if (v != 1) parts.push_back(v);
  for (std::uint64_t k = 0; k < blocks * ps1; ++k) parts.push_back(ctx.p());
  for (std::uint64_t k = 0; k < ones % ps; ++k) parts.push_back(1);
  return Partition(std::move(parts));
}

/// Partitions of r grouped by their s-reduced form.  Classes are ordered
/// by their s-reduced representative, members in enumeration order.
inline std::vector<std::vector<Partition>> s_equivalence_classes(
    std::uint32_t r, const PrimeCtx& ctx, std::uint32_t s,
    std::optional<std::uint32_t> max_length = {}) {
  std::map<Partition, std::vector<Partition>> fibers;
  for (const Partition& lam : enumerate_partitions(r, max_length))
    fibers[s_reduce(lam, ctx, s)].push_back(lam);
  std::vector<std::vector<Partition>> out;
  out.reserve(fibers.size());
  for (auto& [key, members] : fibers) out.push_back(std::move(members));
  return out;
}

/// A word over the slot alphabet {1..m} up to cyclic rotation, stored as
/// its lexicographically least rotation.
class CyclePattern {
 public:
  explicit CyclePattern(std::vector<std::uint32_t> word) {
    if (word.empty()) throw std::invalid_argument("CyclePattern: empty word");
    for (std::uint32_t c : word)
      if (c < 1) throw std::invalid_argument("CyclePattern: letters start at 1");
    word_ = least_rotation(std::move(word));
  }

  CyclePattern(std::initializer_list<std::uint32_t> word)
      : CyclePattern(std::vector<std::uint32_t>(word)) {}

  const std::vector<std::uint32_t>& word() const { return word_; }
  std::uint32_t length() const { return static_cast<std::uint32_t>(word_.size()); }

  /// Letter counts as an m-vector (1-based letters).
  std::vector<std::uint32_t> content(std::uint32_t m) const {
    std::vector<std::uint32_t> c(m, 0);
    for (std::uint32_t letter : word_) {
      if (letter > m) throw std::invalid_argument("CyclePattern: letter exceeds alphabet");
      ++c[letter - 1];
    }
    return c;
  }

  std::uint32_t max_letter() const { return *std::max_element(word_.begin(), word_.end()); }

  CyclePattern power(std::uint32_t l) const {
    std::vector<std::uint32_t> w;
    w.reserve(word_.size() * l);
    for (std::uint32_t k = 0; k < l; ++k) w.insert(w.end(), word_.begin(), word_.end());
    return CyclePattern(std::move(w));
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < word_.size(); ++i) {
      if (i) os << ',';
      os << word_[i];
    }
    os << ']';
    return os.str();
  }

  bool operator==(const CyclePattern& o) const { return word_ == o.word_; }
  bool operator!=(const CyclePattern& o) const { return word_ != o.word_; }
  /// Shorter patterns first, then lexicographic.
  bool operator<(const CyclePattern& o) const {
    if (word_.size() != o.word_.size()) return word_.size() < o.word_.size();
    return word_ < o.word_;
  }

 private:
  static std::vector<std::uint32_t> least_rotation(std::vector<std::uint32_t> w) {
    // O(t^2) scan is fine at desk scale.
    std::vector<std::uint32_t> best = w;
    for (std::size_t shift = 1; shift < w.size(); ++shift) {
      std::rotate(w.begin(), w.begin() + 1, w.end());
      if (w < best) best = w;
    }
    return best;
  }

  std::vector<std::uint32_t> word_;
};

inline CyclePattern canonical_pattern(const std::vector<std::uint32_t>& word) {
  return CyclePattern(word);
}

/// b = root^l with root primitive and l maximal.
inline std::pair<CyclePattern, std::uint32_t> primitive_decompose(const CyclePattern& b) {
  const auto& w = b.word();
  std::uint32_t t = b.length();
  for (std::uint32_t d = 1; d <= t; ++d) {
    if (t % d) continue;
    bool periodic = true;
    for (std::uint32_t k = d; k < t && periodic; ++k) periodic = (w[k] == w[k % d]);
    if (periodic)
      return {CyclePattern(std::vector<std::uint32_t>(w.begin(), w.begin() + d)), t / d};
  }
  return {b, 1}; // unreachable; d == t always periodic
}

/// Finitely supported map from primitive cycle patterns to partitions.
class MultiPartition {
 public:
  MultiPartition() = default;

  void add_part(const CyclePattern& pattern, std::uint32_t part) {
    if (primitive_decompose(pattern).second != 1)
      throw std::invalid_argument("MultiPartition: pattern not primitive");
    auto& lam = map_[pattern];
    auto parts = lam.parts();
    parts.push_back(part);
    lam = Partition(std::move(parts));
  }

  void set(const CyclePattern& pattern, Partition lam) {
    if (primitive_decompose(pattern).second != 1)
      throw std::invalid_argument("MultiPartition: pattern not primitive");
    if (lam.length() == 0)
      map_.erase(pattern);
    else
      map_[pattern] = std::move(lam);
  }

  const std::map<CyclePattern, Partition>& support() const { return map_; }

  Partition at(const CyclePattern& pattern) const {
    auto it = map_.find(pattern);
    return it == map_.end() ? Partition{} : it->second;
  }

  std::vector<std::uint32_t> content(std::uint32_t m) const {
    std::vector<std::uint32_t> c(m, 0);
    for (const auto& [b, lam] : map_) {
      auto bc = b.content(m);
      for (std::uint32_t q = 0; q < m; ++q)
        c[q] += bc[q] * static_cast<std::uint32_t>(lam.size());
    }
    return c;
  }

  /// z and u of the multipartition: products over the support.
  CentraliserOrders centraliser_orders() const {
    CentraliserOrders c{1, 1};
    for (const auto& [b, lam] : map_) {
      auto cl = dpinv::centraliser_orders(lam);
      c.z *= cl.z;
      c.u *= cl.u;
    }
    return c;
  }

  /// "{[1,1,2]: 2+1, [1]: 1}", longest patterns first.
  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto it = map_.rbegin(); it != map_.rend(); ++it) {
      if (!first) os << ", ";
      first = false;
      os << it->first.to_string() << ": " << it->second.to_string();
    }
    os << '}';
    return os.str();
  }

  bool operator==(const MultiPartition& o) const { return map_ == o.map_; }
  bool operator<(const MultiPartition& o) const { return map_ < o.map_; }

 private:
  std::map<CyclePattern, Partition> map_;
};

/// A composition alpha of r with its consecutive blocks Delta_i and the
/// block-index function zeta.
class YoungData {
 public:
  explicit YoungData(std::vector<std::uint32_t> alpha) : alpha_(std::move(alpha)) {
    std::uint32_t pos = 0;
    for (std::uint32_t a : alpha_) {
      starts_.push_back(pos);
      pos += a;
    }
    r_ = pos;
    block_of_.resize(r_);
    for (std::uint32_t i = 0; i < alpha_.size(); ++i)
      for (std::uint32_t j = 0; j < alpha_[i]; ++j) block_of_[starts_[i] + j] = i;
  }

  YoungData(std::initializer_list<std::uint32_t> alpha)
      : YoungData(std::vector<std::uint32_t>(alpha)) {}

  const std::vector<std::uint32_t>& alpha() const { return alpha_; }
  std::uint32_t r() const { return r_; }
  std::uint32_t slots() const { return static_cast<std::uint32_t>(alpha_.size()); }
  /// zeta: 0-based position -> 0-based block index.
  std::uint32_t block_of(std::uint32_t pos0) const { return block_of_.at(pos0); }
  /// Positions of block i (0-based).
  std::vector<std::uint32_t> block(std::uint32_t i) const {
    std::vector<std::uint32_t> b(alpha_.at(i));
    std::iota(b.begin(), b.end(), starts_[i]);
    return b;
  }
  std::uint32_t block_start(std::uint32_t i) const { return starts_.at(i); }

  bool preserves_blocks(const Permutation& pi) const {
    for (std::uint32_t i = 0; i < r_; ++i)
      if (block_of_[pi(i)] != block_of_[i]) return false;
    return true;
  }

  /// All elements of S_alpha as permutations of {1..r}. Guarded: r <= 8.
  std::vector<Permutation> young_subgroup() const {
    if (r_ > 8) throw std::invalid_argument("young_subgroup: r > 8");
    std::vector<Permutation> out;
    for (const auto& pi : all_permutations(r_))
      if (preserves_blocks(pi)) out.push_back(pi);
    return out;
  }

 private:
  std::vector<std::uint32_t> alpha_;
  std::vector<std::uint32_t> starts_;
  std::vector<std::uint32_t> block_of_;
  std::uint32_t r_ = 0;
};

/// The S_alpha cycle type of pi: each disjoint cycle (i_1..i_t) contributes
/// its block word [zeta(i_1),...,zeta(i_t)] = b^l, b primitive, as a part l
/// of the partition attached to b.
inline MultiPartition s_alpha_cycle_type(const Permutation& pi, const YoungData& young) {
  if (pi.degree() != young.r())
    throw std::invalid_argument("s_alpha_cycle_type: degree mismatch");
  MultiPartition out;
  for (const auto& cyc : pi.cycles()) {
    std::vector<std::uint32_t> word;
    word.reserve(cyc.size());
    for (std::uint32_t pos : cyc) word.push_back(young.block_of(pos) + 1);
    auto [root, l] = primitive_decompose(CyclePattern(std::move(word)));
    out.add_part(root, l);
  }
  return out;
}

namespace detail {

/// Primitive cycle patterns over {1..m} with content <= bound (componentwise),
/// in CyclePattern order.
inline std::vector<CyclePattern> primitive_patterns_within(
    const std::vector<std::uint32_t>& bound) {
  std::uint32_t m = static_cast<std::uint32_t>(bound.size());
  std::uint32_t total = 0;
  for (auto b : bound) total += b;
  std::vector<CyclePattern> out;
  std::vector<std::uint32_t> word;
  auto rec = [&](auto&& self) -> void {
    if (!word.empty()) {
      CyclePattern pat(word);
      if (pat.word() == word && primitive_decompose(pat).second == 1) out.push_back(pat);
    }
    if (word.size() == total) return;
    std::vector<std::uint32_t> cnt(m, 0);
    for (auto c : word) ++cnt[c - 1];
    for (std::uint32_t letter = 1; letter <= m; ++letter) {
      if (cnt[letter - 1] + 1 > bound[letter - 1]) continue;
      word.push_back(letter);
      self(self);
      word.pop_back();
    }
  };
  rec(rec);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace detail

/// All multipartitions of content alpha, each exactly once. Guard: |alpha| <= 8.
inline std::vector<MultiPartition> enumerate_theta_alpha(const YoungData& young) {
  if (young.r() > 8) throw std::invalid_argument("enumerate_theta_alpha: |alpha| > 8");
  const auto& alpha = young.alpha();
  std::uint32_t m = young.slots();
  auto patterns = detail::primitive_patterns_within(alpha);

  std::vector<MultiPartition> out;
  MultiPartition cur;
  auto rec = [&](auto&& self, std::size_t idx, std::vector<std::uint32_t> rest) -> void {
    bool done = std::all_of(rest.begin(), rest.end(), [](std::uint32_t v) { return v == 0; });
    if (idx == patterns.size()) {
      if (done) out.push_back(cur);
      return;
    }
    const CyclePattern& b = patterns[idx];
    auto bc = b.content(m);
    std::uint32_t kmax = UINT32_MAX;
    for (std::uint32_t q = 0; q < m; ++q)
      if (bc[q] > 0) kmax = std::min(kmax, rest[q] / bc[q]);
    for (std::uint32_t k = 0; k <= kmax; ++k) {
      if (k == 0) {
        self(self, idx + 1, rest);
        continue;
      }
      auto sub = rest;
      for (std::uint32_t q = 0; q < m; ++q) sub[q] -= k * bc[q];
      for (const Partition& lam : enumerate_partitions(k)) {
        cur.set(b, lam);
        self(self, idx + 1, sub);
      }
      cur.set(b, Partition{});
    }
  };
  rec(rec, 0, alpha);
  std::sort(out.begin(), out.end());
  return out;
}

/// s-reduce the partition attached to each single-letter pattern [j];
/// all other patterns are untouched.
inline MultiPartition s_reduce_multi(const MultiPartition& bl, const PrimeCtx& ctx,
                                     std::uint32_t s, std::uint32_t m) {
  MultiPartition out;
  for (const auto& [b, lam] : bl.support()) {
    if (b.length() == 1)
      out.set(b, s_reduce(lam, ctx, s));
    else
      out.set(b, lam);
  }
  (void)m;
  return out;
}

} // namespace dpinv
