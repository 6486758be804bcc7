#pragma once

/// \file perm.hpp
/// Small symmetric-group utilities: permutations of {1..r} stored as
/// 0-based image vectors, cycle decompositions, enumeration.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpinv {

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t v : img_) {
      if (v >= img_.size() || seen[v])
        throw std::invalid_argument("Permutation: image vector is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::uint32_t r) {
    std::vector<std::uint32_t> img(r);
    std::iota(img.begin(), img.end(), 0u);
    return Permutation(std::move(img));
  }

  std::uint32_t degree() const { return static_cast<std::uint32_t>(img_.size()); }
  std::uint32_t operator()(std::uint32_t i) const { return img_[i]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  /// this after other: (a*b)(i) = a(b(i)).
  Permutation compose(const Permutation& other) const {
    std::vector<std::uint32_t> img(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) img[i] = img_[other.img_[i]];
    Permutation r;
    r.img_ = std::move(img);
    return r;
  }

  Permutation inverse() const {
    std::vector<std::uint32_t> img(img_.size());
    for (std::uint32_t i = 0; i < img_.size(); ++i) img[img_[i]] = i;
    Permutation r;
    r.img_ = std::move(img);
    return r;
  }

  /// sigma * this * sigma^{-1}.
  Permutation conjugated_by(const Permutation& sigma) const {
    return sigma.compose(*this).compose(sigma.inverse());
  }

  /// Disjoint cycles including fixed points, each starting at its least
  /// element, ordered by least element.
  std::vector<std::vector<std::uint32_t>> cycles() const {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<bool> seen(img_.size(), false);
    for (std::uint32_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::vector<std::uint32_t> c;
      std::uint32_t j = i;
      do {
        c.push_back(j);
        seen[j] = true;
        j = img_[j];
      } while (j != i);
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<std::uint32_t> cycle_lengths_desc() const {
    std::vector<std::uint32_t> lens;
    for (const auto& c : cycles()) lens.push_back(static_cast<std::uint32_t>(c.size()));
    std::sort(lens.rbegin(), lens.rend());
    return lens;
  }

  /// "(1 2 3)(4 5)" with 1-based entries, fixed points omitted; "()" for id.
  std::string to_cycle_string() const {
    std::ostringstream os;
    bool any = false;
    for (const auto& c : cycles()) {
      if (c.size() == 1) continue;
      any = true;
      os << '(';
      for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) os << ' ';
        os << c[k] + 1;
      }
      os << ')';
    }
    return any ? os.str() : "()";
  }

  static Permutation parse_cycles(const std::string& text, std::uint32_t r) {
    std::vector<std::uint32_t> img(r);
    std::iota(img.begin(), img.end(), 0u);
    std::size_t pos = 0;
    while (pos < text.size()) {
      while (pos < text.size() && text[pos] != '(') ++pos;
      if (pos >= text.size()) break;
      ++pos;
      std::vector<std::uint32_t> cyc;
      std::string num;
      for (; pos < text.size() && text[pos] != ')'; ++pos) {
        if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
          num += text[pos];
        } else if (!num.empty()) {
          cyc.push_back(static_cast<std::uint32_t>(std::stoul(num)));
          num.clear();
        }
      }
      if (!num.empty()) cyc.push_back(static_cast<std::uint32_t>(std::stoul(num)));
      if (pos >= text.size()) throw std::invalid_argument("Permutation: unbalanced cycle notation");
      ++pos;
      for (std::uint32_t v : cyc)
        if (v < 1 || v > r) throw std::invalid_argument("Permutation: cycle entry out of range");
      for (std::size_t k = 0; k < cyc.size(); ++k)
        img[cyc[k] - 1] = cyc[(k + 1) % cyc.size()] - 1;
    }
    return Permutation(std::move(img));
  }

  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

 private:
  std::vector<std::uint32_t> img_;
};

/// All of S_r in lexicographic order of image vectors. Guarded: r <= 8.
inline std::vector<Permutation> all_permutations(std::uint32_t r) {
  if (r > 8) throw std::invalid_argument("all_permutations: r > 8");
  std::vector<std::uint32_t> img(r);
  std::iota(img.begin(), img.end(), 0u);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

} // namespace dpinv
