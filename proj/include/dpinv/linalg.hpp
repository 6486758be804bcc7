#pragma once

/// \file linalg.hpp
/// Dense row reduction over F_p on byte-packed rows.  Rows stream through
/// an accumulator that keeps at most `width` pivot rows, so constraint
/// systems far taller than they are wide never materialise.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dpinv/modarith.hpp"

namespace dpinv {

using FpRow = std::vector<std::uint8_t>;

namespace detail {

template <int P>
inline void axpy_impl(std::uint8_t* dst, const std::uint8_t* src, std::uint32_t c,
                      std::size_t w) {
  for (std::size_t k = 0; k < w; ++k)
    dst[k] = static_cast<std::uint8_t>((dst[k] + c * src[k]) % P);
}

/// dst += c * src mod p.  The common primes get compile-time moduli so the
/// inner loop vectorises.
inline void axpy(std::uint8_t* dst, const std::uint8_t* src, std::uint32_t c, std::size_t w,
                 std::uint32_t p) {
  if (c == 0) return;
  switch (p) {
    case 2: axpy_impl<2>(dst, src, c, w); return;
    case 3: axpy_impl<3>(dst, src, c, w); return;
    case 5: axpy_impl<5>(dst, src, c, w); return;
    case 7: axpy_impl<7>(dst, src, c, w); return;
    default:
      for (std::size_t k = 0; k < w; ++k)
        dst[k] = static_cast<std::uint8_t>((dst[k] + c * src[k]) % p);
  }
}

template <int P>
inline void scale_impl(std::uint8_t* dst, std::uint32_t c, std::size_t w) {
  for (std::size_t k = 0; k < w; ++k) dst[k] = static_cast<std::uint8_t>((c * dst[k]) % P);
}

inline void scale(std::uint8_t* dst, std::uint32_t c, std::size_t w, std::uint32_t p) {
  switch (p) {
    case 2: return; // only unit is 1
    case 3: scale_impl<3>(dst, c, w); return;
    case 5: scale_impl<5>(dst, c, w); return;
    case 7: scale_impl<7>(dst, c, w); return;
    default:
      for (std::size_t k = 0; k < w; ++k) dst[k] = static_cast<std::uint8_t>((c * dst[k]) % p);
  }
}

} // namespace detail

/// Incremental reduced-row-echelon accumulator over F_p.
class RrefAccumulator {
 public:
  RrefAccumulator(std::size_t width, const PrimeCtx& ctx) : width_(width), ctx_(ctx) {}

  std::size_t width() const { return width_; }
  std::size_t rank() const { return rows_.size(); }

  /// Reduce `row` against the current pivots in place; returns the column
  /// of its leading entry, or width() if it reduced to zero.
  std::size_t reduce_in_place(FpRow& row) const {
    for (const auto& [col, idx] : pivot_of_col_) {
      if (row[col] == 0) continue;
      detail::axpy(row.data(), rows_[idx].data(), ctx_.p() - row[col], width_, ctx_.p());
    }
    for (std::size_t k = 0; k < width_; ++k)
      if (row[k]) return k;
    return width_;
  }

  /// Insert a row; returns true if it increased the rank.
  bool insert(FpRow row) {
    if (row.size() != width_) throw std::invalid_argument("RrefAccumulator: width mismatch");
    std::size_t lead = reduce_in_place(row);
    if (lead == width_) return false;
    detail::scale(row.data(), ctx_.inv(row[lead]), width_, ctx_.p());
    // Eliminate the new pivot from existing rows to keep the basis reduced.
    for (auto& existing : rows_)
      if (existing[lead])
        detail::axpy(existing.data(), row.data(), ctx_.p() - existing[lead], width_, ctx_.p());
    pivot_of_col_[lead] = rows_.size();
    rows_.push_back(std::move(row));
    return true;
  }

  bool contains(FpRow row) const { return reduce_in_place(row) == width_; }

  /// Rows sorted by pivot column (canonical reduced basis).
  std::vector<FpRow> reduced_rows() const {
    std::vector<FpRow> out;
    out.reserve(rows_.size());
    for (const auto& [col, idx] : pivot_of_col_) out.push_back(rows_[idx]);
    return out;
  }

  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& [col, idx] : pivot_of_col_) out.push_back(col);
    return out;
  }

  /// Basis of the kernel of the accumulated constraint matrix, one vector
  /// per free column, in reduced form.
  std::vector<FpRow> kernel_basis() const {
    std::vector<FpRow> out;
    auto rows = reduced_rows();
    std::vector<std::size_t> pivots = pivot_columns();
    std::vector<bool> is_pivot(width_, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < width_; ++f) {
      if (is_pivot[f]) continue;
      FpRow v(width_, 0);
      v[f] = 1;
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k][f]) v[pivots[k]] = static_cast<std::uint8_t>(ctx_.neg(rows[k][f]));
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t width_;
  PrimeCtx ctx_;
  std::vector<FpRow> rows_;
  std::map<std::size_t, std::size_t> pivot_of_col_;
};

} // namespace dpinv
