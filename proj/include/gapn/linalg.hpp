#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gapn/numtheory.hpp"

namespace gapn {

using MatrixFp = std::vector<std::vector<std::uint64_t>>;

/// Rank over F_p by Gaussian elimination. Entries must already be reduced.
inline std::size_t rank_mod_p(MatrixFp rows, std::uint64_t p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint64_t inv = nt::powmod(rows[rank][c], p - 2, p);
    for (auto& v : rows[rank]) v = nt::mulmod(v, inv, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const std::uint64_t factor = rows[r][c];
      for (std::size_t k = c; k < cols; ++k) {
        rows[r][k] = (rows[r][k] + p - nt::mulmod(factor, rows[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace gapn
