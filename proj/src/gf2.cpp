#include "conley/gf2.hpp"

#include "conley/errors.hpp"

#include <algorithm>

namespace conley {

BitMatrix::BitMatrix(int rows, int cols) : rows_(rows), cols_(cols), words_((cols + 63) / 64) {
  if (rows < 0 || cols < 0) throw PreconditionError("BitMatrix: negative shape");
  data_.assign(static_cast<std::size_t>(rows_) * words_, 0);
}

bool BitMatrix::get(int r, int c) const { return (row(r)[c / 64] >> (c % 64)) & 1u; }

void BitMatrix::set(int r, int c, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (c % 64);
  if (value)
    row(r)[c / 64] |= bit;
  else
    row(r)[c / 64] &= ~bit;
}

void BitMatrix::flip(int r, int c) { row(r)[c / 64] ^= std::uint64_t{1} << (c % 64); }

bool BitMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](std::uint64_t w) { return w == 0; });
}

int BitMatrix::rank() const {
  BitMatrix m = *this;
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (m.get(r, c)) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank) std::swap_ranges(m.row(pivot), m.row(pivot) + words_, m.row(rank));
    for (int r = 0; r < rows_; ++r)
      if (r != rank && m.get(r, c))
        for (int w = 0; w < words_; ++w) m.row(r)[w] ^= m.row(rank)[w];
    ++rank;
  }
  return rank;
}

BitMatrix BitMatrix::operator*(const BitMatrix& other) const {
  if (cols_ != other.rows_) throw PreconditionError("BitMatrix product: shape mismatch");
  BitMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (get(i, j))
        for (int w = 0; w < out.words_; ++w) out.row(i)[w] ^= other.row(j)[w];
  return out;
}

std::vector<std::string> BitMatrix::to_strings() const {
  std::vector<std::string> out(rows_, std::string(cols_, '0'));
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      if (get(r, c)) out[r][c] = '1';
  return out;
}

}  // namespace conley
