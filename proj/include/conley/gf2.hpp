#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conley {

/// Dense matrix over GF(2), rows stored as 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool get(int r, int c) const;
  void set(int r, int c, bool value);
  void flip(int r, int c);

  bool is_zero() const;
  int rank() const;
  /// Product over GF(2); throws PreconditionError on shape mismatch.
  BitMatrix operator*(const BitMatrix& other) const;
  bool operator==(const BitMatrix&) const = default;

  /// Rows as strings of '0'/'1'.
  std::vector<std::string> to_strings() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> data_;

  std::uint64_t* row(int r) { return data_.data() + static_cast<std::size_t>(r) * words_; }
  const std::uint64_t* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * words_; }
};

}  // namespace conley
