#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <vector>

namespace rqmcmix {

/// Direction numbers for a base-2 Sobol' sequence, expanded to column
/// vectors at the full digit width used by the point generator.
///
/// Digit convention: a coordinate is a word of kDigitWidth binary digits
/// d_1 d_2 ... d_W with value sum d_k 2^{-k}.  Digit k lives at bit
/// (kDigitWidth - k) of the word, so the word as an integer equals the
/// coordinate times 2^W and converting to double is exact.
class DirectionNumbers {
 public:
  static constexpr int kDigitWidth = 53;  // W; 53 keeps doubles exact

  struct Record {
    int degree = 0;                    // s: degree of the primitive polynomial
    std::uint64_t poly = 0;            // a: interior coefficient bits, MSB first
    std::vector<std::uint64_t> m_init; // m_1..m_s, odd, m_i < 2^i
  };

  int dimensions() const { return static_cast<int>(columns_.size()); }

  /// Column vectors v_{j,1}..v_{j,W} for 1-based dimension j, as digit words.
  std::span<const std::uint64_t> columns(int dimension) const {
    return columns_.at(dimension - 1);
  }

  /// Source record for dimension j >= 2 (dimension 1 has no record).
  const Record& record(int dimension) const { return records_.at(dimension - 2); }

  /// Appends one dimension from its Joe-Kuo style record, expanding the
  /// initial values with the standard recurrence.  Validates oddness and
  /// the m_i < 2^i range; `line` is used for error reporting only.
  void append_record(Record rec, long line = 0);

  /// Construction with dimension 1 only (the van der Corput identity).
  static DirectionNumbers van_der_corput();

 private:
  std::vector<std::vector<std::uint64_t>> columns_;  // per dimension, W words
  std::vector<Record> records_;                      // dimensions 2..
};

/// Parses the Joe-Kuo direction number text format: a header line, then one
/// line per dimension of the form "d s a m_1 ... m_s".  Dimension 1 is
/// implicit.  Reads records until `dimensions` are available (or the stream
/// ends, when dimensions == 0).
DirectionNumbers load_direction_numbers(std::istream& in, int dimensions = 0);

/// Built-in table for dimensions 1..16, enough for every experiment here.
/// Larger dimension counts require loading a direction number file.
const DirectionNumbers& embedded_direction_numbers();

}  // namespace rqmcmix
