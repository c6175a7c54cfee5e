#include "rqmcmix/directions.hpp"

#include <cstddef>
#include <sstream>
#include <string>

#include "rqmcmix/errors.hpp"

namespace rqmcmix {

namespace {

constexpr int kW = DirectionNumbers::kDigitWidth;

std::vector<std::uint64_t> identity_columns() {
  std::vector<std::uint64_t> cols(kW);
  for (int k = 1; k <= kW; ++k) cols[k - 1] = std::uint64_t{1} << (kW - k);
  return cols;
}

}  // namespace

void DirectionNumbers::append_record(Record rec, long line) {
  const int s = rec.degree;
  if (s < 1 || s > 63) {
    throw ParseError("polynomial degree out of range", line);
  }
  if (s > 1 && rec.poly >= (std::uint64_t{1} << (s - 1))) {
    throw ParseError("polynomial coefficient number too large for degree", line);
  }
  if (s == 1 && rec.poly != 0) {
    throw ParseError("degree-1 polynomial admits no interior coefficients", line);
  }
  if (static_cast<int>(rec.m_init.size()) != s) {
    throw ParseError("expected one initial value per polynomial degree", line);
  }
  for (int i = 1; i <= s; ++i) {
    const std::uint64_t m = rec.m_init[static_cast<std::size_t>(i) - 1];
    if (m % 2 == 0) throw ParseError("initial value m_" + std::to_string(i) + " must be odd", line);
    if (i < 64 && m >= (std::uint64_t{1} << i)) {
      throw ParseError("initial value m_" + std::to_string(i) + " must be below 2^" +
                           std::to_string(i),
                       line);
    }
  }

  std::vector<std::uint64_t> cols(kW);
  for (int k = 1; k <= kW; ++k) {
    if (k <= s) {
      cols[k - 1] = rec.m_init[static_cast<std::size_t>(k) - 1] << (kW - k);
    } else {
      // v_k = a_1 v_{k-1} ^ ... ^ a_{s-1} v_{k-s+1} ^ v_{k-s} ^ (v_{k-s} >> s),
      // with a_1 the most significant bit of the coefficient number.
      std::uint64_t v = cols[k - s - 1] ^ (cols[k - s - 1] >> s);
      for (int i = 1; i <= s - 1; ++i) {
        if ((rec.poly >> (s - 1 - i)) & 1u) v ^= cols[k - i - 1];
      }
      cols[k - 1] = v;
    }
  }

  if (columns_.empty()) columns_.push_back(identity_columns());
  columns_.push_back(std::move(cols));
  records_.push_back(std::move(rec));
}

DirectionNumbers DirectionNumbers::van_der_corput() {
  DirectionNumbers d;
  d.columns_.push_back(identity_columns());
  return d;
}

DirectionNumbers load_direction_numbers(std::istream& in, int dimensions) {
  if (dimensions < 0) throw std::invalid_argument("dimensions must be nonnegative");
  DirectionNumbers dirs = DirectionNumbers::van_der_corput();
  std::string text;
  long line_no = 0;

  // The first line is a header and carries no data.
  if (!std::getline(in, text)) throw ParseError("empty direction number stream", 1);
  ++line_no;

  while (dirs.dimensions() != dimensions && std::getline(in, text)) {
    ++line_no;
    std::istringstream fields(text);
    long d = 0;
    if (!(fields >> d)) {
      // Blank or whitespace-only lines are permitted.
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("expected a dimension index", line_no);
    }
    if (d != dirs.dimensions() + 1) {
      throw ParseError("expected record for dimension " + std::to_string(dirs.dimensions() + 1),
                       line_no);
    }
    DirectionNumbers::Record rec;
    if (!(fields >> rec.degree >> rec.poly)) {
      throw ParseError("expected polynomial degree and coefficient number", line_no);
    }
    if (rec.degree < 1 || rec.degree > 63) {
      throw ParseError("polynomial degree out of range", line_no);
    }
    rec.m_init.resize(static_cast<std::size_t>(rec.degree));
    for (std::size_t i = 0; i < rec.m_init.size(); ++i) {
      if (!(fields >> rec.m_init[i])) throw ParseError("too few initial values", line_no);
    }
    std::uint64_t extra = 0;
    if (fields >> extra) throw ParseError("trailing fields after initial values", line_no);
    dirs.append_record(std::move(rec), line_no);
  }

  if (dimensions > 0 && dirs.dimensions() < dimensions) {
    throw CapabilityError("direction number stream provides " +
                          std::to_string(dirs.dimensions()) + " dimensions, " +
                          std::to_string(dimensions) + " requested");
  }
  return dirs;
}

const DirectionNumbers& embedded_direction_numbers() {
  static const DirectionNumbers table = [] {
    static const char* kRecords =
        "d s a m_i\n"
        "2 1 0 1\n"
        "3 2 1 1 3\n"
        "4 3 1 1 3 1\n"
        "5 3 2 1 1 1\n"
        "6 4 1 1 1 3 3\n"
        "7 4 4 1 3 5 13\n"
        "8 5 2 1 1 5 5 17\n"
        "9 5 4 1 1 5 5 5\n"
        "10 5 7 1 1 7 11 19\n"
        "11 5 11 1 1 5 1 1\n"
        "12 5 13 1 1 1 3 11\n"
        "13 5 14 1 3 5 5 31\n"
        "14 6 1 1 3 3 9 7 49\n"
        "15 6 13 1 1 1 15 21 21\n"
        "16 6 16 1 3 1 13 27 49\n";
    std::istringstream in(kRecords);
    return load_direction_numbers(in, 16);
  }();
  return table;
}

}  // namespace rqmcmix
