// SPDX-License-Identifier: Apache-2.0
#include "sdsn/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>

namespace sdsn {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'C', 'M', '1'};

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> bytes;
  for (size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& is, const char* what) {
  std::array<unsigned char, sizeof(U)> bytes;
  const auto offset = is.tellg();
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw IoError(std::string("FCM1: truncated ") + what + " at byte offset " + std::to_string(offset));
  }
  U v = 0;
  for (size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
  return v;
}

void put_double(std::ostream& os, double d) { put_le(os, std::bit_cast<std::uint64_t>(d)); }

double get_double(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is, "payload")); }

void put_header(std::ostream& os, Eigen::Index rows, Eigen::Index cols, MatrixDtype dtype) {
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (rows > kMax || cols > kMax) throw IoError("FCM1: matrix dimensions exceed 32 bits");
  os.write(kMagic.data(), kMagic.size());
  put_le(os, static_cast<std::uint32_t>(rows));
  put_le(os, static_cast<std::uint32_t>(cols));
  put_le(os, static_cast<std::uint8_t>(dtype));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace

void write_matrix(std::ostream& os, const RMatrix& m) {
  put_header(os, m.rows(), m.cols(), MatrixDtype::Real);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_double(os, m(r, c));
  }
}

void write_matrix(std::ostream& os, const CMatrix& m) {
  put_header(os, m.rows(), m.cols(), MatrixDtype::Complex);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      put_double(os, m(r, c).real());
      put_double(os, m(r, c).imag());
    }
  }
}

void write_matrix(const std::string& path, const RMatrix& m) {
  auto os = open_out(path);
  write_matrix(os, m);
  finish(os, path);
}

void write_matrix(const std::string& path, const CMatrix& m) {
  auto os = open_out(path);
  write_matrix(os, m);
  finish(os, path);
}

StoredMatrix read_matrix(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("FCM1: bad magic at byte offset 0");
  }
  const auto rows = get_le<std::uint32_t>(is, "row count");
  const auto cols = get_le<std::uint32_t>(is, "column count");
  const auto dtype = get_le<std::uint8_t>(is, "dtype tag");
  if (dtype == static_cast<std::uint8_t>(MatrixDtype::Real)) {
    RMatrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = get_double(is);
    }
    return m;
  }
  if (dtype == static_cast<std::uint8_t>(MatrixDtype::Complex)) {
    CMatrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
      for (std::uint32_t c = 0; c < cols; ++c) {
        const double re = get_double(is);
        m(r, c) = Complex(re, get_double(is));
      }
    }
    return m;
  }
  throw IoError("FCM1: unknown dtype tag " + std::to_string(dtype) + " at byte offset 12");
}

StoredMatrix read_matrix(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_matrix(is);
}

void write_csv(std::ostream& os, const RMatrix& m) {
  std::array<char, 32> buf;
  std::string line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) line.push_back(',');
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), m(r, c));
      line.append(buf.data(), res.ptr);
    }
    line.push_back('\n');
    os.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
}

void write_csv(const std::string& path, const RMatrix& m) {
  auto os = open_out(path);
  write_csv(os, m);
  finish(os, path);
}

}  // namespace sdsn
