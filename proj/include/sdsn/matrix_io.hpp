// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "sdsn/types.hpp"

namespace sdsn {

// FCM1 layout: "FCM1", u32 rows, u32 cols, u8 dtype (0 real f64,
// 1 complex f64 as re/im pairs), then the row-major payload. All
// integers and doubles little-endian.
enum class MatrixDtype : std::uint8_t { Real = 0, Complex = 1 };

using StoredMatrix = std::variant<RMatrix, CMatrix>;

void write_matrix(std::ostream& os, const RMatrix& m);
void write_matrix(std::ostream& os, const CMatrix& m);
void write_matrix(const std::string& path, const RMatrix& m);
void write_matrix(const std::string& path, const CMatrix& m);

StoredMatrix read_matrix(std::istream& is);
StoredMatrix read_matrix(const std::string& path);

// Shortest round-trip decimal representation, one matrix row per line.
void write_csv(std::ostream& os, const RMatrix& m);
void write_csv(const std::string& path, const RMatrix& m);

}  // namespace sdsn
