// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sdsn {

using Complex = std::complex<double>;
using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using BinaryVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The coarsest filter does not fit in the requested DFT length.
class SupportOverflow : public Error {
 public:
  using Error::Error;
};

// Signal shorter than the filter support.
class LengthError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace sdsn
