// Copyright 2026 The ALEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Binary matrix files.
//
//   offset  size  field
//   0       4     magic "ALEM"
//   4       2     format version (u16, currently 1)
//   6       1     dtype tag (u8: 0 = f32, 1 = f64)
//   7       8     rows (u64)
//   15      8     cols (u64)
//   23      ...   row-major payload
//
// All integers and payload values are little-endian regardless of host.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alem/matrix.hpp"

namespace alem::io {

inline constexpr char kMagic[4] = {'A', 'L', 'E', 'M'};
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 23;

enum class DType : std::uint8_t { F32 = 0, F64 = 1 };

inline std::size_t dtype_size(DType t) { return t == DType::F32 ? 4 : 8; }

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MagicMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};
class UnknownVersion : public FormatError {
 public:
  using FormatError::FormatError;
};
class UnknownDType : public FormatError {
 public:
  using FormatError::FormatError;
};
class TruncatedPayload : public FormatError {
 public:
  using FormatError::FormatError;
};

namespace detail {

template <typename U>
void put_le(std::vector<unsigned char>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline std::vector<unsigned char> encode_matrix(const Matrix& m, DType dtype = DType::F64) {
  std::vector<unsigned char> out;
  out.reserve(kHeaderBytes + m.data.size() * dtype_size(dtype));
  out.insert(out.end(), kMagic, kMagic + 4);
  detail::put_le<std::uint16_t>(out, kFormatVersion);
  out.push_back(static_cast<unsigned char>(dtype));
  detail::put_le<std::uint64_t>(out, m.rows);
  detail::put_le<std::uint64_t>(out, m.cols);
  for (double v : m.data) {
    if (dtype == DType::F64) {
      detail::put_le(out, std::bit_cast<std::uint64_t>(v));
    } else {
      detail::put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

struct DecodedMatrix {
  Matrix matrix;
  DType dtype = DType::F64;
};

inline DecodedMatrix decode_matrix(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw MagicMismatch("not a matrix file: magic bytes do not read ALEM");
  }
  if (bytes.size() < kHeaderBytes) throw TruncatedPayload("matrix header is truncated");
  const auto version = detail::get_le<std::uint16_t>(bytes.data() + 4);
  if (version != kFormatVersion) {
    throw UnknownVersion("unsupported matrix format version " + std::to_string(version));
  }
  const std::uint8_t tag = bytes[6];
  if (tag > 1) throw UnknownDType("unknown dtype tag " + std::to_string(tag));
  const auto dtype = static_cast<DType>(tag);
  const auto rows = detail::get_le<std::uint64_t>(bytes.data() + 7);
  const auto cols = detail::get_le<std::uint64_t>(bytes.data() + 15);
  const std::size_t width = dtype_size(dtype);
  if (cols != 0 && rows > (bytes.size() - kHeaderBytes) / width / cols) {
    throw TruncatedPayload("matrix payload is truncated");
  }
  const std::size_t count = static_cast<std::size_t>(rows * cols);
  if (bytes.size() - kHeaderBytes != count * width) {
    throw TruncatedPayload("matrix payload has " + std::to_string(bytes.size() - kHeaderBytes) +
                           " bytes, header promises " + std::to_string(count * width));
  }
  DecodedMatrix d;
  d.dtype = dtype;
  d.matrix.rows = rows;
  d.matrix.cols = cols;
  d.matrix.data.resize(count);
  const unsigned char* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += width) {
    d.matrix.data[i] = dtype == DType::F64
                           ? std::bit_cast<double>(detail::get_le<std::uint64_t>(p))
                           : static_cast<double>(std::bit_cast<float>(detail::get_le<std::uint32_t>(p)));
  }
  return d;
}

inline void write_bytes(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing " + path);
}

inline std::vector<unsigned char> read_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline void write_matrix(const std::string& path, const Matrix& m, DType dtype = DType::F64) {
  write_bytes(path, encode_matrix(m, dtype));
}

inline DecodedMatrix read_matrix(const std::string& path) { return decode_matrix(read_bytes(path)); }

}  // namespace alem::io
