// Copyright 2026 The sfcmd Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sfcmd {

enum class CurveKind : std::uint8_t { morton, hilbert };

std::string_view to_string(CurveKind kind);
/// Accepts "morton"/"hilbert" and the single-letter forms "M"/"H".
CurveKind parse_curve_kind(std::string_view text);

struct ValueRange {
  double min = 0.0;
  double max = 1.0;
  bool operator==(const ValueRange&) const = default;
};

/// Discretization of an n-dimensional value box into 2^bits cells per axis.
///
/// The whole code must fit in one 64-bit word, so dims * bits <= 63 and
/// bits <= 21. Each dimension carries its own physical value range.
class GridSpec {
 public:
  static constexpr unsigned kMaxBitsPerDim = 21;
  static constexpr unsigned kMaxTotalBits = 63;

  GridSpec(std::vector<ValueRange> ranges, unsigned bits_per_dim);

  static GridSpec uniform(std::size_t dims, unsigned bits_per_dim, ValueRange range);

  std::size_t dims() const noexcept { return ranges_.size(); }
  unsigned bits() const noexcept { return bits_; }
  std::uint32_t side() const noexcept { return std::uint32_t{1} << bits_; }
  std::uint64_t code_count() const noexcept { return std::uint64_t{1} << (dims() * bits_); }
  const ValueRange& range(std::size_t d) const { return ranges_.at(d); }
  std::span<const ValueRange> ranges() const noexcept { return ranges_; }

  bool operator==(const GridSpec&) const = default;

 private:
  std::vector<ValueRange> ranges_;
  unsigned bits_;
};

using CellCoords = std::vector<std::uint32_t>;

struct SfcCode {
  std::uint64_t value = 0;
  CurveKind kind = CurveKind::morton;
  bool operator==(const SfcCode&) const = default;
};

// Quantization. Out-of-range values clamp to the boundary cell; NaN/inf throw
// ErrorKind::corrupt_sample.
CellCoords quantize(std::span<const double> values, const GridSpec& grid);
void quantize_into(std::span<const double> values, const GridSpec& grid,
                   std::span<std::uint32_t> out);
std::uint32_t quantize_axis(double value, const ValueRange& range, unsigned bits);
/// Center of a cell in physical units.
std::vector<double> cell_center(std::span<const std::uint32_t> cells, const GridSpec& grid);

// Morton (Z-order): bit j of dimension d lands at code bit j*n + d, so
// dimension 0 occupies the least significant bit of every n-bit group.
SfcCode morton_encode(std::span<const std::uint32_t> cells, const GridSpec& grid);
CellCoords morton_decode(SfcCode code, const GridSpec& grid);

// Hilbert: Skilling's transpose form (Gray-code based, any n >= 1). For n = 2,
// bits = 1 the curve visits (0,0), (0,1), (1,1), (1,0).
SfcCode hilbert_encode(std::span<const std::uint32_t> cells, const GridSpec& grid);
CellCoords hilbert_decode(SfcCode code, const GridSpec& grid);

SfcCode encode(CurveKind kind, std::span<const std::uint32_t> cells, const GridSpec& grid);
CellCoords decode(SfcCode code, const GridSpec& grid);

namespace detail {
// Unchecked kernels; callers guarantee n*bits <= 63 and cells < 2^bits.
std::uint64_t morton_interleave(const std::uint32_t* cells, std::size_t n, unsigned bits) noexcept;
void morton_deinterleave(std::uint64_t code, std::size_t n, unsigned bits, std::uint32_t* out) noexcept;
std::uint64_t hilbert_index(const std::uint32_t* cells, std::size_t n, unsigned bits) noexcept;
void hilbert_cells(std::uint64_t code, std::size_t n, unsigned bits, std::uint32_t* out) noexcept;
}  // namespace detail

}  // namespace sfcmd
