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

#include "sfcmd/sfc.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sfcmd/error.hpp"

namespace sfcmd {

namespace {

void check_cells(std::span<const std::uint32_t> cells, const GridSpec& grid) {
  if (cells.size() != grid.dims()) {
    throw Error(ErrorKind::dimension_mismatch,
                "cell tuple has " + std::to_string(cells.size()) + " coordinates, grid has " +
                    std::to_string(grid.dims()) + " dimensions");
  }
  for (const auto c : cells) {
    if (c >= grid.side()) {
      throw Error(ErrorKind::invalid_argument,
                  "cell coordinate " + std::to_string(c) + " outside grid of side " +
                      std::to_string(grid.side()));
    }
  }
}

void check_code(std::uint64_t value, const GridSpec& grid) {
  if (value >= grid.code_count()) {
    throw Error(ErrorKind::invalid_argument, "code " + std::to_string(value) + " exceeds grid");
  }
}

using Scratch = std::array<std::uint32_t, GridSpec::kMaxTotalBits>;

}  // namespace

std::string_view to_string(CurveKind kind) {
  return kind == CurveKind::morton ? "morton" : "hilbert";
}

CurveKind parse_curve_kind(std::string_view text) {
  if (text == "morton" || text == "M" || text == "m" || text == "Morton") return CurveKind::morton;
  if (text == "hilbert" || text == "H" || text == "h" || text == "Hilbert") return CurveKind::hilbert;
  throw Error(ErrorKind::invalid_argument, "unknown curve kind '" + std::string(text) + "'");
}

GridSpec::GridSpec(std::vector<ValueRange> ranges, unsigned bits_per_dim)
    : ranges_(std::move(ranges)), bits_(bits_per_dim) {
  if (ranges_.empty()) throw Error(ErrorKind::invalid_argument, "grid needs at least one dimension");
  if (bits_ < 1 || bits_ > kMaxBitsPerDim) {
    throw Error(ErrorKind::invalid_argument,
                "bits per dimension must be in [1, 21], got " + std::to_string(bits_));
  }
  if (ranges_.size() * bits_ > kMaxTotalBits) {
    throw Error(ErrorKind::invalid_argument,
                std::to_string(ranges_.size()) + " x " + std::to_string(bits_) +
                    " bits does not fit a 63-bit code");
  }
  for (const auto& r : ranges_) {
    if (!std::isfinite(r.min) || !std::isfinite(r.max) || !(r.min < r.max)) {
      throw Error(ErrorKind::invalid_argument, "grid range requires finite min < max");
    }
  }
}

GridSpec GridSpec::uniform(std::size_t dims, unsigned bits_per_dim, ValueRange range) {
  return GridSpec(std::vector<ValueRange>(dims, range), bits_per_dim);
}

std::uint32_t quantize_axis(double value, const ValueRange& range, unsigned bits) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::corrupt_sample, "non-finite sample value");
  }
  const double side = std::ldexp(1.0, static_cast<int>(bits));
  const double scaled = std::floor((value - range.min) / (range.max - range.min) * side);
  if (scaled <= 0.0) return 0;
  if (scaled >= side - 1.0) return static_cast<std::uint32_t>(side - 1.0);
  return static_cast<std::uint32_t>(scaled);
}

void quantize_into(std::span<const double> values, const GridSpec& grid,
                   std::span<std::uint32_t> out) {
  if (values.size() != grid.dims() || out.size() != grid.dims()) {
    throw Error(ErrorKind::dimension_mismatch,
                "tuple of length " + std::to_string(values.size()) + " for a " +
                    std::to_string(grid.dims()) + "-dimensional grid");
  }
  for (std::size_t d = 0; d < values.size(); ++d) {
    out[d] = quantize_axis(values[d], grid.range(d), grid.bits());
  }
}

CellCoords quantize(std::span<const double> values, const GridSpec& grid) {
  CellCoords cells(grid.dims());
  quantize_into(values, grid, cells);
  return cells;
}

std::vector<double> cell_center(std::span<const std::uint32_t> cells, const GridSpec& grid) {
  check_cells(cells, grid);
  std::vector<double> out(cells.size());
  const double side = static_cast<double>(grid.side());
  for (std::size_t d = 0; d < cells.size(); ++d) {
    const auto& r = grid.range(d);
    out[d] = r.min + (static_cast<double>(cells[d]) + 0.5) / side * (r.max - r.min);
  }
  return out;
}

namespace detail {

std::uint64_t morton_interleave(const std::uint32_t* cells, std::size_t n, unsigned bits) noexcept {
  std::uint64_t code = 0;
  for (unsigned j = 0; j < bits; ++j) {
    for (std::size_t d = 0; d < n; ++d) {
      code |= static_cast<std::uint64_t>((cells[d] >> j) & 1u) << (j * n + d);
    }
  }
  return code;
}

void morton_deinterleave(std::uint64_t code, std::size_t n, unsigned bits, std::uint32_t* out) noexcept {
  for (std::size_t d = 0; d < n; ++d) out[d] = 0;
  for (unsigned j = 0; j < bits; ++j) {
    for (std::size_t d = 0; d < n; ++d) {
      out[d] |= static_cast<std::uint32_t>((code >> (j * n + d)) & 1u) << j;
    }
  }
}

// Skilling, "Programming the Hilbert curve" (AIP Conf. Proc. 707, 2004):
// axes -> transposed index in place, then read the transpose MSB-first with
// dimension 0 leading each group.
std::uint64_t hilbert_index(const std::uint32_t* cells, std::size_t n, unsigned bits) noexcept {
  if (n == 1) return cells[0];
  Scratch x{};
  for (std::size_t i = 0; i < n; ++i) x[i] = cells[i];

  const std::uint32_t top = std::uint32_t{1} << (bits - 1);
  for (std::uint32_t q = top; q > 1; q >>= 1) {
    const std::uint32_t p = q - 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] & q) {
        x[0] ^= p;
      } else {
        const std::uint32_t t = (x[0] ^ x[i]) & p;
        x[0] ^= t;
        x[i] ^= t;
      }
    }
  }
  for (std::size_t i = 1; i < n; ++i) x[i] ^= x[i - 1];
  std::uint32_t t = 0;
  for (std::uint32_t q = top; q > 1; q >>= 1) {
    if (x[n - 1] & q) t ^= q - 1;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] ^= t;

  std::uint64_t code = 0;
  for (int j = static_cast<int>(bits) - 1; j >= 0; --j) {
    for (std::size_t i = 0; i < n; ++i) {
      code = (code << 1) | ((x[i] >> j) & 1u);
    }
  }
  return code;
}

void hilbert_cells(std::uint64_t code, std::size_t n, unsigned bits, std::uint32_t* out) noexcept {
  if (n == 1) {
    out[0] = static_cast<std::uint32_t>(code);
    return;
  }
  Scratch x{};
  unsigned pos = static_cast<unsigned>(n) * bits;
  for (int j = static_cast<int>(bits) - 1; j >= 0; --j) {
    for (std::size_t i = 0; i < n; ++i) {
      --pos;
      x[i] |= static_cast<std::uint32_t>((code >> pos) & 1u) << j;
    }
  }

  const std::uint32_t limit = std::uint32_t{2} << (bits - 1);
  std::uint32_t t = x[n - 1] >> 1;
  for (std::size_t i = n - 1; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;
  for (std::uint32_t q = 2; q != limit; q <<= 1) {
    const std::uint32_t p = q - 1;
    for (std::size_t k = n; k-- > 0;) {
      if (x[k] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[k]) & p;
        x[0] ^= t;
        x[k] ^= t;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
}

}  // namespace detail

SfcCode morton_encode(std::span<const std::uint32_t> cells, const GridSpec& grid) {
  check_cells(cells, grid);
  return {detail::morton_interleave(cells.data(), cells.size(), grid.bits()), CurveKind::morton};
}

CellCoords morton_decode(SfcCode code, const GridSpec& grid) {
  if (code.kind != CurveKind::morton) {
    throw Error(ErrorKind::model_mismatch, "morton_decode called on a Hilbert code");
  }
  check_code(code.value, grid);
  CellCoords out(grid.dims());
  detail::morton_deinterleave(code.value, grid.dims(), grid.bits(), out.data());
  return out;
}

SfcCode hilbert_encode(std::span<const std::uint32_t> cells, const GridSpec& grid) {
  check_cells(cells, grid);
  return {detail::hilbert_index(cells.data(), cells.size(), grid.bits()), CurveKind::hilbert};
}

CellCoords hilbert_decode(SfcCode code, const GridSpec& grid) {
  if (code.kind != CurveKind::hilbert) {
    throw Error(ErrorKind::model_mismatch, "hilbert_decode called on a Morton code");
  }
  check_code(code.value, grid);
  CellCoords out(grid.dims());
  detail::hilbert_cells(code.value, grid.dims(), grid.bits(), out.data());
  return out;
}

SfcCode encode(CurveKind kind, std::span<const std::uint32_t> cells, const GridSpec& grid) {
  return kind == CurveKind::morton ? morton_encode(cells, grid) : hilbert_encode(cells, grid);
}

CellCoords decode(SfcCode code, const GridSpec& grid) {
  return code.kind == CurveKind::morton ? morton_decode(code, grid) : hilbert_decode(code, grid);
}

}  // namespace sfcmd
