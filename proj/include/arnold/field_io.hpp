#pragma once

// Binary field files and mask readers.
//
// Field file layout (little-endian): "SFLD", u32 nx, u32 ny, f64 h, f64 x0,
// f64 y0, u8 code per node, then f64 values for non-exterior nodes in row-major
// order. Masks come either as binary PGM (P5, nonzero = fluid) or as run-length
// text: a header line "nx ny h x0 y0" followed by rows of runs such as "5.3#5."
// where '#' is fluid and '.' is solid (a missing count means 1).

#include <filesystem>
#include <string>

#include "arnold/grid.hpp"

namespace arnold {

struct RawField {
  std::size_t nx = 0, ny = 0;
  double h = 0.0, x0 = 0.0, y0 = 0.0;
  std::vector<std::uint8_t> codes;
  std::vector<double> values;  // full grid, exterior zero
};

void write_field(const std::filesystem::path& path, const ScalarField& f);
RawField read_raw_field(const std::filesystem::path& path);
// Reads a field and attaches it to `domain`, which must have identical layout.
ScalarField read_field(const std::filesystem::path& path, const DomainPtr& domain);
// Reads a field together with a unit-weight domain rebuilt from its codes.
ScalarField read_field_standalone(const std::filesystem::path& path);

struct MaskSpec {
  std::size_t nx = 0, ny = 0;
  double h = 1.0, x0 = 0.0, y0 = 0.0;
  std::vector<bool> fluid;
};

MaskSpec read_pgm_mask(const std::filesystem::path& path, double h, double x0, double y0);
MaskSpec read_rle_mask(const std::filesystem::path& path);
MaskSpec parse_rle_mask(const std::string& text);
// Dispatches on the file's leading bytes.
DomainPtr load_mask_domain(const std::filesystem::path& path, double h = 1.0);

}  // namespace arnold
