#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mvset/contour.hpp"
#include "mvset/grid.hpp"

namespace mvset {

enum class FieldFormat { csv, raw };

FieldFormat parse_field_format(const std::string& text);
std::string to_string(FieldFormat format);

/// csv: a header `# dim nx [ny [nz]] ox [oy [oz]] h`, then one value per line
/// in node order with 17 significant digits.
/// raw: the 16-byte magic "MVSETFLD0001____", then little-endian u32 dim,
/// u32 counts, f64 origin, f64 h and f64 values.
void write_field(const ScalarField& field, const std::filesystem::path& path, FieldFormat format);

/// Reads either format; the format is recognised from the first bytes.
ScalarField read_field(const std::filesystem::path& path);

/// A mask in the csv field layout with 0/1 values.
void write_mask(const GridSpec& grid, const Mask& mask, const std::filesystem::path& path);
/// Reads a mask written by write_mask (any nonzero value counts as set).
Mask read_mask(const std::filesystem::path& path, GridSpec* grid = nullptr);

/// Header `# x y`, then one `x y` line per vertex; polylines are separated by
/// one blank line.
void write_contour(const std::vector<Polyline>& contour, const std::filesystem::path& path);
std::vector<Polyline> read_contour(const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace mvset
