#pragma once

#include <string>
#include <vector>

#include "streamsketch/point.hpp"

namespace streamsketch {

/// Reads repeated [int32 d][d float32] records (all little endian, all with
/// the same d). Throws FormatError naming the byte offset on truncation,
/// inconsistent dimensions, or trailing bytes.
std::vector<Point> read_fvecs(const std::string& path);

void write_fvecs(const std::string& path, const std::vector<Point>& points);

/// Reads one comma-separated vector of decimal floats per line, uniform
/// arity, no header. Throws FormatError naming the 1-based line number on
/// ragged or non-numeric rows.
std::vector<Point> read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<Point>& points);

}  // namespace streamsketch
