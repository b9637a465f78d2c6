#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parcpt/core.hpp"

namespace parcpt::cli {

/// Numeric CSV, one observation per row, one column per dimension. Blank
/// lines are skipped. Throws InvalidInput naming the row and column of the
/// first bad cell, or when the file cannot be read.
TimeSeries read_csv(const std::filesystem::path& path, bool header);

/// Integers separated by commas, whitespace or JSON brackets, e.g. the
/// `changepoints` array printed by `detect`.
CandidateSet read_candidates(const std::filesystem::path& path, Index n);

/// Flat `key = value` file; `#` starts a comment. Keys are normalised so
/// `noise-sd` and `noise_sd` are the same key.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

std::string normalise_key(std::string_view key);

std::vector<std::string> split_list(std::string_view text);

double parse_double(std::string_view text, std::string_view what);
Index parse_index(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

/// Shortest round-trip decimal form; empty for NaN.
std::string format_double(double v);

/// Writes `contents` to `path`, creating parent directories. An unwritable
/// output path is a configuration error.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace parcpt::cli
