#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace parcpt::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read '" + path.string() + "'");
  return in;
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw InvalidInput(std::string(what) + ": '" + std::string(t) + "' is not a number");
  }
  return v;
}

Index parse_index(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidConfig(std::string(what) + ": '" + std::string(t) + "' is not an integer");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  const std::string_view t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw InvalidConfig(std::string(what) + ": '" + std::string(t) +
                        "' is not an unsigned 64-bit integer");
  }
  return v;
}

TimeSeries read_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in = open_or_throw(path);
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t row = 0;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    std::size_t cols = 0;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      ++cols;
      values.push_back(parse_double(
          cell, "row " + std::to_string(row) + ", column " + std::to_string(cols)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (dim == 0) dim = cols;
    if (cols != dim) {
      throw InvalidInput("row " + std::to_string(row) + " has " + std::to_string(cols) +
                         " columns, expected " + std::to_string(dim));
    }
  }
  if (dim == 0) throw InvalidInput("'" + path.string() + "' contains no observations");
  return TimeSeries(std::move(values), dim);
}

CandidateSet read_candidates(const std::filesystem::path& path, Index n) {
  std::ifstream in = open_or_throw(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  for (char& c : text) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream tokens(text);
  std::vector<Index> out;
  std::string token;
  while (tokens >> token) {
    try {
      out.push_back(parse_index(token, "candidate"));
    } catch (const InvalidConfig& e) {
      throw InvalidInput(e.what());
    }
  }
  return CandidateSet(std::move(out), n);
}

std::string normalise_key(std::string_view key) {
  std::string out(trim(key));
  for (char& c : out) {
    if (c == '-') c = '_';
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos || trim(view.substr(0, eq)).empty()) {
      throw InvalidConfig(path.string() + ":" + std::to_string(row) + ": expected key = value");
    }
    out[normalise_key(view.substr(0, eq))] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidConfig("cannot write '" + path.string() + "'");
  out << contents;
  if (!out) throw InvalidConfig("failed writing '" + path.string() + "'");
}

}  // namespace parcpt::cli
