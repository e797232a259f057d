#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "tvopt/error.hpp"
#include "tvopt/objectives.hpp"

namespace tvopt {

namespace {

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_int(std::string_view s, long& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Dataset parse_sparse_labeled(std::istream& in) {
  Dataset data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;

    double label = 0.0;
    if (!parse_double(tok, label)) throw ParseError("label '" + tok + "' is not numeric", line_no);
    SparseSample sample;
    if (label == 1.0) {
      sample.label = 1;
    } else if (label == -1.0 || label == 0.0) {
      sample.label = -1;
    } else {
      throw ParseError("label '" + tok + "' is not one of -1, 0, +1", line_no);
    }

    long last_index = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) throw ParseError("malformed pair '" + tok + "'", line_no);
      long index = 0;
      double value = 0.0;
      if (!parse_int(std::string_view(tok).substr(0, colon), index)) {
        throw ParseError("malformed index in '" + tok + "'", line_no);
      }
      if (index < 1) throw ParseError("feature index must be >= 1 in '" + tok + "'", line_no);
      if (index <= last_index) throw ParseError("feature indices must be ascending", line_no);
      if (!parse_double(std::string_view(tok).substr(colon + 1), value)) {
        throw ParseError("non-numeric value in '" + tok + "'", line_no);
      }
      last_index = index;
      sample.entries.emplace_back(static_cast<int>(index), value);
      data.dimension = std::max(data.dimension, static_cast<int>(index));
    }
    data.samples.push_back(std::move(sample));
  }
  if (data.samples.empty()) throw ParseError("dataset is empty", 0);
  return data;
}

Dataset load_sparse_labeled(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset " + path.string());
  try {
    return parse_sparse_labeled(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

}  // namespace tvopt
