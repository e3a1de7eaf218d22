#include "mrl/io.hpp"

#include "mrl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace mrl {

namespace {

std::string_view
trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool
parse_real(std::string_view s, double& out)
{
  s = trim(s);
  if (s.empty())
    return false;
  if (s.front() == '+')
    s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

double
parse_bound(std::string_view s)
{
  s = trim(s);
  if (s == "inf" || s == "+inf" || s == "Inf" || s == "+Inf")
    return std::numeric_limits<double>::infinity();
  if (s == "-inf" || s == "-Inf")
    return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  if (!parse_real(s, v) || std::isnan(v))
    fail(ErrorCode::invalid_argument, "cannot parse support bound '" + std::string(s) + "'");
  return v;
}

} // namespace

std::vector<std::string>
split_csv_line(std::string_view line)
{
  if (!line.empty() && line.back() == '\r')
    line.remove_suffix(1);
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

CsvColumn
read_csv_column(std::istream& in, std::string_view column)
{
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::data, "CSV input is empty (no header row)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
    line.erase(0, 3);

  CsvColumn out;
  for (auto& name : split_csv_line(line))
    out.columns.emplace_back(trim(name));
  std::size_t idx = out.columns.size();
  for (std::size_t i = 0; i < out.columns.size(); ++i)
    if (out.columns[i] == column) {
      idx = i;
      break;
    }
  if (idx == out.columns.size()) {
    std::string avail;
    for (const auto& c : out.columns)
      avail += (avail.empty() ? "" : ", ") + c;
    fail(ErrorCode::data,
         "column '" + std::string(column) + "' not found; available columns: " + avail);
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != out.columns.size())
      fail(ErrorCode::data, "CSV line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, header has " +
                              std::to_string(out.columns.size()));
    double v = 0.0;
    const auto cell = trim(fields[idx]);
    if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") {
      ++out.dropped;
      continue;
    }
    if (!parse_real(cell, v))
      fail(ErrorCode::data, "CSV line " + std::to_string(line_no) + ": cannot parse '" +
                              std::string(cell) + "' as a number");
    if (!std::isfinite(v)) {
      ++out.dropped;
      continue;
    }
    out.values.push_back(v);
  }
  if (out.values.empty())
    fail(ErrorCode::data, "column '" + std::string(column) + "' has no usable values");
  return out;
}

CsvColumn
read_csv_column(const std::string& path, std::string_view column)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::io, "cannot open '" + path + "'");
  return read_csv_column(in, column);
}

SupportInterval
infer_support(const std::vector<double>& values)
{
  if (values.empty())
    fail(ErrorCode::data, "cannot infer a support from no data");
  double lo = values.front();
  double hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo < 0.0)
    fail(ErrorCode::data, "data contain negative values; pass an explicit support");
  if (hi <= 1.0)
    return SupportInterval(0.0, 1.0);
  return SupportInterval(0.0, std::numeric_limits<double>::infinity());
}

SupportInterval
parse_support(std::string_view text)
{
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    fail(ErrorCode::invalid_argument, "support must be given as a,b");
  const double a = parse_bound(text.substr(0, comma));
  const double b = parse_bound(text.substr(comma + 1));
  if (!(a < b))
    fail(ErrorCode::invalid_argument, "support needs lower < upper");
  if (std::isinf(a) && std::isinf(b))
    fail(ErrorCode::invalid_argument, "support needs at least one finite end");
  return SupportInterval(a, b);
}

std::string
format_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void
write_curve_csv(std::ostream& os, const CurveEstimate& curve)
{
  os << "t,survival,cum_survival,mrl,flag\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    os << format_double(curve.grid[i]) << ',' << format_double(curve.survival[i]) << ','
       << format_double(curve.cum_survival[i]) << ',' << format_double(curve.mrl[i]) << ','
       << flag_name(curve.flags[i]) << '\n';
}

CurveEstimate
read_curve_csv(std::istream& in)
{
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::data, "curve CSV is empty");
  const auto header = split_csv_line(line);
  const std::vector<std::string> expected{"t", "survival", "cum_survival", "mrl", "flag"};
  if (header != expected)
    fail(ErrorCode::data, "curve CSV header must be t,survival,cum_survival,mrl,flag");
  CurveEstimate c;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5)
      fail(ErrorCode::data, "curve CSV line " + std::to_string(line_no) + " needs 5 fields");
    double v[4];
    for (int k = 0; k < 4; ++k)
      if (!parse_real(f[k], v[k]))
        fail(ErrorCode::data, "curve CSV line " + std::to_string(line_no) +
                                ": cannot parse '" + f[k] + "'");
    c.grid.push_back(v[0]);
    c.survival.push_back(v[1]);
    c.cum_survival.push_back(v[2]);
    c.mrl.push_back(v[3]);
    c.flags.push_back(parse_flag(trim(f[4])));
  }
  return c;
}

void
write_combined_csv(std::ostream& os,
                   const std::vector<CurveEstimate>& curves,
                   const std::vector<std::string>& labels)
{
  if (curves.size() != labels.size())
    fail(ErrorCode::invalid_argument, "one label per curve required");
  if (curves.empty())
    fail(ErrorCode::invalid_argument, "no curves to write");
  for (const auto& c : curves)
    if (c.grid != curves.front().grid)
      fail(ErrorCode::invalid_argument, "combined output needs a shared grid");
  os << 't';
  for (const auto& l : labels)
    os << ',' << l << "_survival," << l << "_cum_survival," << l << "_mrl," << l << "_flag";
  os << '\n';
  const auto& grid = curves.front().grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid[i]);
    for (const auto& c : curves)
      os << ',' << format_double(c.survival[i]) << ',' << format_double(c.cum_survival[i]) << ','
         << format_double(c.mrl[i]) << ',' << flag_name(c.flags[i]);
    os << '\n';
  }
}

} // namespace mrl
