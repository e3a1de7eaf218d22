#pragma once

#include "mrl/estimators.hpp"
#include "mrl/transform.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrl {

struct CsvColumn
{
  std::vector<double> values;
  std::size_t dropped = 0; // blank or non-finite cells
  std::vector<std::string> columns;
};

//! Splits one CSV record; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

CsvColumn read_csv_column(std::istream& in, std::string_view column);
CsvColumn read_csv_column(const std::string& path, std::string_view column);

//! Nonnegative data → (0, ∞); data inside [0, 1] → (0, 1). Anything else
//! needs an explicit support.
SupportInterval infer_support(const std::vector<double>& values);

//! Parses "a,b" where either end may be "inf" / "-inf".
SupportInterval parse_support(std::string_view text);

//! Shortest text that parses back to the same double.
std::string format_double(double v);

//! Header t,survival,cum_survival,mrl,flag.
void write_curve_csv(std::ostream& os, const CurveEstimate& curve);
CurveEstimate read_curve_csv(std::istream& in);

//! Wide layout: t, then <label>_survival, <label>_cum_survival, <label>_mrl,
//! <label>_flag for every curve. All curves must share one grid.
void write_combined_csv(std::ostream& os,
                        const std::vector<CurveEstimate>& curves,
                        const std::vector<std::string>& labels);

} // namespace mrl
