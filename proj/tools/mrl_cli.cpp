#include "mrl/mrl.h"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

enum Exit
{
  exit_ok = 0,
  exit_other = 1,
  exit_flags = 2,
  exit_data = 3,
  exit_numeric = 4,
  exit_config = 5
};

struct CliFailure
{
  int code;
  std::string message;
};

int
exit_for(mrl_status s)
{
  switch (s) {
    case MRL_OK:
      return exit_ok;
    case MRL_ERR_INVALID_ARGUMENT:
    case MRL_ERR_DOMAIN:
      return exit_flags;
    case MRL_ERR_DATA:
    case MRL_ERR_IO:
      return exit_data;
    case MRL_ERR_NUMERIC:
    case MRL_ERR_SELECTION:
      return exit_numeric;
    case MRL_ERR_CONFIG:
      return exit_config;
    case MRL_ERR_INTERNAL:
      break;
  }
  return exit_other;
}

void
check(mrl_status s)
{
  if (s != MRL_OK)
    throw CliFailure{exit_for(s), std::string(mrl_status_name(s)) + ": " + mrl_last_error()};
}

[[noreturn]] void
flag_error(const std::string& what)
{
  throw CliFailure{exit_flags, "invalid flags: " + what};
}

struct SampleDeleter
{
  void operator()(mrl_sample* p) const { mrl_sample_destroy(p); }
};
struct CurveDeleter
{
  void operator()(mrl_curve* p) const { mrl_curve_destroy(p); }
};
struct StudyDeleter
{
  void operator()(mrl_study* p) const { mrl_study_destroy(p); }
};
struct ResultDeleter
{
  void operator()(mrl_study_result* p) const { mrl_study_result_destroy(p); }
};
using SamplePtr = std::unique_ptr<mrl_sample, SampleDeleter>;
using CurvePtr = std::unique_ptr<mrl_curve, CurveDeleter>;

std::string
fmt(double v)
{
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double
parse_bound(const std::string& s)
{
  if (s == "inf" || s == "+inf")
    return std::numeric_limits<double>::infinity();
  if (s == "-inf")
    return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    flag_error("cannot parse support bound '" + s + "'");
  }
  if (used != s.size() || std::isnan(v))
    flag_error("cannot parse support bound '" + s + "'");
  return v;
}

std::optional<std::pair<double, double>>
parse_support(const std::string& text)
{
  if (text.empty())
    return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    flag_error("--support expects a,b");
  const double a = parse_bound(text.substr(0, comma));
  const double b = parse_bound(text.substr(comma + 1));
  if (!(a < b))
    flag_error("--support needs a < b");
  return std::make_pair(a, b);
}

//! Returns a value <= 0 for "cv".
double
parse_bandwidth(const std::string& text, bool allow_cv)
{
  if (text == "cv") {
    if (!allow_cv)
      flag_error("--bandwidth must be a positive number here");
    return 0.0;
  }
  std::size_t used = 0;
  double h = 0.0;
  try {
    h = std::stod(text, &used);
  } catch (const std::exception&) {
    flag_error("--bandwidth expects cv or a positive number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(h) || !(h > 0.0))
    flag_error("--bandwidth expects cv or a positive number, got '" + text + "'");
  return h;
}

mrl_kernel
parse_kernel(const std::string& name)
{
  mrl_kernel k;
  if (mrl_parse_kernel(name.c_str(), &k) != MRL_OK)
    flag_error(mrl_last_error());
  return k;
}

mrl_transform
parse_transform(const std::string& name)
{
  mrl_transform t;
  if (mrl_parse_transform(name.c_str(), &t) != MRL_OK)
    flag_error(mrl_last_error());
  return t;
}

std::vector<mrl_method>
parse_methods(const std::vector<std::string>& names)
{
  std::vector<mrl_method> out;
  for (const auto& n : names) {
    if (n == "all") {
      out.insert(out.end(), {MRL_METHOD_EMPIRICAL, MRL_METHOD_NAIVE, MRL_METHOD_TRANSFORMED1,
                             MRL_METHOD_TRANSFORMED2});
      continue;
    }
    mrl_method m;
    if (mrl_parse_method(n.c_str(), &m) != MRL_OK)
      flag_error(mrl_last_error());
    out.push_back(m);
  }
  if (out.empty())
    flag_error("no estimator given");
  return out;
}

std::vector<double>
make_grid(double lo, double hi, std::size_t points)
{
  if (points < 2)
    flag_error("--grid-points must be at least 2");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    flag_error("grid needs finite --grid-min < --grid-max");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

struct DataFlags
{
  std::string input;
  std::string column = "time";
  std::string support;
  std::string kernel = "epanechnikov";
  std::string transform = "auto";
};

void
add_data_flags(CLI::App* cmd, DataFlags& f)
{
  cmd->add_option("--input", f.input, "CSV file with a header row")->required();
  cmd->add_option("--column", f.column, "Column holding the observations")->capture_default_str();
  cmd->add_option("--support", f.support, "Support a,b (either end may be inf); inferred if omitted");
  cmd->add_option("--kernel", f.kernel, "epanechnikov or gaussian")->capture_default_str();
  cmd->add_option("--transform", f.transform,
                  "log, probit or identity; default log on (a,inf), probit on (a,b)");
}

SamplePtr
load_sample(const DataFlags& f)
{
  const auto sup = parse_support(f.support);
  double bounds[2] = {0.0, 0.0};
  if (sup) {
    bounds[0] = sup->first;
    bounds[1] = sup->second;
  }
  mrl_sample* raw = nullptr;
  std::size_t dropped = 0;
  check(mrl_sample_read_csv(f.input.c_str(), f.column.c_str(), sup ? bounds : nullptr, &raw,
                            &dropped));
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped << " blank or non-finite value"
              << (dropped == 1 ? "" : "s") << " in column '" << f.column << "'\n";
  return SamplePtr(raw);
}

int
run_estimate(const DataFlags& data,
             const std::vector<std::string>& estimators,
             const std::string& bandwidth,
             std::optional<double> grid_min,
             std::optional<double> grid_max,
             std::size_t grid_points,
             const std::string& output,
             bool combined)
{
  const auto methods = parse_methods(estimators);
  const mrl_kernel kernel = parse_kernel(data.kernel);
  const mrl_transform transform = parse_transform(data.transform);
  const double h = parse_bandwidth(bandwidth, true);
  if (methods.size() > 1 && !combined && output.empty())
    flag_error("several estimators need --output or --combined");

  SamplePtr sample = load_sample(data);
  double lower = 0.0, upper = 0.0;
  mrl_sample_support(sample.get(), &lower, &upper);
  const std::size_t n = mrl_sample_size(sample.get());
  const double xmin = mrl_sample_values(sample.get())[0];
  const double xmax = mrl_sample_values(sample.get())[n - 1];

  double lo = 0.0, hi = 0.0;
  if (std::isfinite(lower) && std::isfinite(upper)) {
    lo = lower + 1e-3 * (upper - lower);
    hi = upper - 1e-3 * (upper - lower);
  } else if (std::isfinite(lower)) {
    lo = lower + 1e-3 * (xmax - lower);
    hi = xmax + 0.5 * (xmax - lower);
  } else {
    lo = xmin - 0.5 * (upper - xmin);
    hi = upper - 1e-3 * (upper - xmin);
  }
  if (grid_min)
    lo = *grid_min;
  if (grid_max)
    hi = *grid_max;
  const auto grid = make_grid(lo, hi, grid_points);

  std::vector<CurvePtr> curves;
  std::vector<std::string> labels;
  for (mrl_method m : methods) {
    mrl_estimator_spec spec{m, kernel, transform, h};
    mrl_curve* raw = nullptr;
    check(mrl_evaluate_curve(sample.get(), &spec, grid.data(), grid.size(), &raw));
    curves.emplace_back(raw);
    labels.emplace_back(mrl_method_name(m));
    if (m != MRL_METHOD_EMPIRICAL)
      std::cerr << labels.back() << ": bandwidth " << fmt(mrl_curve_bandwidth(raw)) << "\n";
  }

  const char* out = output.empty() ? nullptr : output.c_str();
  if (curves.size() == 1) {
    check(mrl_curve_write_csv(curves[0].get(), out));
  } else if (combined) {
    std::vector<const mrl_curve*> cs;
    std::vector<const char*> ls;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      cs.push_back(curves[i].get());
      ls.push_back(labels[i].c_str());
    }
    check(mrl_curves_write_combined(cs.data(), ls.data(), cs.size(), out));
  } else {
    const auto dot = output.find_last_of('.');
    const auto slash = output.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    const std::string stem = has_ext ? output.substr(0, dot) : output;
    const std::string ext = has_ext ? output.substr(dot) : ".csv";
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const std::string path = stem + "_" + labels[i] + ext;
      check(mrl_curve_write_csv(curves[i].get(), path.c_str()));
      std::cerr << "wrote " << path << "\n";
    }
  }
  return exit_ok;
}

int
run_bandwidth(const DataFlags& data, const std::string& estimator)
{
  const auto methods = parse_methods({estimator});
  if (methods.size() != 1)
    flag_error("bandwidth takes a single estimator");
  const mrl_kernel kernel = parse_kernel(data.kernel);
  const mrl_transform transform = parse_transform(data.transform);
  SamplePtr sample = load_sample(data);
  double h = 0.0;
  check(mrl_select_bandwidth(sample.get(), methods[0], kernel, transform, &h));
  std::cout << fmt(h) << "\n";
  return exit_ok;
}

int
run_theory(const std::string& distribution,
           const std::string& estimator,
           const std::string& kernel_name,
           const std::string& transform_name,
           const std::string& bandwidth,
           std::size_t n,
           std::optional<double> grid_min,
           std::optional<double> grid_max,
           std::size_t grid_points,
           const std::string& output)
{
  const auto methods = parse_methods({estimator});
  if (methods.size() != 1 ||
      (methods[0] != MRL_METHOD_TRANSFORMED1 && methods[0] != MRL_METHOD_TRANSFORMED2))
    flag_error("theory needs --estimator transformed1 or transformed2");
  const mrl_kernel kernel = parse_kernel(kernel_name);
  const mrl_transform transform = parse_transform(transform_name);
  if (bandwidth.empty())
    flag_error("theory needs --bandwidth <float>");
  const double h = parse_bandwidth(bandwidth, false);
  if (n < 1)
    flag_error("--n must be at least 1");

  double lower = 0.0, upper = 0.0, mean = 0.0, sd = 0.0;
  check(mrl_distribution_support(distribution.c_str(), &lower, &upper));
  check(mrl_distribution_moments(distribution.c_str(), &mean, &sd));
  const double far = mean + 3.0 * sd;
  const double span = std::min(upper - lower, far - lower);
  double lo = lower + 1e-3 * span;
  double hi = std::min(far, upper - 1e-3 * span);
  if (grid_min)
    lo = *grid_min;
  if (grid_max)
    hi = *grid_max;
  const auto grid = make_grid(lo, hi, grid_points);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!output.empty() && output != "-") {
    file.open(output, std::ios::binary);
    if (!file)
      throw CliFailure{exit_data, "cannot open '" + output + "' for writing"};
    os = &file;
  }
  *os << "t,b1,b2,b3,b4,b5,bias,var\n";
  for (double t : grid) {
    mrl_theory_row row;
    check(mrl_theory_eval(distribution.c_str(), transform, kernel, methods[0], h, n, t, &row));
    *os << fmt(row.t) << ',' << fmt(row.b1) << ',' << fmt(row.b2) << ',' << fmt(row.b3) << ','
        << fmt(row.b4) << ',' << fmt(row.b5) << ',' << fmt(row.bias) << ','
        << fmt(row.variance) << '\n';
  }
  os->flush();
  if (!*os)
    throw CliFailure{exit_data, "write failed"};
  return exit_ok;
}

int
run_simulate(const std::string& config,
             std::optional<std::uint64_t> seed,
             std::optional<unsigned> threads,
             const std::string& output)
{
  mrl_study* raw = nullptr;
  check(mrl_study_load(config.c_str(), &raw));
  std::unique_ptr<mrl_study, StudyDeleter> study(raw);
  if (seed)
    mrl_study_set_seed(study.get(), *seed);
  if (threads)
    mrl_study_set_threads(study.get(), *threads);
  mrl_study_result* res = nullptr;
  check(mrl_study_run(study.get(), &res));
  std::unique_ptr<mrl_study_result, ResultDeleter> result(res);
  std::cout << mrl_study_result_table(result.get());
  std::cout.flush();
  if (!output.empty()) {
    check(mrl_study_result_write_csv(result.get(), output.c_str()));
    std::cerr << "wrote " << output << "\n";
  }
  return exit_ok;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Mean residual life estimation with boundary-corrected kernel estimators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mrl_version()));

  DataFlags est_data;
  std::vector<std::string> est_methods{"transformed2"};
  std::string est_bandwidth = "cv";
  std::optional<double> est_gmin, est_gmax;
  std::size_t est_points = 200;
  std::string est_output;
  bool est_combined = false;
  auto* estimate = app.add_subcommand("estimate", "Estimate S, cumulative S and the MRL on a grid");
  add_data_flags(estimate, est_data);
  estimate
    ->add_option("--estimator", est_methods,
                 "empirical, naive, transformed1, transformed2 or all (repeatable)")
    ->delimiter(',')
    ->capture_default_str();
  estimate->add_option("--bandwidth", est_bandwidth, "cv or a positive number")->capture_default_str();
  estimate->add_option("--grid-min", est_gmin, "First grid point");
  estimate->add_option("--grid-max", est_gmax, "Last grid point");
  estimate->add_option("--grid-points", est_points, "Number of grid points")->capture_default_str();
  estimate->add_option("--output", est_output, "Output CSV (stdout if omitted)");
  estimate->add_flag("--combined", est_combined, "Write all estimators to one wide CSV");

  DataFlags bw_data;
  std::string bw_method = "transformed2";
  auto* bandwidth = app.add_subcommand("bandwidth", "Select a bandwidth by cross-validation");
  add_data_flags(bandwidth, bw_data);
  bandwidth->add_option("--estimator", bw_method, "naive, transformed1 or transformed2")
    ->capture_default_str();

  std::string th_dist = "exponential:1";
  std::string th_method = "transformed2";
  std::string th_kernel = "epanechnikov";
  std::string th_transform = "auto";
  std::string th_bandwidth;
  std::size_t th_n = 100;
  std::optional<double> th_gmin, th_gmax;
  std::size_t th_points = 200;
  std::string th_output;
  auto* theory = app.add_subcommand("theory", "Leading-order bias and variance of a transformed estimator");
  theory->add_option("--distribution", th_dist,
                     "exponential:<rate>, gamma:<shape>,<scale>, weibull:<shape>,<scale>, "
                     "beta:<a>,<b>, uniform:<a>,<b>, absnormal")
    ->capture_default_str();
  theory->add_option("--estimator", th_method, "transformed1 or transformed2")->capture_default_str();
  theory->add_option("--kernel", th_kernel, "epanechnikov or gaussian")->capture_default_str();
  theory->add_option("--transform", th_transform, "log, probit or identity");
  theory->add_option("--bandwidth", th_bandwidth, "Bandwidth h (transformed scale)")->required();
  theory->add_option("--n", th_n, "Sample size")->capture_default_str();
  theory->add_option("--grid-min", th_gmin, "First grid point");
  theory->add_option("--grid-max", th_gmax, "Last grid point");
  theory->add_option("--grid-points", th_points, "Number of grid points")->capture_default_str();
  theory->add_option("--output", th_output, "Output CSV (stdout if omitted)");

  std::string sim_config;
  std::optional<std::uint64_t> sim_seed;
  std::optional<unsigned> sim_threads;
  std::string sim_output;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo study from a key=value config");
  simulate->add_option("config,--config", sim_config, "Study config file")->required();
  simulate->add_option("--seed", sim_seed, "Override the config seed");
  simulate->add_option("--threads", sim_threads, "Worker threads (0: all cores)");
  simulate->add_option("--output", sim_output, "Report CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_flags;
  }

  try {
    if (*estimate)
      return run_estimate(est_data, est_methods, est_bandwidth, est_gmin, est_gmax, est_points,
                          est_output, est_combined);
    if (*bandwidth)
      return run_bandwidth(bw_data, bw_method);
    if (*theory)
      return run_theory(th_dist, th_method, th_kernel, th_transform, th_bandwidth, th_n, th_gmin,
                        th_gmax, th_points, th_output);
    if (*simulate)
      return run_simulate(sim_config, sim_seed, sim_threads, sim_output);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return exit_other;
}
