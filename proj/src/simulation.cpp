#include "mrl/simulation.hpp"

#include "mrl/bandwidth.hpp"
#include "mrl/error.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace mrl {

namespace {

double
pairwise_sum(const double* p, std::size_t n)
{
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

ErrorStat
summarize(const std::vector<double>& v)
{
  ErrorStat out;
  if (v.empty())
    return out;
  const double nd = static_cast<double>(v.size());
  out.mean = pairwise_sum(v.data(), v.size()) / nd;
  if (v.size() < 2)
    return out;
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    dev[i] = (v[i] - out.mean) * (v[i] - out.mean);
  const double var = pairwise_sum(dev.data(), dev.size()) / (nd - 1.0);
  out.se = std::sqrt(var / nd);
  return out;
}

unsigned
thread_count(unsigned requested, std::size_t reps)
{
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(reps, 1)));
}

// Runs fn(rep) for every replication; each call owns its output slot, so the
// result does not depend on scheduling.
template<class F>
void
for_each_replication(std::size_t reps, unsigned threads, F&& fn)
{
  const unsigned workers = thread_count(threads, reps);
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r)
      fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t r = next.fetch_add(1);
        if (r >= reps)
          return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error)
            first_error = std::current_exception();
          next.store(reps);
        }
      }
    });
  }
  for (auto& t : pool)
    t.join();
  if (first_error)
    std::rethrow_exception(first_error);
}

void
check_failure_rate(std::size_t failed_reps, std::size_t reps, const std::string& what)
{
  if (failed_reps * 100 > reps) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu of %zu replications failed for %s (limit 1%%)",
                  failed_reps, reps, what.c_str());
    fail(ErrorCode::numeric, buf);
  }
}

bool
curve_ok(const CurveEstimate& c)
{
  return std::none_of(c.flags.begin(), c.flags.end(),
                      [](PointFlag f) { return f == PointFlag::error; });
}

std::vector<double>
ase_points_of(const SimulationConfig& config)
{
  return config.ase_points.empty() ? default_ase_points(config.distribution)
                                   : config.ase_points;
}

std::pair<double, double>
range_of(const SimulationConfig& config)
{
  auto [lo, hi] = ise_range(config.distribution);
  if (config.range_min)
    lo = *config.range_min;
  if (config.range_max)
    hi = *config.range_max;
  return {lo, hi};
}

std::string
csv_field(const std::string& s)
{
  if (s.find_first_of(",\"") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string
fmt_double(double v)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

} // namespace

void
SimulationConfig::validate() const
{
  if (n < 1)
    fail(ErrorCode::invalid_argument, "simulation needs n >= 1");
  if (reps < 1)
    fail(ErrorCode::invalid_argument, "simulation needs reps >= 1");
  if (estimators.empty())
    fail(ErrorCode::invalid_argument, "simulation needs at least one estimator");
  if (grid_points < 2)
    fail(ErrorCode::invalid_argument, "simulation grid needs at least 2 points");
  const auto& sup = distribution.support();
  auto [lo, hi] = range_of(*this);
  if (!(lo < hi) || !sup.interior(lo) || !sup.interior(hi))
    fail(ErrorCode::invalid_argument, "ISE range must lie strictly inside the support");
  for (double t : ase_points_of(*this))
    if (!sup.interior(t))
      fail(ErrorCode::invalid_argument, "ASE point " + fmt_double(t) + " is not inside the support");
  for (const auto& e : estimators) {
    if (!e.bandwidth.cross_validate && !(e.bandwidth.fixed > 0.0))
      fail(ErrorCode::invalid_argument, "fixed bandwidth must be positive");
    if (e.transform != "auto" && e.transform != "log" && e.transform != "probit" &&
        e.transform != "identity")
      fail(ErrorCode::invalid_argument, "unknown transform '" + e.transform + "'");
  }
}

std::uint64_t
substream_seed(std::uint64_t seed, std::uint64_t rep)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (rep + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Sample
sample_distribution(const TrueDistribution& dist, std::size_t n, std::mt19937_64& rng)
{
  if (n < 1)
    fail(ErrorCode::invalid_argument, "sample size must be at least 1");
  std::vector<double> xs(n);
  for (auto& x : xs)
    x = dist.draw(rng);
  return Sample(std::move(xs), dist.support());
}

double
true_mrl(const TrueDistribution& dist, double t)
{
  if (!dist.support().interior(t))
    fail(ErrorCode::domain, "t = " + fmt_double(t) + " is not inside the support");
  return dist.mrl(t);
}

double
ise(const CurveEstimate& curve, const TrueDistribution& dist, double lo, double hi)
{
  double total = 0.0;
  bool have_prev = false;
  double prev_t = 0.0;
  double prev_e = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double t = curve.grid[i];
    if (t < lo || t > hi)
      continue;
    const double d = curve.mrl[i] - dist.mrl(t);
    const double e = d * d;
    if (have_prev)
      total += 0.5 * (t - prev_t) * (e + prev_e);
    prev_t = t;
    prev_e = e;
    have_prev = true;
  }
  return total;
}

std::pair<double, double>
ise_range(const TrueDistribution& dist)
{
  const auto& sup = dist.support();
  const double far = dist.mean() + 3.0 * dist.sd();
  const double span = std::min(sup.upper - sup.lower, far - sup.lower);
  const double lo = sup.lower + 1e-3 * span;
  const double hi = std::min(far, sup.upper - 1e-3 * span);
  return {lo, hi};
}

std::vector<double>
default_ase_points(const TrueDistribution& dist)
{
  const double far = dist.mean() + 3.0 * dist.sd();
  return {dist.support().lower + 0.001, dist.mean(), std::min(far, ise_range(dist).second)};
}

std::vector<EstimatorTemplate>
default_templates()
{
  std::vector<EstimatorTemplate> out;
  for (Method m : {Method::empirical, Method::naive_kernel, Method::transformed1,
                   Method::transformed2}) {
    EstimatorTemplate e;
    e.method = m;
    out.push_back(e);
  }
  return out;
}

EstimatorSpec
instantiate(const EstimatorTemplate& tpl, const Sample& sample)
{
  EstimatorSpec spec;
  spec.method = tpl.method;
  spec.kernel = Kernel(tpl.kernel);
  switch (tpl.method) {
    case Method::empirical:
      return spec;
    case Method::naive_kernel:
      spec.transform = Transform::identity();
      break;
    case Method::transformed1:
    case Method::transformed2:
      spec.transform = tpl.transform == "auto"
                         ? default_transform(sample.support())
                         : make_transform(tpl.transform, sample.support());
      break;
  }
  spec.bandwidth = tpl.bandwidth.cross_validate
                     ? select_bandwidth_lscv(sample, spec.transform, spec.kernel)
                     : tpl.bandwidth.fixed;
  return spec;
}

SimulationReport
run_mc(const SimulationConfig& config)
{
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto [lo, hi] = range_of(config);
  const std::vector<double> grid = linear_grid(lo, hi, config.grid_points);
  std::vector<double> points = ase_points_of(config);
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<double> sorted_points(points.size());
  std::vector<double> truth(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_points[i] = points[order[i]];
    truth[i] = config.distribution.mrl(sorted_points[i]);
  }

  const std::size_t E = config.estimators.size();
  const std::size_t P = points.size();
  const std::size_t R = config.reps;
  std::vector<double> ise_v(R * E, 0.0);
  std::vector<double> sq_v(R * E * P, 0.0);
  std::vector<double> h_v(R * E, 0.0);
  std::vector<char> failed(R * E, 0);

  for_each_replication(R, config.threads, [&](std::size_t r) {
    std::mt19937_64 rng(substream_seed(config.seed, r));
    const Sample sample = sample_distribution(config.distribution, config.n, rng);
    for (std::size_t e = 0; e < E; ++e) {
      const std::size_t slot = r * E + e;
      try {
        const EstimatorSpec spec = instantiate(config.estimators[e], sample);
        const CurveEstimate curve = evaluate_curve(spec, sample, grid);
        const CurveEstimate at = evaluate_curve(spec, sample, sorted_points);
        if (!curve_ok(curve) || !curve_ok(at)) {
          failed[slot] = 1;
          continue;
        }
        ise_v[slot] = ise(curve, config.distribution, lo, hi);
        for (std::size_t k = 0; k < P; ++k) {
          const double d = at.mrl[k] - truth[k];
          sq_v[slot * P + order[k]] = d * d;
        }
        h_v[slot] = spec.bandwidth;
      } catch (const Error&) {
        failed[slot] = 1;
      }
    }
  });

  SimulationReport report;
  report.distribution = config.distribution.name();
  report.n = config.n;
  report.reps = R;
  report.seed = config.seed;
  report.range_lo = lo;
  report.range_hi = hi;
  report.ase_points = points;

  std::size_t failed_reps = 0;
  for (std::size_t r = 0; r < R; ++r) {
    bool any = false;
    for (std::size_t e = 0; e < E; ++e)
      any = any || failed[r * E + e];
    failed_reps += any ? 1 : 0;
  }
  check_failure_rate(failed_reps, R, report.distribution);

  for (std::size_t e = 0; e < E; ++e) {
    EstimatorSummary s;
    s.label = config.estimators[e].label();
    std::vector<double> iv, hv;
    std::vector<std::vector<double>> pv(P);
    s.ise_by_rep.assign(R, std::numeric_limits<double>::quiet_NaN());
    s.ase_by_rep.assign(P, std::vector<double>(R, std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t r = 0; r < R; ++r) {
      const std::size_t slot = r * E + e;
      if (failed[slot]) {
        ++s.failures;
        continue;
      }
      s.ise_by_rep[r] = ise_v[slot];
      for (std::size_t k = 0; k < P; ++k)
        s.ase_by_rep[k][r] = sq_v[slot * P + k];
      iv.push_back(ise_v[slot]);
      hv.push_back(h_v[slot]);
      for (std::size_t k = 0; k < P; ++k)
        pv[k].push_back(sq_v[slot * P + k]);
    }
    s.aise = summarize(iv);
    s.bandwidth = summarize(hv);
    for (const auto& v : pv)
      s.ase.push_back(summarize(v));
    report.estimators.push_back(std::move(s));
  }
  report.wall_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

BiasProfile
bias_profile(const SimulationConfig& config, std::span<const double> grid_in)
{
  config.validate();
  std::vector<double> grid(grid_in.begin(), grid_in.end());
  if (grid.empty())
    fail(ErrorCode::invalid_argument, "bias profile needs a non-empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    fail(ErrorCode::invalid_argument, "bias profile grid must be sorted");
  for (double t : grid)
    if (!config.distribution.support().interior(t))
      fail(ErrorCode::invalid_argument, "bias profile grid must lie inside the support");

  const std::size_t E = config.estimators.size();
  const std::size_t G = grid.size();
  const std::size_t R = config.reps;
  std::vector<double> truth(G);
  for (std::size_t k = 0; k < G; ++k)
    truth[k] = config.distribution.mrl(grid[k]);
  std::vector<double> err(R * E * G, 0.0);
  std::vector<char> failed(R * E, 0);

  for_each_replication(R, config.threads, [&](std::size_t r) {
    std::mt19937_64 rng(substream_seed(config.seed, r));
    const Sample sample = sample_distribution(config.distribution, config.n, rng);
    for (std::size_t e = 0; e < E; ++e) {
      const std::size_t slot = r * E + e;
      try {
        const EstimatorSpec spec = instantiate(config.estimators[e], sample);
        const CurveEstimate curve = evaluate_curve(spec, sample, grid);
        if (!curve_ok(curve)) {
          failed[slot] = 1;
          continue;
        }
        for (std::size_t k = 0; k < G; ++k)
          err[slot * G + k] = curve.mrl[k] - truth[k];
      } catch (const Error&) {
        failed[slot] = 1;
      }
    }
  });

  BiasProfile out;
  out.distribution = config.distribution.name();
  out.grid = grid;
  std::size_t failed_reps = 0;
  for (std::size_t r = 0; r < R; ++r) {
    bool any = false;
    for (std::size_t e = 0; e < E; ++e)
      any = any || failed[r * E + e];
    failed_reps += any ? 1 : 0;
  }
  check_failure_rate(failed_reps, R, out.distribution);

  for (std::size_t e = 0; e < E; ++e) {
    BiasProfileCurve c;
    c.label = config.estimators[e].label();
    std::vector<std::vector<double>> cols(G);
    for (std::size_t r = 0; r < R; ++r) {
      const std::size_t slot = r * E + e;
      if (failed[slot]) {
        ++c.failures;
        continue;
      }
      for (std::size_t k = 0; k < G; ++k)
        cols[k].push_back(err[slot * G + k]);
    }
    for (const auto& col : cols) {
      const ErrorStat s = summarize(col);
      c.mean_error.push_back(s.mean);
      c.se.push_back(s.se);
    }
    out.curves.push_back(std::move(c));
  }
  return out;
}

std::vector<NormalityDiagnostic>
normality_diagnostic(const SimulationConfig& config, double t)
{
  if (config.reps < 1000)
    fail(ErrorCode::invalid_argument, "normality diagnostic needs reps >= 1000");
  config.validate();
  if (!config.distribution.support().interior(t))
    fail(ErrorCode::invalid_argument, "diagnostic point must lie inside the support");

  const std::size_t E = config.estimators.size();
  const std::size_t R = config.reps;
  const double point[1] = {t};
  std::vector<double> est(R * E, 0.0);
  std::vector<char> failed(R * E, 0);

  for_each_replication(R, config.threads, [&](std::size_t r) {
    std::mt19937_64 rng(substream_seed(config.seed, r));
    const Sample sample = sample_distribution(config.distribution, config.n, rng);
    for (std::size_t e = 0; e < E; ++e) {
      const std::size_t slot = r * E + e;
      try {
        const EstimatorSpec spec = instantiate(config.estimators[e], sample);
        const CurveEstimate c = evaluate_curve(spec, sample, point);
        if (!curve_ok(c))
          failed[slot] = 1;
        else
          est[slot] = c.mrl[0];
      } catch (const Error&) {
        failed[slot] = 1;
      }
    }
  });

  std::size_t failed_reps = 0;
  for (std::size_t r = 0; r < R; ++r) {
    bool any = false;
    for (std::size_t e = 0; e < E; ++e)
      any = any || failed[r * E + e];
    failed_reps += any ? 1 : 0;
  }
  check_failure_rate(failed_reps, R, config.distribution.name());

  const double truth = config.distribution.mrl(t);
  std::vector<NormalityDiagnostic> out;
  for (std::size_t e = 0; e < E; ++e) {
    std::vector<double> v;
    for (std::size_t r = 0; r < R; ++r)
      if (!failed[r * E + e])
        v.push_back(est[r * E + e]);
    const double nd = static_cast<double>(v.size());
    const double mean = pairwise_sum(v.data(), v.size()) / nd;
    std::vector<double> p2(v.size()), p3(v.size()), p4(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - mean;
      p2[i] = d * d;
      p3[i] = d * d * d;
      p4[i] = d * d * d * d;
    }
    const double m2 = pairwise_sum(p2.data(), p2.size()) / nd;
    const double m3 = pairwise_sum(p3.data(), p3.size()) / nd;
    const double m4 = pairwise_sum(p4.data(), p4.size()) / nd;
    NormalityDiagnostic d;
    d.distribution = config.distribution.name();
    d.label = config.estimators[e].label();
    d.t = t;
    d.mean = mean;
    d.sd = std::sqrt(m2 * nd / (nd - 1.0));
    d.skewness = m3 / std::pow(m2, 1.5);
    d.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    d.standardized_mean = (mean - truth) / d.sd;
    d.reps = v.size();
    out.push_back(d);
  }
  return out;
}

// ----- study files -----------------------------------------------------------

namespace {

std::string_view
trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string>
split(std::string_view s, char sep)
{
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    const auto piece = trim(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (!piece.empty())
      out.emplace_back(piece);
    if (next == std::string_view::npos)
      break;
    pos = next + 1;
  }
  return out;
}

[[noreturn]] void
config_error(std::size_t line, const std::string& what)
{
  fail(ErrorCode::config, "config line " + std::to_string(line) + ": " + what);
}

double
to_double(std::string_view s, std::size_t line, std::string_view key)
{
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
    config_error(line, "'" + std::string(key) + "' expects a number, got '" + std::string(s) + "'");
  return v;
}

std::uint64_t
to_uint(std::string_view s, std::size_t line, std::string_view key)
{
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    config_error(line,
                 "'" + std::string(key) + "' expects a non-negative integer, got '" +
                   std::string(s) + "'");
  return v;
}

} // namespace

SimulationStudy
parse_study(std::string_view text)
{
  struct Entry
  {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry, std::less<>> kv;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      config_error(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty())
      config_error(line_no, "missing key before '='");
    if (value.empty())
      config_error(line_no, "missing value for '" + key + "'");
    if (kv.count(key))
      config_error(line_no, "duplicate key '" + key + "'");
    kv.emplace(key, Entry{value, line_no});
  }
  if (kv.empty())
    fail(ErrorCode::config, "config is empty");

  static const char* known[] = {"mode",        "distributions", "distribution", "n",
                                "reps",        "estimators",    "kernel",       "transform",
                                "bandwidth",   "grid_points",   "range_min",    "range_max",
                                "ase_points",  "seed",          "threads",      "profile_points",
                                "profile_min", "profile_max",   "t"};
  for (const auto& [key, entry] : kv)
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return key == k; }) == std::end(known))
      config_error(entry.line, "unknown key '" + key + "'");

  SimulationStudy study;
  SimulationConfig base;
  base.estimators.clear();

  auto get = [&](const char* key) -> const Entry* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* e = get("mode")) {
    if (e->value == "aise")
      study.mode = StudyMode::aise;
    else if (e->value == "bias_profile")
      study.mode = StudyMode::bias_profile;
    else if (e->value == "normality")
      study.mode = StudyMode::normality;
    else
      config_error(e->line, "mode must be aise, bias_profile or normality");
  }
  if (auto* e = get("n")) {
    base.n = to_uint(e->value, e->line, "n");
    if (base.n < 1)
      config_error(e->line, "n must be at least 1");
  }
  if (auto* e = get("reps")) {
    base.reps = to_uint(e->value, e->line, "reps");
    if (base.reps < 1)
      config_error(e->line, "reps must be at least 1");
  }
  if (auto* e = get("grid_points")) {
    base.grid_points = to_uint(e->value, e->line, "grid_points");
    if (base.grid_points < 2)
      config_error(e->line, "grid_points must be at least 2");
  }
  if (auto* e = get("seed"))
    base.seed = to_uint(e->value, e->line, "seed");
  if (auto* e = get("threads"))
    base.threads = static_cast<unsigned>(to_uint(e->value, e->line, "threads"));
  if (auto* e = get("range_min"))
    base.range_min = to_double(e->value, e->line, "range_min");
  if (auto* e = get("range_max"))
    base.range_max = to_double(e->value, e->line, "range_max");
  if (auto* e = get("ase_points"))
    for (const auto& p : split(e->value, ','))
      base.ase_points.push_back(to_double(p, e->line, "ase_points"));
  if (auto* e = get("profile_points")) {
    study.profile_points = to_uint(e->value, e->line, "profile_points");
    if (study.profile_points < 1)
      config_error(e->line, "profile_points must be at least 1");
  }
  if (auto* e = get("profile_min"))
    study.profile_min = to_double(e->value, e->line, "profile_min");
  if (auto* e = get("profile_max"))
    study.profile_max = to_double(e->value, e->line, "profile_max");
  if (auto* e = get("t"))
    study.normality_t = to_double(e->value, e->line, "t");

  EstimatorTemplate proto;
  if (auto* e = get("kernel")) {
    try {
      proto.kernel = parse_kernel_family(e->value);
    } catch (const Error& err) {
      config_error(e->line, err.what());
    }
  }
  if (auto* e = get("transform")) {
    if (e->value != "auto" && e->value != "log" && e->value != "probit" &&
        e->value != "identity")
      config_error(e->line, "transform must be auto, log, probit or identity");
    proto.transform = e->value;
  }
  if (auto* e = get("bandwidth")) {
    if (e->value == "cv") {
      proto.bandwidth.cross_validate = true;
    } else {
      proto.bandwidth.cross_validate = false;
      proto.bandwidth.fixed = to_double(e->value, e->line, "bandwidth");
      if (!(proto.bandwidth.fixed > 0.0))
        config_error(e->line, "bandwidth must be cv or a positive number");
    }
  }
  std::vector<std::string> names{"empirical", "naive", "transformed1", "transformed2"};
  if (auto* e = get("estimators"))
    if (e->value != "all")
      names = split(e->value, ',');
  for (const auto& name : names) {
    EstimatorTemplate t = proto;
    try {
      t.method = parse_method(name);
    } catch (const Error& err) {
      config_error(get("estimators")->line, err.what());
    }
    base.estimators.push_back(t);
  }
  if (base.estimators.empty())
    config_error(get("estimators")->line, "no estimators listed");

  const Entry* dists = get("distributions");
  if (!dists)
    dists = get("distribution");
  if (!dists)
    fail(ErrorCode::config, "config needs a 'distributions' key");
  if (get("distributions") && get("distribution"))
    config_error(get("distribution")->line, "use either 'distribution' or 'distributions'");
  for (const auto& d : split(dists->value, ';')) {
    SimulationConfig c = base;
    try {
      c.distribution = TrueDistribution::parse(d);
    } catch (const Error& err) {
      config_error(dists->line, err.what());
    }
    try {
      c.validate();
    } catch (const Error& err) {
      config_error(dists->line, std::string(err.what()) + " (distribution " + d + ")");
    }
    study.configs.push_back(std::move(c));
  }
  if (study.configs.empty())
    config_error(dists->line, "no distributions listed");
  if (study.mode == StudyMode::normality && base.reps < 1000)
    config_error(get("reps") ? get("reps")->line : dists->line,
                 "normality mode needs reps >= 1000");
  return study;
}

SimulationStudy
load_study(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::io, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_study(ss.str());
}

StudyResult
run_study(const SimulationStudy& study)
{
  StudyResult out;
  out.mode = study.mode;
  for (const auto& config : study.configs) {
    switch (study.mode) {
      case StudyMode::aise:
        out.reports.push_back(run_mc(config));
        break;
      case StudyMode::bias_profile: {
        auto [lo, hi] = range_of(config);
        if (study.profile_min)
          lo = *study.profile_min;
        if (study.profile_max)
          hi = *study.profile_max;
        const auto grid = study.profile_points == 1
                            ? std::vector<double>{lo}
                            : linear_grid(lo, hi, study.profile_points);
        out.profiles.push_back(bias_profile(config, grid));
        break;
      }
      case StudyMode::normality: {
        auto d = normality_diagnostic(config, study.normality_t);
        out.diagnostics.insert(out.diagnostics.end(), d.begin(), d.end());
        break;
      }
    }
  }
  return out;
}

void
write_study_csv(std::ostream& os, const StudyResult& result)
{
  switch (result.mode) {
    case StudyMode::aise:
      os << "distribution,n,reps,estimator,metric,t,value,mc_se,failures,range_lo,range_hi\n";
      for (const auto& r : result.reports) {
        const std::string tail = "," + fmt_double(r.range_lo) + "," + fmt_double(r.range_hi) + "\n";
        const std::string head =
          csv_field(r.distribution) + "," + std::to_string(r.n) + "," + std::to_string(r.reps) + ",";
        for (const auto& e : r.estimators) {
          const std::string fails = std::to_string(e.failures);
          os << head << e.label << ",aise,," << fmt_double(e.aise.mean) << ","
             << fmt_double(e.aise.se) << "," << fails << tail;
          for (std::size_t k = 0; k < r.ase_points.size(); ++k)
            os << head << e.label << ",ase," << fmt_double(r.ase_points[k]) << ","
               << fmt_double(e.ase[k].mean) << "," << fmt_double(e.ase[k].se) << "," << fails
               << tail;
          os << head << e.label << ",bandwidth,," << fmt_double(e.bandwidth.mean) << ","
             << fmt_double(e.bandwidth.se) << "," << fails << tail;
        }
      }
      break;
    case StudyMode::bias_profile:
      os << "distribution,estimator,t,mean_error,mc_se\n";
      for (const auto& p : result.profiles)
        for (const auto& c : p.curves)
          for (std::size_t k = 0; k < p.grid.size(); ++k)
            os << csv_field(p.distribution) << "," << c.label << "," << fmt_double(p.grid[k]) << ","
               << fmt_double(c.mean_error[k]) << "," << fmt_double(c.se[k]) << "\n";
      break;
    case StudyMode::normality:
      os << "distribution,estimator,t,mean,sd,skewness,excess_kurtosis,standardized_mean,reps\n";
      for (const auto& d : result.diagnostics)
        os << csv_field(d.distribution) << "," << d.label << "," << fmt_double(d.t) << ","
           << fmt_double(d.mean) << "," << fmt_double(d.sd) << "," << fmt_double(d.skewness)
           << "," << fmt_double(d.excess_kurtosis) << "," << fmt_double(d.standardized_mean)
           << "," << d.reps << "\n";
      break;
  }
}

std::string
format_study_table(const StudyResult& result)
{
  std::ostringstream os;
  char buf[256];
  switch (result.mode) {
    case StudyMode::aise:
      for (const auto& r : result.reports) {
        std::snprintf(buf, sizeof buf,
                      "%s  n=%zu  reps=%zu  seed=%llu  ISE range [%.6g, %.6g]  (%.1f s)\n",
                      r.distribution.c_str(), r.n, r.reps,
                      static_cast<unsigned long long>(r.seed), r.range_lo, r.range_hi,
                      r.wall_seconds);
        os << buf;
        std::snprintf(buf, sizeof buf, "  %-14s %12s %10s", "estimator", "AISE", "(se)");
        os << buf;
        for (double t : r.ase_points) {
          std::snprintf(buf, sizeof buf, " %12s %10s", ("ASE@" + fmt_double(t).substr(0, 7)).c_str(),
                        "(se)");
          os << buf;
        }
        os << "  fails\n";
        for (const auto& e : r.estimators) {
          std::snprintf(buf, sizeof buf, "  %-14s %12.5g %10.3g", e.label.c_str(), e.aise.mean,
                        e.aise.se);
          os << buf;
          for (const auto& a : e.ase) {
            std::snprintf(buf, sizeof buf, " %12.5g %10.3g", a.mean, a.se);
            os << buf;
          }
          os << "  " << e.failures << "\n";
        }
        os << "\n";
      }
      break;
    case StudyMode::bias_profile:
      for (const auto& p : result.profiles) {
        os << p.distribution << "  bias profile over " << p.grid.size() << " points ["
           << fmt_double(p.grid.front()) << ", " << fmt_double(p.grid.back()) << "]\n";
        std::snprintf(buf, sizeof buf, "  %-14s %14s %14s %14s\n", "estimator", "bias@first",
                      "max|bias|", "mean|bias|");
        os << buf;
        for (const auto& c : p.curves) {
          double mx = 0.0, avg = 0.0;
          for (double v : c.mean_error) {
            mx = std::max(mx, std::abs(v));
            avg += std::abs(v);
          }
          avg /= static_cast<double>(c.mean_error.size());
          std::snprintf(buf, sizeof buf, "  %-14s %14.5g %14.5g %14.5g\n", c.label.c_str(),
                        c.mean_error.front(), mx, avg);
          os << buf;
        }
        os << "\n";
      }
      break;
    case StudyMode::normality:
      std::snprintf(buf, sizeof buf, "%-16s %-14s %8s %12s %12s %10s %10s %10s\n",
                    "distribution", "estimator", "t", "mean", "sd", "skew", "ex.kurt", "z(mean)");
      os << buf;
      for (const auto& d : result.diagnostics) {
        std::snprintf(buf, sizeof buf, "%-16s %-14s %8.4g %12.6g %12.6g %10.4f %10.4f %10.4f\n",
                      d.distribution.c_str(), d.label.c_str(), d.t, d.mean, d.sd, d.skewness,
                      d.excess_kurtosis, d.standardized_mean);
        os << buf;
      }
      break;
  }
  return os.str();
}

} // namespace mrl
