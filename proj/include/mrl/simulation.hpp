#pragma once

#include "mrl/distributions.hpp"
#include "mrl/estimators.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrl {

//! How an estimator template picks its bandwidth in each replication.
struct BandwidthPolicy
{
  bool cross_validate = true;
  double fixed = 0.0;
};

//! An estimator to be re-fitted on every simulated sample. The transform is
//! resolved against the distribution support ("auto": log for half lines,
//! probit for bounded intervals).
struct EstimatorTemplate
{
  Method method = Method::transformed2;
  KernelFamily kernel = KernelFamily::epanechnikov;
  std::string transform = "auto";
  BandwidthPolicy bandwidth{};

  std::string label() const { return std::string(method_name(method)); }
};

struct SimulationConfig
{
  TrueDistribution distribution = TrueDistribution::exponential(1.0);
  std::size_t n = 50;
  std::size_t reps = 200;
  std::vector<EstimatorTemplate> estimators;
  std::size_t grid_points = 200;
  std::optional<double> range_min;
  std::optional<double> range_max;
  std::vector<double> ase_points; // empty: ω' + 0.001, E(X), E(X) + 3σ
  std::uint64_t seed = 1;
  unsigned threads = 0; // 0: hardware concurrency

  void validate() const;
};

struct ErrorStat
{
  double mean = 0.0;
  double se = 0.0; // Monte-Carlo standard error of the mean
};

struct EstimatorSummary
{
  std::string label;
  ErrorStat aise;
  std::vector<ErrorStat> ase; // one per ASE point
  ErrorStat bandwidth;
  std::size_t failures = 0;
  // Replication-level errors in replication order, NaN where the estimator
  // failed. Estimators share samples, so these support paired comparisons.
  std::vector<double> ise_by_rep;
  std::vector<std::vector<double>> ase_by_rep; // [point][rep]
};

struct SimulationReport
{
  std::string distribution;
  std::size_t n = 0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::vector<double> ase_points;
  std::vector<EstimatorSummary> estimators;
  double wall_seconds = 0.0;
};

struct BiasProfileCurve
{
  std::string label;
  std::vector<double> mean_error;
  std::vector<double> se;
  std::size_t failures = 0;
};

struct BiasProfile
{
  std::string distribution;
  std::vector<double> grid;
  std::vector<BiasProfileCurve> curves;
};

struct NormalityDiagnostic
{
  std::string distribution;
  std::string label;
  double t = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double standardized_mean = 0.0; // (mean − m(t)) / sd
  std::size_t reps = 0;
};

//! Seed of the replication sub-stream `rep` (SplitMix64 of seed and index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t rep);

Sample sample_distribution(const TrueDistribution& dist, std::size_t n, std::mt19937_64& rng);

double true_mrl(const TrueDistribution& dist, double t);

//! Trapezoid ∫ (m̂ − m)² over the part of the curve grid inside [lo, hi].
double ise(const CurveEstimate& curve, const TrueDistribution& dist, double lo, double hi);

//! [ω' + 10⁻³ span, E(X) + 3σ], with span = min(ω'' − ω', E(X) + 3σ − ω');
//! the upper end is pulled back to ω'' − 10⁻³ span on bounded supports.
std::pair<double, double> ise_range(const TrueDistribution& dist);
std::vector<double> default_ase_points(const TrueDistribution& dist);

//! Fits a template on one sample: resolves transform and bandwidth.
EstimatorSpec instantiate(const EstimatorTemplate& tpl, const Sample& sample);

SimulationReport run_mc(const SimulationConfig& config);
BiasProfile bias_profile(const SimulationConfig& config, std::span<const double> grid);
std::vector<NormalityDiagnostic> normality_diagnostic(const SimulationConfig& config, double t);

std::vector<EstimatorTemplate> default_templates();

// ----- study files -----------------------------------------------------------

enum class StudyMode
{
  aise,
  bias_profile,
  normality
};

//! A parsed key=value study file: one configuration per listed distribution.
struct SimulationStudy
{
  StudyMode mode = StudyMode::aise;
  std::vector<SimulationConfig> configs;
  std::size_t profile_points = 100;
  std::optional<double> profile_min;
  std::optional<double> profile_max;
  double normality_t = 1.0;
};

SimulationStudy parse_study(std::string_view text);
SimulationStudy load_study(const std::string& path);

struct StudyResult
{
  StudyMode mode = StudyMode::aise;
  std::vector<SimulationReport> reports;
  std::vector<BiasProfile> profiles;
  std::vector<NormalityDiagnostic> diagnostics;
};

StudyResult run_study(const SimulationStudy& study);

void write_study_csv(std::ostream& os, const StudyResult& result);
std::string format_study_table(const StudyResult& result);

} // namespace mrl
