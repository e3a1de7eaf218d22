#pragma once

#include "mrl/kernel.hpp"
#include "mrl/sample.hpp"
#include "mrl/transform.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrl {

enum class Method
{
  empirical,
  naive_kernel,
  transformed1,
  transformed2
};

enum class Variant
{
  first = 1,
  second = 2
};

enum class PointFlag
{
  ok = 0,
  tail_degenerate = 1,
  error = 2
};

std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view name);
std::string_view flag_name(PointFlag f) noexcept;
PointFlag parse_flag(std::string_view name);

//! Survival, cumulative survival and MRL at one evaluation point. A zero
//! survival estimate reports mrl = 0 with the tail_degenerate flag.
struct PointEstimate
{
  double survival = 0.0;
  double cum_survival = 0.0;
  double mrl = 0.0;
  PointFlag flag = PointFlag::ok;
};

struct EstimatorSpec
{
  Method method = Method::transformed2;
  Kernel kernel{};
  Transform transform = Transform::identity();
  double bandwidth = 0.0; // ignored by Method::empirical

  //! Throws when h ≤ 0 (kernel methods) or the transform range does not
  //! match the sample support (transformed methods; identity matches any).
  void validate(const Sample& sample) const;
};

struct CurveEstimate
{
  std::vector<double> grid;
  std::vector<double> survival;
  std::vector<double> cum_survival;
  std::vector<double> mrl;
  std::vector<PointFlag> flags;

  std::size_t size() const noexcept { return grid.size(); }
};

// Single-observation kernels of the transformed cumulative survival
// estimators, in transformed coordinates x = g⁻¹(t), y = g⁻¹(Xᵢ):
//   𝕍₁,h(x, y) = ∫_x^∞ g'(z) V((z − y)/h) dz
//   𝕍₂,h(x, y) = ∫_{−∞}^y g'(z) V((x − z)/h) dz
// Plateaus where V ≡ 1 are integrated exactly through g; the remaining
// window is integrated by 32-point Gauss-Legendre panels.
double integrated_survival_term1(const Transform& tr,
                                 const Kernel& kernel,
                                 double h,
                                 double x,
                                 double y);
double integrated_survival_term2(const Transform& tr,
                                 const Kernel& kernel,
                                 double h,
                                 double x,
                                 double y);

class EmpiricalEstimator
{
public:
  explicit EmpiricalEstimator(const Sample& sample);
  PointEstimate at(double t) const;

private:
  SupportInterval support_;
  std::vector<double> xs_;
  std::vector<double> suffix_; // suffix_[i] = Σ_{j ≥ i} xs_[j]
};

class NaiveKernelEstimator
{
public:
  NaiveKernelEstimator(const Sample& sample, Kernel kernel, double h);
  PointEstimate at(double t) const;

private:
  SupportInterval support_;
  Kernel kernel_;
  double h_;
  std::vector<double> xs_;
  std::vector<double> suffix_;
};

//! Both transformed estimator sets prepared for repeated evaluation. The
//! sample is mapped once to y = g⁻¹(X) and sorted; observations whose
//! kernel window lies entirely to one side of the evaluation point are
//! handled through suffix sums, so only the O(nh) straddling observations
//! need quadrature.
class TransformedEstimator
{
public:
  TransformedEstimator(const Sample& sample,
                       Transform transform,
                       Kernel kernel,
                       double h,
                       bool prepare_first_variant = true);

  //! S̃₁(t) = S̃₂(t) = n⁻¹ Σ V((g⁻¹(t) − g⁻¹(Xᵢ))/h).
  double survival(double t) const;
  double cum_survival(double t, Variant variant) const;
  PointEstimate at(double t, Variant variant) const;

  //! Limits as t → ω'⁺, computed analytically.
  PointEstimate lower_limit(Variant variant) const;

  const Transform& transform() const noexcept { return transform_; }
  double bandwidth() const noexcept { return h_; }

private:
  double x_of(double t) const;
  double survival_x(double x) const;
  double cum_first_x(double x) const;
  double cum_second_x(double x) const;

  Transform transform_;
  Kernel kernel_;
  double h_;
  double reach_; // kernel radius × h
  std::vector<double> ys_;
  std::vector<double> gy_suffix_;    // Σ_{j ≥ i} g(y_j)
  std::vector<double> first_suffix_; // Σ_{j ≥ i} [g(y_j − reach) + window_j]
  bool first_ready_;
};

double empirical_mrl(const Sample& sample, double t);
PointEstimate empirical_point(const Sample& sample, double t);

PointEstimate naive_kernel_curves(const Sample& sample,
                                  const Kernel& kernel,
                                  double h,
                                  double t);

double t1_survival(const Sample& sample,
                   const Transform& tr,
                   const Kernel& kernel,
                   double h,
                   double t);
double t1_cum_survival(const Sample& sample,
                       const Transform& tr,
                       const Kernel& kernel,
                       double h,
                       double t);
double t2_survival(const Sample& sample,
                   const Transform& tr,
                   const Kernel& kernel,
                   double h,
                   double t);
double t2_cum_survival(const Sample& sample,
                       const Transform& tr,
                       const Kernel& kernel,
                       double h,
                       double t);
PointEstimate transformed_mrl(const Sample& sample,
                              const Transform& tr,
                              const Kernel& kernel,
                              double h,
                              double t,
                              Variant variant);

struct BoundaryLimits
{
  PointEstimate lower_first;  // t → ω'⁺, first set
  PointEstimate lower_second; // t → ω'⁺, second set
  PointEstimate upper;        // t → ω''⁻, both sets
};

//! Exact end-point limits of the transformed estimators: S = 1 at ω'⁺ for
//! both sets, 𝕊₂ = X̄ − ω', 𝕊₁ = X̄ − ω' + O(h²); everything vanishes at ω''⁻.
BoundaryLimits boundary_limits(const Sample& sample,
                               const Transform& tr,
                               const Kernel& kernel,
                               double h);

//! Evaluate an estimator on a sorted grid. Per-point failures are recorded
//! in the flags column; the call itself only throws for an invalid spec or
//! an unsorted grid.
CurveEstimate evaluate_curve(const EstimatorSpec& spec,
                             const Sample& sample,
                             std::span<const double> grid);

std::vector<double> linear_grid(double lo, double hi, std::size_t points);

} // namespace mrl
