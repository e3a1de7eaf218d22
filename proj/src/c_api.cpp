#include "mrl/mrl.h"

#include "mrl/asymptotics.hpp"
#include "mrl/bandwidth.hpp"
#include "mrl/distributions.hpp"
#include "mrl/error.hpp"
#include "mrl/estimators.hpp"
#include "mrl/io.hpp"
#include "mrl/simulation.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>

struct mrl_sample
{
  mrl::Sample sample;
};

struct mrl_curve
{
  mrl::CurveEstimate curve;
  double bandwidth = 0.0;
};

struct mrl_study
{
  mrl::SimulationStudy study;
};

struct mrl_study_result
{
  mrl::StudyResult result;
  std::string table;
};

namespace {

thread_local std::string last_error;

mrl_status
to_status(mrl::ErrorCode code)
{
  switch (code) {
    case mrl::ErrorCode::invalid_argument:
      return MRL_ERR_INVALID_ARGUMENT;
    case mrl::ErrorCode::domain:
      return MRL_ERR_DOMAIN;
    case mrl::ErrorCode::data:
      return MRL_ERR_DATA;
    case mrl::ErrorCode::numeric:
      return MRL_ERR_NUMERIC;
    case mrl::ErrorCode::selection:
      return MRL_ERR_SELECTION;
    case mrl::ErrorCode::config:
      return MRL_ERR_CONFIG;
    case mrl::ErrorCode::io:
      return MRL_ERR_IO;
  }
  return MRL_ERR_INTERNAL;
}

template<class F>
mrl_status
guarded(F&& f)
{
  try {
    last_error.clear();
    f();
    return MRL_OK;
  } catch (const mrl::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MRL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MRL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MRL_ERR_INTERNAL;
  }
}

void
require(const void* p, const char* what)
{
  if (!p)
    mrl::fail(mrl::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

mrl::KernelFamily
family_of(mrl_kernel k)
{
  switch (k) {
    case MRL_KERNEL_EPANECHNIKOV:
      return mrl::KernelFamily::epanechnikov;
    case MRL_KERNEL_GAUSSIAN:
      return mrl::KernelFamily::gaussian;
  }
  mrl::fail(mrl::ErrorCode::invalid_argument, "unknown kernel");
}

mrl::Method
method_of(mrl_method m)
{
  switch (m) {
    case MRL_METHOD_EMPIRICAL:
      return mrl::Method::empirical;
    case MRL_METHOD_NAIVE:
      return mrl::Method::naive_kernel;
    case MRL_METHOD_TRANSFORMED1:
      return mrl::Method::transformed1;
    case MRL_METHOD_TRANSFORMED2:
      return mrl::Method::transformed2;
  }
  mrl::fail(mrl::ErrorCode::invalid_argument, "unknown method");
}

const char*
transform_name(mrl_transform t)
{
  switch (t) {
    case MRL_TRANSFORM_AUTO:
      return "auto";
    case MRL_TRANSFORM_LOG:
      return "log";
    case MRL_TRANSFORM_PROBIT:
      return "probit";
    case MRL_TRANSFORM_IDENTITY:
      return "identity";
  }
  mrl::fail(mrl::ErrorCode::invalid_argument, "unknown transform");
}

mrl::Transform
resolve_transform(mrl_transform t, const mrl::SupportInterval& support)
{
  if (t == MRL_TRANSFORM_AUTO)
    return mrl::default_transform(support);
  return mrl::make_transform(transform_name(t), support);
}

mrl::EstimatorSpec
build_spec(const mrl_sample* s, const mrl_estimator_spec* in)
{
  require(s, "sample");
  require(in, "spec");
  mrl::EstimatorTemplate tpl;
  tpl.method = method_of(in->method);
  tpl.kernel = family_of(in->kernel);
  tpl.transform = transform_name(in->transform);
  if (std::isnan(in->bandwidth) || in->bandwidth <= 0.0) {
    tpl.bandwidth.cross_validate = true;
  } else {
    if (!std::isfinite(in->bandwidth))
      mrl::fail(mrl::ErrorCode::invalid_argument, "bandwidth must be finite");
    tpl.bandwidth.cross_validate = false;
    tpl.bandwidth.fixed = in->bandwidth;
  }
  return mrl::instantiate(tpl, s->sample);
}

mrl_point
to_point(const mrl::PointEstimate& p)
{
  return mrl_point{p.survival, p.cum_survival, p.mrl, static_cast<mrl_flag>(p.flag)};
}

template<class F>
void
with_output(const char* path, F&& f)
{
  if (!path || std::string(path) == "-") {
    f(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    mrl::fail(mrl::ErrorCode::io, std::string("cannot open '") + path + "' for writing");
  f(os);
  os.flush();
  if (!os)
    mrl::fail(mrl::ErrorCode::io, std::string("write to '") + path + "' failed");
}

} // namespace

extern "C" {

const char*
mrl_version(void)
{
  return "1.0.0";
}

const char*
mrl_last_error(void)
{
  return last_error.c_str();
}

const char*
mrl_status_name(mrl_status status)
{
  switch (status) {
    case MRL_OK:
      return "ok";
    case MRL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case MRL_ERR_DOMAIN:
      return "domain error";
    case MRL_ERR_DATA:
      return "data error";
    case MRL_ERR_NUMERIC:
      return "numeric failure";
    case MRL_ERR_SELECTION:
      return "bandwidth selection failure";
    case MRL_ERR_CONFIG:
      return "config error";
    case MRL_ERR_IO:
      return "i/o error";
    case MRL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

mrl_status
mrl_parse_kernel(const char* name, mrl_kernel* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = mrl::parse_kernel_family(name) == mrl::KernelFamily::gaussian
             ? MRL_KERNEL_GAUSSIAN
             : MRL_KERNEL_EPANECHNIKOV;
  });
}

mrl_status
mrl_parse_transform(const char* name, mrl_transform* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const std::string s(name);
    if (s == "auto")
      *out = MRL_TRANSFORM_AUTO;
    else if (s == "log")
      *out = MRL_TRANSFORM_LOG;
    else if (s == "probit")
      *out = MRL_TRANSFORM_PROBIT;
    else if (s == "identity")
      *out = MRL_TRANSFORM_IDENTITY;
    else
      mrl::fail(mrl::ErrorCode::invalid_argument,
                "unknown transform '" + s + "' (expected log, probit or identity)");
  });
}

mrl_status
mrl_parse_method(const char* name, mrl_method* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    switch (mrl::parse_method(name)) {
      case mrl::Method::empirical:
        *out = MRL_METHOD_EMPIRICAL;
        break;
      case mrl::Method::naive_kernel:
        *out = MRL_METHOD_NAIVE;
        break;
      case mrl::Method::transformed1:
        *out = MRL_METHOD_TRANSFORMED1;
        break;
      case mrl::Method::transformed2:
        *out = MRL_METHOD_TRANSFORMED2;
        break;
    }
  });
}

const char*
mrl_method_name(mrl_method method)
{
  switch (method) {
    case MRL_METHOD_EMPIRICAL:
      return "empirical";
    case MRL_METHOD_NAIVE:
      return "naive";
    case MRL_METHOD_TRANSFORMED1:
      return "transformed1";
    case MRL_METHOD_TRANSFORMED2:
      return "transformed2";
  }
  return "unknown";
}

mrl_status
mrl_kernel_eval(mrl_kernel kernel, double x, double out[4])
{
  return guarded([&] {
    require(out, "out");
    const auto v = mrl::kernel_eval(mrl::Kernel(family_of(kernel)), x);
    out[0] = v.density;
    out[1] = v.cumulative;
    out[2] = v.survival;
    out[3] = v.integrated_survival;
  });
}

mrl_status
mrl_kernel_constants(mrl_kernel kernel, double* mu2, double* rho)
{
  return guarded([&] {
    const auto c = mrl::kernel_constants(mrl::Kernel(family_of(kernel)));
    if (mu2)
      *mu2 = c.mu2;
    if (rho)
      *rho = c.rho;
  });
}

mrl_status
mrl_sample_create(const double* values, size_t n, double lower, double upper, mrl_sample** out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (n > 0)
      require(values, "values");
    std::vector<double> v(values, values + n);
    *out = new mrl_sample{mrl::Sample(std::move(v), mrl::SupportInterval(lower, upper))};
  });
}

mrl_status
mrl_sample_read_csv(const char* path,
                    const char* column,
                    const double* support,
                    mrl_sample** out,
                    size_t* dropped)
{
  return guarded([&] {
    require(path, "path");
    require(column, "column");
    require(out, "out");
    *out = nullptr;
    auto col = mrl::read_csv_column(std::string(path), column);
    if (dropped)
      *dropped = col.dropped;
    const mrl::SupportInterval sup = support ? mrl::SupportInterval(support[0], support[1])
                                             : mrl::infer_support(col.values);
    try {
      *out = new mrl_sample{mrl::Sample(std::move(col.values), sup)};
    } catch (const mrl::Error& e) {
      mrl::fail(mrl::ErrorCode::data, e.what());
    }
  });
}

void
mrl_sample_destroy(mrl_sample* sample)
{
  delete sample;
}

size_t
mrl_sample_size(const mrl_sample* sample)
{
  return sample ? sample->sample.size() : 0;
}

const double*
mrl_sample_values(const mrl_sample* sample)
{
  return sample ? sample->sample.values().data() : nullptr;
}

void
mrl_sample_support(const mrl_sample* sample, double* lower, double* upper)
{
  if (!sample)
    return;
  if (lower)
    *lower = sample->sample.support().lower;
  if (upper)
    *upper = sample->sample.support().upper;
}

double
mrl_sample_mean(const mrl_sample* sample)
{
  return sample ? sample->sample.mean() : NAN;
}

mrl_status
mrl_select_bandwidth(const mrl_sample* sample,
                     mrl_method method,
                     mrl_kernel kernel,
                     mrl_transform transform,
                     double* h)
{
  return guarded([&] {
    require(sample, "sample");
    require(h, "h");
    const mrl::Method m = method_of(method);
    if (m == mrl::Method::empirical)
      mrl::fail(mrl::ErrorCode::invalid_argument, "the empirical estimator has no bandwidth");
    const mrl::Transform tr = m == mrl::Method::naive_kernel
                                ? mrl::Transform::identity()
                                : resolve_transform(transform, sample->sample.support());
    *h = mrl::select_bandwidth_lscv(sample->sample, tr, mrl::Kernel(family_of(kernel)));
  });
}

mrl_status
mrl_evaluate_point(const mrl_sample* sample, const mrl_estimator_spec* spec, double t, mrl_point* out)
{
  return guarded([&] {
    require(out, "out");
    const auto s = build_spec(sample, spec);
    const double grid[1] = {t};
    const auto c = mrl::evaluate_curve(s, sample->sample, grid);
    *out = mrl_point{c.survival[0], c.cum_survival[0], c.mrl[0],
                     static_cast<mrl_flag>(c.flags[0])};
  });
}

mrl_status
mrl_evaluate_curve(const mrl_sample* sample,
                   const mrl_estimator_spec* spec,
                   const double* grid,
                   size_t points,
                   mrl_curve** out)
{
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (points > 0)
      require(grid, "grid");
    const auto s = build_spec(sample, spec);
    auto c = mrl::evaluate_curve(s, sample->sample, std::span<const double>(grid, points));
    *out = new mrl_curve{std::move(c), s.bandwidth};
  });
}

mrl_status
mrl_boundary_limits(const mrl_sample* sample, const mrl_estimator_spec* spec, mrl_boundary* out)
{
  return guarded([&] {
    require(out, "out");
    const auto s = build_spec(sample, spec);
    if (s.method != mrl::Method::transformed1 && s.method != mrl::Method::transformed2)
      mrl::fail(mrl::ErrorCode::invalid_argument,
                "boundary limits are defined for the transformed estimators");
    const auto b = mrl::boundary_limits(sample->sample, s.transform, s.kernel, s.bandwidth);
    *out = mrl_boundary{to_point(b.lower_first), to_point(b.lower_second), to_point(b.upper)};
  });
}

void
mrl_curve_destroy(mrl_curve* curve)
{
  delete curve;
}

size_t
mrl_curve_size(const mrl_curve* curve)
{
  return curve ? curve->curve.size() : 0;
}

double
mrl_curve_bandwidth(const mrl_curve* curve)
{
  return curve ? curve->bandwidth : NAN;
}

mrl_status
mrl_curve_point(const mrl_curve* curve, size_t i, double* t, mrl_point* out)
{
  return guarded([&] {
    require(curve, "curve");
    if (i >= curve->curve.size())
      mrl::fail(mrl::ErrorCode::invalid_argument, "curve index out of range");
    const auto& c = curve->curve;
    if (t)
      *t = c.grid[i];
    if (out)
      *out = mrl_point{c.survival[i], c.cum_survival[i], c.mrl[i],
                       static_cast<mrl_flag>(c.flags[i])};
  });
}

mrl_status
mrl_curve_write_csv(const mrl_curve* curve, const char* path)
{
  return guarded([&] {
    require(curve, "curve");
    with_output(path, [&](std::ostream& os) { mrl::write_curve_csv(os, curve->curve); });
  });
}

mrl_status
mrl_curve_read_csv(const char* path, mrl_curve** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in)
      mrl::fail(mrl::ErrorCode::io, std::string("cannot open '") + path + "'");
    *out = new mrl_curve{mrl::read_curve_csv(in), NAN};
  });
}

mrl_status
mrl_curves_write_combined(const mrl_curve* const* curves,
                          const char* const* labels,
                          size_t count,
                          const char* path)
{
  return guarded([&] {
    require(curves, "curves");
    require(labels, "labels");
    std::vector<mrl::CurveEstimate> cs;
    std::vector<std::string> ls;
    for (size_t i = 0; i < count; ++i) {
      require(curves[i], "curve");
      require(labels[i], "label");
      cs.push_back(curves[i]->curve);
      ls.emplace_back(labels[i]);
    }
    with_output(path, [&](std::ostream& os) { mrl::write_combined_csv(os, cs, ls); });
  });
}

mrl_status
mrl_theory_eval(const char* distribution,
                mrl_transform transform,
                mrl_kernel kernel,
                mrl_method method,
                double h,
                size_t n,
                double t,
                mrl_theory_row* out)
{
  return guarded([&] {
    require(distribution, "distribution");
    require(out, "out");
    const auto dist = mrl::TrueDistribution::parse(distribution);
    const auto tr = resolve_transform(transform, dist.support());
    mrl::TheoryTarget target;
    switch (method_of(method)) {
      case mrl::Method::transformed1:
        target = mrl::TheoryTarget::mrl_first;
        break;
      case mrl::Method::transformed2:
        target = mrl::TheoryTarget::mrl_second;
        break;
      default:
        mrl::fail(mrl::ErrorCode::invalid_argument,
                  "theory is available for transformed1 and transformed2");
    }
    const auto b = mrl::eval_b(dist, tr, t);
    const auto bv =
      mrl::theoretical_bias_variance(dist, tr, mrl::Kernel(family_of(kernel)), h, n, t, target);
    *out = mrl_theory_row{t, b.b1, b.b2, b.b3, b.b4, b.b5, bv.bias, bv.variance, bv.covariance};
  });
}

mrl_status
mrl_distribution_mrl(const char* distribution, double t, double* out)
{
  return guarded([&] {
    require(distribution, "distribution");
    require(out, "out");
    *out = mrl::true_mrl(mrl::TrueDistribution::parse(distribution), t);
  });
}

mrl_status
mrl_distribution_support(const char* distribution, double* lower, double* upper)
{
  return guarded([&] {
    require(distribution, "distribution");
    const auto d = mrl::TrueDistribution::parse(distribution);
    if (lower)
      *lower = d.support().lower;
    if (upper)
      *upper = d.support().upper;
  });
}

mrl_status
mrl_distribution_moments(const char* distribution, double* mean, double* sd)
{
  return guarded([&] {
    require(distribution, "distribution");
    const auto d = mrl::TrueDistribution::parse(distribution);
    if (mean)
      *mean = d.mean();
    if (sd)
      *sd = d.sd();
  });
}

mrl_status
mrl_study_load(const char* path, mrl_study** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new mrl_study{mrl::load_study(path)};
  });
}

mrl_status
mrl_study_parse(const char* text, mrl_study** out)
{
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = nullptr;
    *out = new mrl_study{mrl::parse_study(text)};
  });
}

void
mrl_study_set_seed(mrl_study* study, uint64_t seed)
{
  if (!study)
    return;
  for (auto& c : study->study.configs)
    c.seed = seed;
}

void
mrl_study_set_threads(mrl_study* study, unsigned threads)
{
  if (!study)
    return;
  for (auto& c : study->study.configs)
    c.threads = threads;
}

void
mrl_study_destroy(mrl_study* study)
{
  delete study;
}

mrl_status
mrl_study_run(const mrl_study* study, mrl_study_result** out)
{
  return guarded([&] {
    require(study, "study");
    require(out, "out");
    *out = nullptr;
    auto r = std::make_unique<mrl_study_result>();
    r->result = mrl::run_study(study->study);
    r->table = mrl::format_study_table(r->result);
    *out = r.release();
  });
}

mrl_status
mrl_study_result_write_csv(const mrl_study_result* result, const char* path)
{
  return guarded([&] {
    require(result, "result");
    with_output(path, [&](std::ostream& os) { mrl::write_study_csv(os, result->result); });
  });
}

const char*
mrl_study_result_table(const mrl_study_result* result)
{
  return result ? result->table.c_str() : "";
}

void
mrl_study_result_destroy(mrl_study_result* result)
{
  delete result;
}

} // extern "C"
