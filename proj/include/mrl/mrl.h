#ifndef MRL_H
#define MRL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MRL_BUILDING_LIBRARY)
#    define MRL_API __declspec(dllexport)
#  else
#    define MRL_API __declspec(dllimport)
#  endif
#else
#  define MRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mrl_status
{
  MRL_OK = 0,
  MRL_ERR_INVALID_ARGUMENT = 1,
  MRL_ERR_DOMAIN = 2,
  MRL_ERR_DATA = 3,
  MRL_ERR_NUMERIC = 4,
  MRL_ERR_SELECTION = 5,
  MRL_ERR_CONFIG = 6,
  MRL_ERR_IO = 7,
  MRL_ERR_INTERNAL = 8
} mrl_status;

typedef enum mrl_kernel
{
  MRL_KERNEL_EPANECHNIKOV = 0,
  MRL_KERNEL_GAUSSIAN = 1
} mrl_kernel;

/* MRL_TRANSFORM_AUTO picks probit on bounded supports and log otherwise. */
typedef enum mrl_transform
{
  MRL_TRANSFORM_AUTO = 0,
  MRL_TRANSFORM_LOG = 1,
  MRL_TRANSFORM_PROBIT = 2,
  MRL_TRANSFORM_IDENTITY = 3
} mrl_transform;

typedef enum mrl_method
{
  MRL_METHOD_EMPIRICAL = 0,
  MRL_METHOD_NAIVE = 1,
  MRL_METHOD_TRANSFORMED1 = 2,
  MRL_METHOD_TRANSFORMED2 = 3
} mrl_method;

typedef enum mrl_flag
{
  MRL_FLAG_OK = 0,
  MRL_FLAG_TAIL_DEGENERATE = 1,
  MRL_FLAG_ERROR = 2
} mrl_flag;

typedef struct mrl_sample mrl_sample;
typedef struct mrl_curve mrl_curve;
typedef struct mrl_study mrl_study;
typedef struct mrl_study_result mrl_study_result;

/* bandwidth <= 0 selects h by least-squares cross-validation on the scale
   the estimator smooths on (X for the naive estimator, g^-1(X) for the
   transformed ones). Ignored by the empirical estimator. */
typedef struct mrl_estimator_spec
{
  mrl_method method;
  mrl_kernel kernel;
  mrl_transform transform;
  double bandwidth;
} mrl_estimator_spec;

typedef struct mrl_point
{
  double survival;
  double cum_survival;
  double mrl;
  mrl_flag flag;
} mrl_point;

typedef struct mrl_boundary
{
  mrl_point lower_first;
  mrl_point lower_second;
  mrl_point upper;
} mrl_boundary;

typedef struct mrl_theory_row
{
  double t;
  double b1, b2, b3, b4, b5;
  double bias;
  double variance;
  double covariance;
} mrl_theory_row;

MRL_API const char* mrl_version(void);

/* Message of the last failed call on this thread; "" when none. */
MRL_API const char* mrl_last_error(void);
MRL_API const char* mrl_status_name(mrl_status status);

MRL_API mrl_status mrl_parse_kernel(const char* name, mrl_kernel* out);
MRL_API mrl_status mrl_parse_transform(const char* name, mrl_transform* out);
MRL_API mrl_status mrl_parse_method(const char* name, mrl_method* out);
MRL_API const char* mrl_method_name(mrl_method method);

/* out[0..3] = K(x), W(x), V(x), integral of V over (x, inf). */
MRL_API mrl_status mrl_kernel_eval(mrl_kernel kernel, double x, double out[4]);
MRL_API mrl_status mrl_kernel_constants(mrl_kernel kernel, double* mu2, double* rho);

/* ---- samples ---------------------------------------------------------- */

MRL_API mrl_status mrl_sample_create(const double* values,
                                     size_t n,
                                     double lower,
                                     double upper,
                                     mrl_sample** out);

/* support == NULL infers the support from the data. dropped (optional)
   receives the number of blank or non-finite cells skipped. */
MRL_API mrl_status mrl_sample_read_csv(const char* path,
                                       const char* column,
                                       const double* support,
                                       mrl_sample** out,
                                       size_t* dropped);
MRL_API void mrl_sample_destroy(mrl_sample* sample);
MRL_API size_t mrl_sample_size(const mrl_sample* sample);
/* Sorted ascending; valid until the sample is destroyed. */
MRL_API const double* mrl_sample_values(const mrl_sample* sample);
MRL_API void mrl_sample_support(const mrl_sample* sample, double* lower, double* upper);
MRL_API double mrl_sample_mean(const mrl_sample* sample);

/* ---- estimation ------------------------------------------------------- */

MRL_API mrl_status mrl_select_bandwidth(const mrl_sample* sample,
                                        mrl_method method,
                                        mrl_kernel kernel,
                                        mrl_transform transform,
                                        double* h);

MRL_API mrl_status mrl_evaluate_point(const mrl_sample* sample,
                                      const mrl_estimator_spec* spec,
                                      double t,
                                      mrl_point* out);

/* grid must be sorted ascending. Points that cannot be evaluated are
   flagged MRL_FLAG_ERROR rather than failing the call. */
MRL_API mrl_status mrl_evaluate_curve(const mrl_sample* sample,
                                      const mrl_estimator_spec* spec,
                                      const double* grid,
                                      size_t points,
                                      mrl_curve** out);

/* Limits of the transformed estimators at the ends of the support. */
MRL_API mrl_status mrl_boundary_limits(const mrl_sample* sample,
                                       const mrl_estimator_spec* spec,
                                       mrl_boundary* out);

MRL_API void mrl_curve_destroy(mrl_curve* curve);
MRL_API size_t mrl_curve_size(const mrl_curve* curve);
MRL_API double mrl_curve_bandwidth(const mrl_curve* curve);
MRL_API mrl_status mrl_curve_point(const mrl_curve* curve, size_t i, double* t, mrl_point* out);

/* path NULL or "-" writes to standard output. */
MRL_API mrl_status mrl_curve_write_csv(const mrl_curve* curve, const char* path);
MRL_API mrl_status mrl_curve_read_csv(const char* path, mrl_curve** out);
MRL_API mrl_status mrl_curves_write_combined(const mrl_curve* const* curves,
                                             const char* const* labels,
                                             size_t count,
                                             const char* path);

/* ---- asymptotic theory ------------------------------------------------ */

/* distribution: "exponential:1", "gamma:2,3", "beta:3,2", "uniform:0,1",
   "weibull:3,2", "absnormal". method: TRANSFORMED1 or TRANSFORMED2. */
MRL_API mrl_status mrl_theory_eval(const char* distribution,
                                   mrl_transform transform,
                                   mrl_kernel kernel,
                                   mrl_method method,
                                   double h,
                                   size_t n,
                                   double t,
                                   mrl_theory_row* out);

MRL_API mrl_status mrl_distribution_mrl(const char* distribution, double t, double* out);
MRL_API mrl_status mrl_distribution_support(const char* distribution,
                                            double* lower,
                                            double* upper);
MRL_API mrl_status mrl_distribution_moments(const char* distribution,
                                            double* mean,
                                            double* sd);

/* ---- simulation studies ------------------------------------------------ */

MRL_API mrl_status mrl_study_load(const char* path, mrl_study** out);
MRL_API mrl_status mrl_study_parse(const char* text, mrl_study** out);
MRL_API void mrl_study_set_seed(mrl_study* study, uint64_t seed);
MRL_API void mrl_study_set_threads(mrl_study* study, unsigned threads);
MRL_API void mrl_study_destroy(mrl_study* study);

MRL_API mrl_status mrl_study_run(const mrl_study* study, mrl_study_result** out);
MRL_API mrl_status mrl_study_result_write_csv(const mrl_study_result* result, const char* path);
/* Valid until the result is destroyed. */
MRL_API const char* mrl_study_result_table(const mrl_study_result* result);
MRL_API void mrl_study_result_destroy(mrl_study_result* result);

#ifdef __cplusplus
}
#endif

#endif
