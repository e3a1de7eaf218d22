/* Compiles the public header as C and drives a short estimate. */
#include "mrl/mrl.h"

#include <math.h>
#include <stdio.h>

int
main(void)
{
  const double x[] = {0.4, 1.1, 2.5, 3.0, 0.7};
  mrl_sample* s = NULL;
  mrl_curve* c = NULL;
  mrl_estimator_spec spec = {MRL_METHOD_TRANSFORMED2, MRL_KERNEL_EPANECHNIKOV, MRL_TRANSFORM_AUTO, 0.5};
  const double grid[] = {0.5, 1.0, 2.0};
  mrl_point p;
  double t;

  if (mrl_sample_create(x, 5, 0.0, INFINITY, &s) != MRL_OK) {
    fprintf(stderr, "create: %s\n", mrl_last_error());
    return 1;
  }
  if (mrl_evaluate_curve(s, &spec, grid, 3, &c) != MRL_OK) {
    fprintf(stderr, "curve: %s\n", mrl_last_error());
    return 1;
  }
  if (mrl_curve_point(c, 1, &t, &p) != MRL_OK || !(p.mrl > 0.0) || t != 1.0)
    return 1;
  mrl_curve_destroy(c);
  mrl_sample_destroy(s);
  printf("ok\n");
  return 0;
}
