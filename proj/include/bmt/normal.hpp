#pragma once

namespace bmt {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile. Wichura's AS241 double-precision rational
// approximations; absolute error well below 1e-12 across (0, 1).
// Throws InvalidArgument for p outside (0, 1).
double normal_quantile(double p);

}  // namespace bmt
