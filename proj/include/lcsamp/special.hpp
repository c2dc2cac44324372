#pragma once

namespace lcsamp {

/// Upper incomplete gamma function Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt
/// for s > 0, x >= 0.  Relative error <= 1e-12 over the supported range.
/// Throws domain_error when the result overflows a double; callers needing
/// large s or x should use the log form.
double upper_incomplete_gamma(double s, double x);

/// log Gamma(s, x); never overflows for s > 0, x >= 0 representable inputs.
double log_upper_incomplete_gamma(double s, double x);

/// Standard normal CDF.
double normal_cdf(double t);

/// Standard normal density.
double normal_pdf(double t);

}  // namespace lcsamp
