#ifndef STYVAR_SPECIAL_HPP
#define STYVAR_SPECIAL_HPP

namespace styvar::special {

// Self-contained special functions backing every p value in the toolkit.
// Targets: |error| <= 1e-12 relative for log_gamma, <= 1e-10 absolute for
// the regularized functions and CDFs over the statistic ranges we use
// (|t|, |z| <= 40, df <= 1e7).

double log_gamma(double x);

// Regularized incomplete beta I_x(a, b).
double reg_incomplete_beta(double x, double a, double b);

// Regularized lower incomplete gamma P(a, x) and upper Q(a, x) = 1 - P.
double reg_lower_gamma(double a, double x);
double reg_upper_gamma(double a, double x);

double normal_cdf(double x);             // standard normal
double normal_sf(double x);              // 1 - cdf, accurate in the far tail
double t_cdf(double x, double df);
double chi_square_cdf(double x, double df);
double f_cdf(double x, double df1, double df2);

// Survival functions; preferred for p values so tiny tails keep precision.
double t_sf(double x, double df);
double chi_square_sf(double x, double df);
double f_sf(double x, double df1, double df2);

// Quantile functions, solved by bisection on the CDFs above.
double normal_quantile(double p);
double t_quantile(double p, double df);
double f_quantile(double p, double df1, double df2);

}  // namespace styvar::special

#endif
