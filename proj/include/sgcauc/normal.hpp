#pragma once

namespace sgcauc {

/// Standard normal CDF. Throws DomainError on non-finite input.
double std_normal_cdf(double z);

/// Standard normal density.
double std_normal_pdf(double z);

/// Inverse of std_normal_cdf on the open interval (0, 1).
double std_normal_quantile(double u);

/// P(Z1 <= a, Z2 <= b) for a standard bivariate normal with correlation rho.
///
/// Uses Genz's BVND algorithm (Drezner-Wesolowsky Gauss-Legendre scheme
/// with the asymptotic expansion for |rho| >= 0.925), accurate to about
/// 1e-15. a and b may be +-infinity; |rho| within 1e-14 of 1 is evaluated
/// with the exact Frechet-bound formulas.
double bivariate_normal_cdf(double a, double b, double rho);

/// Standard bivariate normal density at (a, b) with correlation |rho| < 1.
double bivariate_normal_pdf(double a, double b, double rho);

}  // namespace sgcauc
