#include "sgcauc/normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "sgcauc/errors.hpp"

namespace sgcauc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kBoundaryRho = 1e-14;

// Phi(z) for any z, including infinities.
double phi_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Gauss-Legendre half-rules on [-1, 1] (positive abscissae only).
struct HalfRule {
  const double* w;
  const double* x;
  int size;
};

constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384,
                                       0.4679139345726904};
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647,
                                       0.2386191860831970};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183,
                                        0.1600783285433464,  0.2031674267230659,
                                        0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750,
                                        0.7699026741943050, 0.5873179542866171,
                                        0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20 = {
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
    0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
    0.1491729864726037,  0.1527533871307259};
constexpr std::array<double, 10> kX20 = {
    0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
    0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
    0.2277858511416451, 0.07652652113349733};

HalfRule rule_for(double abs_rho) {
  if (abs_rho < 0.3) return {kW6.data(), kX6.data(), 3};
  if (abs_rho < 0.75) return {kW12.data(), kX12.data(), 6};
  return {kW20.data(), kX20.data(), 10};
}

// Upper orthant P(Z1 > h, Z2 > k), Genz (2004) "Numerical computation of
// rectangular bivariate and trivariate normal and t probabilities".
double bvn_upper(double h, double k, double r) {
  if (h == INFINITY || k == INFINITY) return 0.0;
  if (h == -INFINITY) return k == -INFINITY ? 1.0 : phi_cdf(-k);
  if (k == -INFINITY) return phi_cdf(-h);
  if (r == 0.0) return phi_cdf(-h) * phi_cdf(-k);

  const HalfRule rule = rule_for(std::abs(r));
  double hk = h * k;
  double bvn = 0.0;

  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (int i = 0; i < rule.size; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sign * rule.x[i]));
        bvn += rule.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return std::clamp(bvn * asr / kTwoPi + phi_cdf(-h) * phi_cdf(-k), 0.0, 1.0);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 80.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
      bvn = a * std::exp(asr) *
            (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
    }
    if (hk > -100.0) {
      const double b = std::sqrt(bs);
      const double sp = std::sqrt(kTwoPi) * phi_cdf(-b / a);
      bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
    }
    a /= 2.0;
    double sum = 0.0;
    for (int i = 0; i < rule.size; ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double xs = std::pow(a * (1.0 + sign * rule.x[i]), 2);
        asr = -(bs / xs + hk) / 2.0;
        if (asr > -100.0) {
          const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
          const double rs = std::sqrt(1.0 - xs);
          const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
          sum += rule.w[i] * std::exp(asr) * (sp - ep);
        }
      }
    }
    bvn = (a * sum - bvn) / kTwoPi;
  }

  if (r > 0.0) {
    bvn += phi_cdf(-std::max(h, k));
  } else if (h >= k) {
    bvn = -bvn;
  } else {
    const double span = h < 0.0 ? phi_cdf(k) - phi_cdf(h) : phi_cdf(-h) - phi_cdf(-k);
    bvn = span - bvn;
  }
  return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double std_normal_cdf(double z) {
  if (!std::isfinite(z)) throw DomainError("std_normal_cdf: argument must be finite");
  return phi_cdf(z);
}

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(kTwoPi);
}

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("std_normal_quantile: probability must lie in (0, 1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double bivariate_normal_cdf(double a, double b, double rho) {
  if (std::isnan(a) || std::isnan(b) || std::isnan(rho)) {
    throw DomainError("bivariate_normal_cdf: NaN argument");
  }
  if (std::abs(rho) > 1.0) throw DomainError("bivariate_normal_cdf: |rho| > 1");

  if (a == -INFINITY || b == -INFINITY) return 0.0;
  if (a == INFINITY) return phi_cdf(b);
  if (b == INFINITY) return phi_cdf(a);

  if (rho >= 1.0 - kBoundaryRho) return std::min(phi_cdf(a), phi_cdf(b));
  if (rho <= -1.0 + kBoundaryRho) return std::max(0.0, phi_cdf(a) + phi_cdf(b) - 1.0);

  return bvn_upper(-a, -b, rho);
}

double bivariate_normal_pdf(double a, double b, double rho) {
  const double one_minus = (1.0 - rho) * (1.0 + rho);
  const double q = (a * a - 2.0 * rho * a * b + b * b) / one_minus;
  return std::exp(-0.5 * q) / (kTwoPi * std::sqrt(one_minus));
}

}  // namespace sgcauc
