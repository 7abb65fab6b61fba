#pragma once

namespace boinit {

// Standard normal helpers. The CDF goes through erfc so that the lower tail
// keeps full relative precision.

double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;
/// Upper tail 1 - Phi(z), accurate for large positive z.
double normal_sf(double z) noexcept;
/// Inverse CDF on (0, 1); returns -inf/+inf at the endpoints.
double normal_quantile(double p);

}  // namespace boinit
