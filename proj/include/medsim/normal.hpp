#pragma once

namespace medsim {

// Standard normal density.
double normal_pdf(double z);

// Standard normal CDF, evaluated through erfc for accuracy in both tails.
double normal_cdf(double z);

// Inverse of the standard normal CDF.  Acklam's rational approximation
// followed by one Halley refinement step; absolute error is far below 1e-9
// across (0, 1).  Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

}  // namespace medsim
