#pragma once

namespace mbm {

// Closed-form quantities for open-loop MBM constellations built from
// i.i.d. CN(0,1) states. All take the spectral efficiency k (bits per
// point, M = 2^k) and throw ParameterError for k < 1.

// Upper bound on E[d_min]: sqrt(pi) * 2^(-k/2). Equality holds for the
// disjoint-pair surrogate statistic.
double mean_dmin_upper_bound(int k);

// Minimum distance of the received unit-energy M-QAM constellation over
// Rayleigh fading: E[|h|] * sqrt(6/(M-1)) = 0.5 * sqrt(6*pi/(2^k - 1)).
double qam_rayleigh_min_distance(int k);

// Bound on the MBM-to-QAM minimum distance ratio:
// sqrt(2/3) * sqrt(1 - 2^(-k)); increases toward sqrt(2/3) ~ 0.8165.
double mbm_qam_distance_ratio_bound(int k);

// pdf of the disjoint-pair surrogate: 2^(k-1) * d * exp(-2^(k-2) d^2).
// For k=1 this is the Rayleigh pdf d * exp(-d^2/2) of a single pair.
double paired_min_pdf(int k, double d);

// Matching cdf: 1 - exp(-2^(k-2) d^2).
double paired_min_cdf(int k, double d);

}  // namespace mbm
