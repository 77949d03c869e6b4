#include "mbm/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mbm/errors.hpp"

namespace mbm {

namespace {

void check_k(int k) {
    if (k < 1) throw ParameterError("k must be >= 1, got " + std::to_string(k));
}

}  // namespace

double mean_dmin_upper_bound(int k) {
    check_k(k);
    return std::sqrt(std::numbers::pi) * std::exp2(-0.5 * k);
}

double qam_rayleigh_min_distance(int k) {
    check_k(k);
    return 0.5 * std::sqrt(6.0 * std::numbers::pi / (std::exp2(k) - 1.0));
}

double mbm_qam_distance_ratio_bound(int k) {
    check_k(k);
    return std::sqrt(2.0 / 3.0) * std::sqrt(1.0 - std::exp2(-k));
}

double paired_min_pdf(int k, double d) {
    check_k(k);
    if (d < 0.0) throw ParameterError("pdf argument must be nonnegative");
    return std::exp2(k - 1) * d * std::exp(-std::exp2(k - 2) * d * d);
}

double paired_min_cdf(int k, double d) {
    check_k(k);
    if (d < 0.0) throw ParameterError("cdf argument must be nonnegative");
    return 1.0 - std::exp(-std::exp2(k - 2) * d * d);
}

}  // namespace mbm
