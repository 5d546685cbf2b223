#pragma once
#include <random>
#include <vector>

#include "sedop/measure.hpp"

namespace sedop {

// Inverse-transform sampler from a tabulated CDF with monotone cubic
// interpolation; the interpolant preserves monotonicity, so distinct
// uniforms map to ordered samples.
class InverseCdfSampler {
  public:
    // Tabulates the CDF of m on its mass interval.
    static InverseCdfSampler build(const Measure1D& m, int tablePoints = 2048);

    // Construct from an externally supplied table. Throws SamplerFailure when
    // the table is not a strictly increasing CDF over a strictly increasing
    // grid. Exists so table-validation failures can be exercised directly.
    static InverseCdfSampler from_table(std::vector<double> xs, std::vector<double> cdf);

    // Quantile at u; u is clamped into the tabulated range.
    double sample(double u) const;

    double operator()(std::mt19937_64& g) const;

    const std::vector<double>& grid() const { return xs_; }
    const std::vector<double>& cdf() const { return cdf_; }

  private:
    InverseCdfSampler() = default;
    void init();  // validates and computes tangents

    std::vector<double> xs_, cdf_, tan_;
};

} // namespace sedop
