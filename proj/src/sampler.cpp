#include "sedop/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "sedop/errors.hpp"
#include "sedop/rng.hpp"

namespace sedop {

InverseCdfSampler InverseCdfSampler::build(const Measure1D& m, int tablePoints) {
    if (tablePoints < 4) throw SamplerFailure("sampler: table needs at least 4 points");
    const Interval iv = m.massInterval();
    const int n = tablePoints;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = iv.a + (iv.b - iv.a) * static_cast<double>(i) /
                                                     static_cast<double>(n - 1);

    // Simpson accumulation of the density, normalized afterwards so the
    // tabulated CDF spans [0, 1] over the mass interval.
    std::vector<long double> acc(static_cast<std::size_t>(n));
    acc[0] = 0.0L;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = xs[static_cast<std::size_t>(i)];
        const double b = xs[static_cast<std::size_t>(i + 1)];
        const long double fa = m.density(a);
        const long double fm = m.density(0.5 * (a + b));
        const long double fb = m.density(b);
        acc[static_cast<std::size_t>(i + 1)] =
            acc[static_cast<std::size_t>(i)] +
            static_cast<long double>(b - a) / 6.0L * (fa + 4.0L * fm + fb);
    }
    const long double total = acc[static_cast<std::size_t>(n - 1)];
    if (!(total > 0.0L)) throw SamplerFailure("sampler: CDF accumulation is not positive");
    std::vector<double> cdf(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) cdf[static_cast<std::size_t>(i)] = static_cast<double>(
        acc[static_cast<std::size_t>(i)] / total);
    cdf.front() = 0.0;
    cdf.back() = 1.0;
    return from_table(std::move(xs), std::move(cdf));
}

InverseCdfSampler InverseCdfSampler::from_table(std::vector<double> xs, std::vector<double> cdf) {
    InverseCdfSampler s;
    s.xs_ = std::move(xs);
    s.cdf_ = std::move(cdf);
    s.init();
    return s;
}

void InverseCdfSampler::init() {
    if (xs_.size() != cdf_.size()) throw SamplerFailure("sampler: grid and CDF sizes differ");
    if (xs_.size() < 4) throw SamplerFailure("sampler: table needs at least 4 points");
    const std::size_t n = xs_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(xs_[i + 1] > xs_[i])) throw SamplerFailure("sampler: grid is not strictly increasing");
        if (!(cdf_[i + 1] > cdf_[i]))
            throw SamplerFailure("sampler: CDF is not strictly increasing");
    }
    if (!std::isfinite(cdf_.front()) || !std::isfinite(cdf_.back()))
        throw SamplerFailure("sampler: CDF endpoints are not finite");

    // Tangents dx/du of the quantile function: secant averages clamped into
    // the region that keeps the cubic monotone.
    std::vector<double> sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (xs_[i + 1] - xs_[i]) / (cdf_[i + 1] - cdf_[i]);
    tan_.assign(n, 0.0);
    tan_.front() = sec.front();
    tan_.back() = sec.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double t = 0.5 * (sec[i - 1] + sec[i]);
        t = std::min(t, 3.0 * std::min(sec[i - 1], sec[i]));
        tan_[i] = t;
    }
}

double InverseCdfSampler::sample(double u) const {
    u = std::min(std::max(u, cdf_.front()), cdf_.back());
    std::size_t hi = static_cast<std::size_t>(
        std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    if (hi == 0) hi = 1;
    if (hi >= cdf_.size()) hi = cdf_.size() - 1;
    const std::size_t lo = hi - 1;
    const double du = cdf_[hi] - cdf_[lo];
    const double t = (u - cdf_[lo]) / du;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * xs_[lo] + h10 * du * tan_[lo] + h01 * xs_[hi] + h11 * du * tan_[hi];
}

double InverseCdfSampler::operator()(std::mt19937_64& g) const {
    double u = rng::uniform01(g);
    if (u <= 0.0) u = 0x1.0p-53;
    return sample(u);
}

} // namespace sedop
