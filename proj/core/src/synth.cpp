#include "kdtw/synth.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "kdtw/knn_eval.hpp"

namespace kdtw {

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

}  // namespace

double SynthParams::height() const { return peak_height > 0.0 ? peak_height : 2.0 * std::log(static_cast<double>(m_total)); }

void SynthParams::validate() const {
    if (m_total < 5 || m_total % 4 != 1) throw std::invalid_argument("synthetic curves need complexity 4m+1 with m >= 1");
    if (!(epsilon >= 0.0) || !(epsilon < height())) throw std::invalid_argument("synthetic curves need 0 <= epsilon < L");
    if (peaks.empty()) throw std::invalid_argument("synthetic curves need at least one peak count");
    for (std::size_t l : peaks) {
        if (l > 2 * m_hat()) throw std::invalid_argument("peak count exceeds the 2m even indices");
    }
}

std::size_t synthetic_k(std::size_t m) {
    return static_cast<std::size_t>(std::floor(2.5 * std::log(static_cast<double>(m))));
}

Curve gen_type_a(const SynthParams& params, std::size_t peaks, std::uint64_t seed) {
    params.validate();
    const std::size_t half = 2 * params.m_hat();
    if (peaks > half) throw std::invalid_argument("gen_type_a: more peaks than even indices");
    std::mt19937_64 rng(seed);
    std::vector<double> values(params.m_total, 0.0);
    // 1-based even index 2i is 0-based 2i - 1.
    for (std::size_t i = 1; i <= half; ++i) values[2 * i - 1] = uniform(rng, 0.0, params.epsilon);
    std::vector<std::size_t> slots(half);
    std::iota(slots.begin(), slots.end(), 1);
    seeded_shuffle(slots, rng());
    for (std::size_t p = 0; p < peaks; ++p) values[2 * slots[p] - 1] = params.height();
    return Curve::from_values(values);
}

Curve gen_type_b(const SynthParams& params, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    const double height = params.height();
    std::vector<double> values(params.m_total, 0.0);
    for (std::size_t i = 1; i + 1 < params.m_total; ++i) {
        values[i] = i % 2 == 1 ? uniform(rng, height, height + params.epsilon) : height;
    }
    return Curve::from_values(values);
}

Curve gen_type_c(const SynthParams& params, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    std::vector<double> values(params.m_total, 0.0);
    for (std::size_t i = 1; i < params.m_total; i += 2) values[i] = uniform(rng, 0.0, params.epsilon);
    return Curve::from_values(values);
}

LabeledDataset synthetic_dataset(const SynthParams& params) {
    params.validate();
    std::vector<LabeledCurve> items;
    items.reserve(3 * params.count_per_type);
    for (std::size_t i = 0; i < params.count_per_type; ++i) {
        const std::size_t peaks = params.peaks[i % params.peaks.size()];
        items.push_back({"A" + std::to_string(i), 0, gen_type_a(params, peaks, derive_seed(params.seed, 3 * i))});
    }
    for (std::size_t i = 0; i < params.count_per_type; ++i) {
        items.push_back({"B" + std::to_string(i), 1, gen_type_b(params, derive_seed(params.seed, 3 * i + 1))});
    }
    for (std::size_t i = 0; i < params.count_per_type; ++i) {
        items.push_back({"C" + std::to_string(i), 2, gen_type_c(params, derive_seed(params.seed, 3 * i + 2))});
    }
    return LabeledDataset(std::move(items));
}

CurveTriple triangle_fixture(std::size_t m, double epsilon) {
    if (m < 3) throw std::invalid_argument("triangle_fixture: m must be >= 3");
    std::vector<double> sigma(m, 0.0);
    std::vector<double> tau(m, epsilon);
    tau.front() = 0.0;
    tau.back() = 0.0;
    std::vector<double> upsilon(m, 0.0);
    upsilon[1] = epsilon;
    return {Curve::from_values(sigma), Curve::from_values(tau), Curve::from_values(upsilon)};
}

namespace {

CurvePair gadgets(std::size_t m_hat, double height, const double (&v)[4], const double (&w)[4]) {
    if (m_hat == 0) throw std::invalid_argument("gadget curves need m_hat >= 1");
    if (!(height > 0.0)) throw std::invalid_argument("gadget curves need L > 0");
    std::vector<double> sigma;
    std::vector<double> tau;
    for (std::size_t t = 0; t < m_hat; ++t) {
        const double offset = 4.0 * static_cast<double>(t) * height;
        for (int c = 0; c < 4; ++c) {
            sigma.push_back(offset + v[c]);
            tau.push_back(offset + w[c]);
        }
    }
    return {Curve::from_values(sigma), Curve::from_values(tau)};
}

}  // namespace

CurvePair k_gadget_curves(std::size_t m_hat, double height) {
    const double L = height;
    const double e = L / 10.0;
    const double v[4] = {L, L - e / 2, L + e / 2, L + 3 * e / 2};
    const double w[4] = {0.0, -e / 2, L - e / 2, L + e / 2};
    return gadgets(m_hat, height, v, w);
}

CurvePair d_gadget_curves(std::size_t m_hat, double height) {
    const double L = height;
    const double e = L / 10.0;
    const double v[4] = {L, L + e / 2, L + e / 2, L + 3 * e / 2};
    const double w[4] = {0.0, 0.0, L - e / 2, L - e / 2};
    return gadgets(m_hat, height, v, w);
}

LongShortFixture long_short_fixture(std::size_t m, double epsilon) {
    if (m < 5) throw std::invalid_argument("long_short_fixture: m must be >= 5");
    std::vector<double> sigma{0.0, -epsilon};
    sigma.insert(sigma.end(), m - 5, 2.0);
    sigma.insert(sigma.end(), {3.0, 1.0, 2.0});
    std::vector<double> tau{1.0, 1.0 - epsilon, 3.0 + epsilon * epsilon};
    tau.insert(tau.end(), m - 5, 1.0);
    tau.insert(tau.end(), {2.0, 2.0});
    return {Curve::from_values(sigma), Curve::from_values(tau), m < 1000};
}

}  // namespace kdtw
