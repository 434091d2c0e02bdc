// Deterministic synthetic merged tables for tests.
//
// Price columns follow a smooth daily cycle plus a slow drift (so the close
// is predictable from its own history); sentiment columns are seeded noise
// within each scorer's range, independent of the price by construction.

#ifndef SENTIFORGE_TESTS_SYNTHETIC_HPP
#define SENTIFORGE_TESTS_SYNTHETIC_HPP

#include <cmath>
#include <random>
#include <vector>

#include "sentiforge/fuse.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::testing {

inline std::vector<fuse::FeatureRow> synthetic_merged(std::size_t n_rows,
                                                      std::uint64_t seed = 42,
                                                      bool constant_price = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> signed_unit(-1.0, 1.0);

    std::vector<fuse::FeatureRow> rows(n_rows);
    const std::int64_t h0 = utc::parse_timestamp("2018-01-01T00:00:00Z");
    double prev_close = 13000.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        fuse::FeatureRow& row = rows[r];
        row.timestamp = h0 + static_cast<std::int64_t>(r) * utc::kSecondsPerHour;

        const double phase = static_cast<double>(r);
        double close = constant_price
                           ? 13000.0
                           : 13000.0 + 900.0 * std::sin(2.0 * M_PI * phase / 24.0) +
                                 150.0 * std::sin(2.0 * M_PI * phase / 160.0);
        const double open = prev_close;
        const double high = std::max(open, close) * 1.001;
        const double low = std::min(open, close) * 0.999;
        prev_close = close;

        row.values[0] = open;
        row.values[1] = high;
        row.values[2] = low;
        row.values[3] = close;
        row.values[4] = constant_price ? 100.0 : 100.0 + 50.0 * unit(rng);
        row.values[5] = close / 60.0;   // LTC tracks BTC loosely
        row.values[6] = 40.0 + 20.0 * unit(rng);
        row.values[7] = close / 18.0;   // ETH
        row.values[8] = 60.0 + 30.0 * unit(rng);

        for (std::size_t base : {std::size_t{9}, std::size_t{16}}) {
            const double flair = constant_price ? 0.0 : signed_unit(rng);
            const double pos = 0.5 * unit(rng);
            const double neg = 0.5 * unit(rng);
            row.values[base + 0] = flair;
            row.values[base + 1] = constant_price ? 0.0 : signed_unit(rng);
            row.values[base + 2] = unit(rng);
            row.values[base + 3] = pos;
            row.values[base + 4] = neg;
            row.values[base + 5] = std::max(0.0, 1.0 - pos - neg);
            row.values[base + 6] = constant_price ? 0.0 : signed_unit(rng);
        }
    }
    return rows;
}

}  // namespace sentiforge::testing

#endif  // SENTIFORGE_TESTS_SYNTHETIC_HPP
