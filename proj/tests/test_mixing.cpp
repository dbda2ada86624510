#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "pemix/errors.hpp"
#include "pemix/generators.hpp"
#include "pemix/mixing.hpp"
#include "pemix/reversal.hpp"

using namespace pemix;

TEST_CASE("ansatz_window clips at the series ends") {
    const auto head = ansatz_window(0, 2, 10);
    CHECK(head.first == 0);
    CHECK(head.last == 3);
    const auto tail = ansatz_window(9, 2, 10);
    CHECK(tail.first == 7);
    CHECK(tail.last == 10);
    for (std::size_t n = 2; n < 8; ++n) {
        const auto w = ansatz_window(n, 2, 10);
        CHECK(w.last - w.first == 5);
        CHECK(w.first == n - 2);
    }
}

TEST_CASE("mixing_ansatz with k=0 or constant input is the identity") {
    const TimeSeries s(oracle::uniform_series(200, 1), 0.5, SpacingUnit::Seconds, 3.0);
    const auto out = mixing_ansatz(s, {0, 77});
    CHECK(out.values == s.values);
    CHECK(out.spacing == s.spacing);
    CHECK(out.origin == s.origin);

    const TimeSeries c(std::vector<double>(50, 0.1));
    for (std::size_t k : {1, 3, 10}) CHECK(mixing_ansatz(c, {k, 5}).values == c.values);
}

TEST_CASE("mixing_ansatz is reproducible and seed-dependent") {
    const TimeSeries s(oracle::uniform_series(500, 2));
    const auto a = mixing_ansatz(s, {3, 42});
    const auto b = mixing_ansatz(s, {3, 42});
    const auto c = mixing_ansatz(s, {3, 43});
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.size() == s.size());
}

TEST_CASE("mixing_ansatz errors") {
    CHECK_THROWS_AS(mixing_ansatz(TimeSeries(std::vector<double>{1, 2, 3, 4, 5, 6}), {3, 1}), InsufficientData);
    CHECK_NOTHROW(mixing_ansatz(TimeSeries(std::vector<double>{1, 2, 3, 4, 5, 6, 7}), {3, 1}));
    CHECK_THROWS_AS(mixing_ansatz(TimeSeries(std::vector<double>{1, NAN, 3, 4}), {1, 1}), InvalidInput);
}

TEST_CASE("mixing_ansatz is mean-preserving in expectation") {
    const std::vector<double> x{3.0, -1.0, 4.0, 1.0, -5.0, 9.0, 2.0, 6.0, -5.0, 3.0, 5.0, 8.0};
    const TimeSeries s(x);
    constexpr std::size_t k = 2;
    constexpr int kSeeds = 400;
    std::vector<double> sum(x.size(), 0.0);
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto out = mixing_ansatz(s, {k, static_cast<std::uint64_t>(seed)});
        for (std::size_t i = 0; i < x.size(); ++i) sum[i] += out.values[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [first, last] = ansatz_window(i, k, x.size());
        const double m = static_cast<double>(last - first);
        double mu = 0.0;
        for (std::size_t t = first; t < last; ++t) mu += x[t];
        mu /= m;
        double ss = 0.0;
        for (std::size_t t = first; t < last; ++t) ss += (x[t] - mu) * (x[t] - mu);
        const double sigma = std::sqrt(ss / (m - 1.0));
        const double se = sigma / std::sqrt(static_cast<double>(kSeeds));
        CHECK(std::abs(sum[i] / kSeeds - mu) <= 3.0 * se);
    }
}

TEST_CASE("NormalStream has unit variance") {
    NormalStream z(2024);
    double s1 = 0.0, s2 = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = z.next();
        s1 += v;
        s2 += v * v;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("bin_average examples") {
    CHECK(bin_average(TimeSeries(std::vector<double>{1, 2, 3, 4, 5, 6}), 3).values == std::vector<double>{2, 5});
    const auto seven = bin_average(TimeSeries(std::vector<double>{1, 2, 3, 4, 5, 6, 7}, 2.0), 2);
    CHECK(seven.values == std::vector<double>{1.5, 3.5, 5.5});
    CHECK(seven.spacing == 4.0);

    const TimeSeries s(oracle::uniform_series(101, 6), 0.25, SpacingUnit::Meters, 10.0);
    const auto same = bin_average(s, 1);
    CHECK(same.values == s.values);
    CHECK(same.spacing == s.spacing);
    CHECK(same.unit == SpacingUnit::Meters);
    CHECK(same.origin == 10.0);

    CHECK_THROWS_AS(bin_average(s, 0), InvalidInput);
    CHECK_THROWS_AS(bin_average(s, 102), InvalidInput);
}

TEST_CASE("bin_average properties") {
    const auto x = oracle::uniform_series(240, 13);
    const TimeSeries s(x);
    for (std::size_t j : {2, 3, 5, 7}) {
        const auto b = bin_average(s, j);
        CHECK(bin_average(b, 1).values == b.values);

        // Shift by an exactly representable constant so the sums stay exact.
        std::vector<double> shifted(x.size());
        const auto grid = [](double v) { return std::round(v * 1024.0) / 1024.0; };
        std::vector<double> qx(x.size());
        std::transform(x.begin(), x.end(), qx.begin(), grid);
        std::transform(qx.begin(), qx.end(), shifted.begin(), [](double v) { return v + 8.0; });
        const auto bq = bin_average(TimeSeries(qx), j);
        const auto bs = bin_average(TimeSeries(shifted), j);
        for (std::size_t i = 0; i < bq.size(); ++i) CHECK(bs.values[i] == doctest::Approx(bq.values[i] + 8.0).epsilon(1e-15));
    }
}

TEST_CASE("bin_average keeps the worst quality flag of each bin") {
    TimeSeries s(std::vector<double>{1, 2, 3, 4, 5, 6});
    s.quality = {Quality::Good, Quality::Filled, Quality::Good, Quality::Good, Quality::Suspect, Quality::Filled};
    const auto b = bin_average(s, 2);
    CHECK(b.quality == std::vector<Quality>{Quality::Filled, Quality::Good, Quality::Suspect});
}

TEST_CASE("recommend_bin_size picks the first zero, else the first minimum") {
    const auto plateau = recommend_bin_size({1, 2, 3, 4}, {0.8, 0.5, 0.5, 0.7}, {true, true, true, true});
    CHECK(plateau.recommended_j == 2);
    CHECK_FALSE(plateau.achieved_zero);

    const auto zero = recommend_bin_size({1, 2, 3, 4}, {0.8, 0.3, 0.0, 0.0}, {true, true, true, true});
    CHECK(zero.recommended_j == 3);
    CHECK(zero.achieved_zero);

    const auto tiny = recommend_bin_size({1, 2}, {0.4, 5e-13}, {true, true});
    CHECK(tiny.recommended_j == 2);
    CHECK(tiny.achieved_zero);

    const auto first = recommend_bin_size({2, 3, 4}, {0.1, 0.2, 0.05}, {true, true, true});
    CHECK(first.recommended_j == 2);

    const auto falling = recommend_bin_size({1, 2, 3}, {0.9, 0.6, 0.3}, {true, true, true});
    CHECK(falling.recommended_j == 3);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const auto gaps = recommend_bin_size({1, 2, 3, 4}, {0.6, 0.2, 0.4, nan}, {true, true, true, false});
    CHECK(gaps.recommended_j == 2);

    CHECK_THROWS_AS(recommend_bin_size({1, 2}, {nan, nan}, {false, false}), InsufficientData);
    CHECK_THROWS_AS(recommend_bin_size({1, 2}, {0.1}, {true, true}), InvalidInput);
}

TEST_CASE("bin_sweep on an unmixed deterministic series recommends j=1") {
    std::vector<double> ramp(3000);
    std::iota(ramp.begin(), ramp.end(), 0.0);
    PEConfig c;
    c.window = 500;
    const auto sweep = bin_sweep(TimeSeries(ramp), 1, 5, c);
    CHECK(sweep.bin_sizes == std::vector<std::size_t>{1, 2, 3, 4, 5});
    CHECK(sweep.recommended_j == 1);
    CHECK(sweep.achieved_zero);
    CHECK(sweep.r_bars[0] == 0.0);
}

TEST_CASE("bin_sweep marks short binned series and fails when none fit") {
    const TimeSeries s(oracle::uniform_series(1000, 3));
    PEConfig c;
    c.window = 400;
    const auto sweep = bin_sweep(s, 1, 4, c);
    CHECK(sweep.data_sufficient == std::vector<bool>{true, true, false, false});
    CHECK(std::isnan(sweep.r_bars[2]));
    CHECK(std::isnan(sweep.r_bars[3]));
    CHECK((sweep.recommended_j == 1 || sweep.recommended_j == 2));

    CHECK_THROWS_AS(bin_sweep(s, 3, 6, c), InsufficientData);
    CHECK_THROWS_AS(bin_sweep(s, 0, 3, c), InvalidInput);
    CHECK_THROWS_AS(bin_sweep(s, 3, 2, c), InvalidInput);
}

TEST_CASE("small Lorenz run: the ansatz reverses the stride ordering") {
    LorenzParams p;
    p.steps = 60000;
    const auto raw = lorenz_series(p);
    PEConfig c;
    const auto raw_rev = reversal_series(multi_tau_pe(raw, c));
    CHECK(raw_rev.r_bar <= 0.02);
    const auto mixed = mixing_ansatz(raw, {3, 1});
    const auto mixed_rev = reversal_series(multi_tau_pe(mixed, c));
    CHECK(mixed_rev.r_bar >= 0.98);
}
