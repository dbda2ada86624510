#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "pemix/errors.hpp"
#include "pemix/ingest.hpp"
#include "temp_dir.hpp"

using namespace pemix;

namespace {

std::vector<Record> make_records(std::initializer_list<std::pair<double, double>> rows) {
    std::vector<Record> out;
    for (const auto& [t, v] : rows) out.push_back({t, v, false});
    return out;
}

TimeSeries with_gaps(std::vector<double> v) { return TimeSeries(std::move(v)); }

constexpr double kMiss = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("parse_timestamp handles numbers and ISO-8601") {
    CHECK(parse_timestamp("12.5") == 12.5);
    CHECK(parse_timestamp(" 3 ") == 3.0);
    CHECK(parse_timestamp("1970-01-01T00:00:00Z") == 0.0);
    CHECK(parse_timestamp("1970-01-02 00:00") == 86400.0);
    CHECK(parse_timestamp("2019-03-01T12:30:15.5Z") == 1551443415.5);
    CHECK(parse_timestamp("2019-03-01T14:30:15+02:00") == 1551443415.0);
    CHECK(parse_timestamp("2019-03-01T07:30:15-05:00") == 1551443415.0);
    CHECK_FALSE(parse_timestamp("yesterday").has_value());
    CHECK_FALSE(parse_timestamp("2019-13-01T00:00:00").has_value());
    CHECK_FALSE(parse_timestamp("").has_value());
}

TEST_CASE("load_csv reads a headed two-column file") {
    test::TempDir dir;
    const auto path = dir.write("a.csv", "t,v\n0,1.0\n1,2.0\n");
    const auto rec = load_csv(path, {});
    REQUIRE(rec.size() == 2);
    CHECK(rec[0].time == 0.0);
    CHECK(rec[0].value == 1.0);
    CHECK(rec[1].time == 1.0);
    CHECK(rec[1].value == 2.0);
}

TEST_CASE("load_csv marks NaN and sentinel cells missing") {
    test::TempDir dir;
    const auto path = dir.write("b.csv", "# comment\n0,1.0\n1,NaN\n2,-999\n3,x\n4,\n5,6\n");
    CsvOptions opt;
    opt.missing_values = {-999.0};
    const auto rec = load_csv(path, opt);
    REQUIRE(rec.size() == 6);
    CHECK(rec[0].value.has_value());
    CHECK_FALSE(rec[1].value.has_value());
    CHECK_FALSE(rec[2].value.has_value());
    CHECK_FALSE(rec[3].value.has_value());
    CHECK_FALSE(rec[4].value.has_value());
    CHECK(rec[5].value == 6.0);
}

TEST_CASE("load_csv whitespace files, named columns and flags") {
    test::TempDir dir;
    const auto path = dir.write("c.txt",
                                "site  date                 value flag\n"
                                "MLO   2019-01-01T00:00:00Z 410.1 ...\n"
                                "MLO   2019-01-01T00:05:00Z 410.3 *..\n"
                                "MLO   2019-01-01T00:10:00Z 410.2 ...\n");
    CsvOptions opt;
    opt.time_column = "date";
    opt.value_column = "value";
    opt.flag_column = "flag";
    const auto rec = load_csv(path, opt);
    REQUIRE(rec.size() == 3);
    CHECK(rec[1].time - rec[0].time == 300.0);
    CHECK_FALSE(rec[0].suspect);
    CHECK(rec[1].suspect);
    CHECK(rec[2].value == 410.2);
    CHECK(native_spacing(rec) == 300.0);

    opt.header = HeaderPolicy::Absent;
    CHECK_THROWS_AS(load_csv(path, opt), InvalidInput);
}

TEST_CASE("load_csv errors") {
    test::TempDir dir;
    try {
        load_csv(dir.write("d.csv", "t,v\n0,1\n2,2\n1,3\n"), {});
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    CHECK_THROWS_AS(load_csv(dir.path() / "missing.csv", {}), IoError);
    CsvOptions wide;
    wide.value_column = "5";
    CHECK_THROWS_AS(load_csv(dir.write("e.csv", "0,1\n1,2\n"), wide), InvalidInput);
    CsvOptions named;
    named.value_column = "temperature";
    CHECK_THROWS_AS(load_csv(dir.write("f.csv", "t,v\n0,1\n"), named), InvalidInput);
    CHECK_THROWS_AS(load_csv(dir.write("g.csv", "t,v\n0,NaN\n1,NaN\n"), {}), InsufficientData);
    CHECK_THROWS_AS(load_csv(dir.write("h.csv", "t,v\n"), {}), InsufficientData);
    CHECK_THROWS_AS(load_csv(dir.write("i.csv", "t,v\n0,1\nlater,2\n"), {}), IoError);
}

TEST_CASE("regularize downsamples by nearest record") {
    std::vector<Record> five_min;
    for (int i = 0; i < 13; ++i) five_min.push_back({300.0 * i, static_cast<double>(i), false});
    const auto s = regularize(five_min, 900.0);
    REQUIRE(s.size() == 5);
    CHECK(s.values == std::vector<double>{0, 3, 6, 9, 12});
    CHECK(s.spacing == 900.0);
    CHECK(s.origin == 0.0);
    CHECK(s.unit == SpacingUnit::Seconds);

    const auto jitter = make_records({{0.0, 1.0}, {9.0, 2.0}, {10.4, 3.0}, {20.0, 4.0}});
    CHECK(regularize(jitter, 10.0).values == std::vector<double>{1.0, 3.0, 4.0});
}

TEST_CASE("regularize identity and empty cells") {
    const auto uniform = make_records({{5, 1}, {6, 2}, {7, 3}});
    const auto same = regularize(uniform, 1.0, SpacingUnit::Samples);
    CHECK(same.values == std::vector<double>{1, 2, 3});
    CHECK(same.origin == 5.0);

    const auto holed = make_records({{0, 1}, {1, 2}, {3, 4}});
    const auto s = regularize(holed, 1.0);
    REQUIRE(s.size() == 4);
    CHECK(std::isnan(s.values[2]));
    const auto [filled, report] = fill_gaps(s);
    CHECK(report.n_missing_filled == 1);
    CHECK(report.gap_spans == std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}});

    std::vector<Record> flagged = make_records({{0, 1}, {1, 2}, {2, 3}});
    flagged[1].suspect = true;
    const auto q = regularize(flagged, 1.0);
    CHECK(std::isnan(q.values[1]));
    CHECK(q.quality[1] == Quality::Suspect);
    const auto [qf, qr] = fill_gaps(q);
    CHECK(qr.n_suspect_removed == 1);
    CHECK(qr.n_missing_filled == 0);
    CHECK(qf.values[1] == 1.0);

    CHECK_THROWS_AS(regularize(uniform, 0.5), InvalidInput);
    CHECK_THROWS_AS(regularize(uniform, 0.0), InvalidInput);
    CHECK_THROWS_AS(regularize({}, 1.0), InsufficientData);
}

TEST_CASE("regularize output length follows the span") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> gap(0.5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Record> rec;
        double t = 100.0 * static_cast<double>(trial);
        const std::size_t n = 5 + rng() % 200;
        for (std::size_t i = 0; i < n; ++i) {
            rec.push_back({t, 1.0, false});
            t += gap(rng);
        }
        const double target = 2.0 + static_cast<double>(rng() % 5);
        const auto s = regularize(rec, target);
        const auto expected =
            static_cast<std::size_t>(std::floor((rec.back().time - rec.front().time) / target)) + 1;
        CHECK(s.size() == expected);
    }
}

TEST_CASE("fill_gaps examples") {
    const auto [a, ra] = fill_gaps(with_gaps({1, kMiss, kMiss, 4}));
    CHECK(a.values == std::vector<double>{1, 1, 1, 4});
    CHECK(ra.n_missing_filled == 2);
    CHECK(ra.gap_spans == std::vector<std::pair<std::size_t, std::size_t>>{{1, 2}});
    CHECK(a.quality == std::vector<Quality>{Quality::Good, Quality::Filled, Quality::Filled, Quality::Good});

    const auto [b, rb] = fill_gaps(with_gaps({1, 2, 3}));
    CHECK(b.values == std::vector<double>{1, 2, 3});
    CHECK(rb.n_missing_filled == 0);
    CHECK(rb.gap_spans.empty());

    try {
        fill_gaps(with_gaps({kMiss, 2}));
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("trim") != std::string::npos);
    }
}

TEST_CASE("fill_gaps leaves finite values and is idempotent") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + rng() % 100);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = i > 0 && rng() % 3 == 0 ? kMiss : static_cast<double>(rng() % 1000);
        }
        const auto [once, r1] = fill_gaps(with_gaps(v));
        for (double x : once.values) CHECK(std::isfinite(x));
        std::size_t filled = 0;
        for (auto q : once.quality) filled += q == Quality::Filled ? 1 : 0;
        CHECK(filled == r1.n_missing_filled);
        const auto [twice, r2] = fill_gaps(once);
        CHECK(twice.values == once.values);
        CHECK(twice.quality == once.quality);
        CHECK(r2.n_missing_filled == 0);
    }
}

TEST_CASE("prefilter examples") {
    const auto s = with_gaps({3, 1, 4, 1, 5});
    CHECK(prefilter(s, PrefilterMethod::None).values == s.values);
    CHECK(prefilter(with_gaps({0, 100, 0}), PrefilterMethod::MovingMedian, 3).values[1] == 0.0);
    CHECK(prefilter(with_gaps({0, 100, 0}), PrefilterMethod::MovingMedian, 3).values[0] == 50.0);
    const auto c = with_gaps(std::vector<double>(20, 2.5));
    CHECK(prefilter(c, PrefilterMethod::MovingMedian, 5).values == c.values);
    CHECK(prefilter(s, PrefilterMethod::MovingMedian, 5).values == std::vector<double>{3, 2, 3, 2.5, 4});

    CHECK_THROWS_AS(prefilter(s, PrefilterMethod::MovingMedian, 4), InvalidInput);
    CHECK_THROWS_AS(prefilter(s, PrefilterMethod::MovingMedian, 1), InvalidInput);
    CHECK(parse_prefilter_method("moving_median") == PrefilterMethod::MovingMedian);
    CHECK(parse_prefilter_method("none") == PrefilterMethod::None);
    CHECK_THROWS_AS(parse_prefilter_method("lowpass"), InvalidInput);
}
