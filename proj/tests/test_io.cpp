#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pemix/errors.hpp"
#include "pemix/io.hpp"
#include "temp_dir.hpp"

using namespace pemix;

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("index spans round-trip") {
    const std::vector<std::pair<std::size_t, std::size_t>> spans{{1, 2}, {7, 7}, {10, 40}};
    CHECK(format_spans(spans) == "1-2;7-7;10-40");
    CHECK(parse_spans("1-2;7-7;10-40") == spans);
    CHECK(parse_spans("").empty());
    CHECK_THROWS_AS(parse_spans("3-1"), IoError);
    CHECK_THROWS_AS(parse_spans("x"), IoError);
}

TEST_CASE("Metadata keeps insertion order and overwrites keys") {
    Metadata m;
    m.set("b", 1);
    m.set("a", std::string("x"));
    m.set("b", 2.5);
    m.set("flag", true);
    REQUIRE(m.entries().size() == 3);
    CHECK(m.entries()[0].first == "b");
    CHECK(m.get("b") == "2.5");
    CHECK(m.get("flag") == "true");
    CHECK_FALSE(m.get("zzz").has_value());
}

TEST_CASE("series CSV round-trip keeps values, spacing and quality") {
    test::TempDir dir;
    TimeSeries s(oracle::uniform_series(257, 42, -1e3, 1e3), 900.0, SpacingUnit::Seconds, 1.5e9);
    s.quality.assign(s.size(), Quality::Good);
    s.quality[3] = s.quality[4] = Quality::Filled;
    s.quality[100] = Quality::Suspect;
    Metadata extra;
    extra.set("seed", 7);
    const auto path = dir.path() / "s.csv";
    write_series_csv(path, s, extra);

    const auto text = test::slurp(path);
    CHECK(text.rfind("# pemix series v1\n", 0) == 0);
    CHECK(text.find("# quality_filled=3-4\n") != std::string::npos);
    CHECK(text.find("\ntime,value\n") != std::string::npos);

    const auto back = read_series_csv(path);
    CHECK(back.series.values == s.values);
    CHECK(back.series.spacing == s.spacing);
    CHECK(back.series.origin == s.origin);
    CHECK(back.series.unit == s.unit);
    CHECK(back.series.quality == s.quality);
    CHECK(back.metadata.get("seed") == "7");

    write_series_csv(dir.path() / "s2.csv", back.series, back.metadata);
    CHECK(test::slurp(dir.path() / "s2.csv") == text);
}

TEST_CASE("trace CSV round-trip") {
    test::TempDir dir;
    PETraceSet set;
    set.tau_min = 2;
    set.tau_max = 4;
    for (int tau = 2; tau <= 4; ++tau) {
        PETrace t;
        t.tau = tau;
        t.anchors = {99, 100, 101};
        t.values = oracle::uniform_series(3, static_cast<std::uint64_t>(tau));
        set.traces.push_back(t);
    }
    const auto path = dir.path() / "t.csv";
    write_traces_csv(path, set);
    const auto text = test::slurp(path);
    CHECK(text.find("anchor,pe_tau2,pe_tau3,pe_tau4\n") != std::string::npos);
    const auto back = read_traces_csv(path);
    CHECK(back.traces.tau_min == 2);
    CHECK(back.traces.tau_max == 4);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back.traces.traces[k].anchors == set.traces[k].anchors);
        CHECK(back.traces.traces[k].values == set.traces[k].values);
    }
}

TEST_CASE("malformed files raise IoError") {
    test::TempDir dir;
    CHECK_THROWS_AS(read_series_csv(dir.path() / "none.csv"), IoError);
    CHECK_THROWS_AS(read_series_csv(dir.write("a.csv", "time,value\n0,1\n1,oops\n")), IoError);
    CHECK_THROWS_AS(read_series_csv(dir.write("b.csv", "time,value\n0,1,2\n")), IoError);
    CHECK_THROWS_AS(read_traces_csv(dir.write("c.csv", "time,value\n0,1\n")), IoError);
    CHECK_THROWS_AS(read_traces_csv(dir.write("d.csv", "anchor,pe_tau1,pe_tau3\n0,1,1\n")), IoError);
    CHECK_THROWS_AS(read_traces_csv(dir.write("e.csv", "anchor,pe_tau1\n")), IoError);
    CHECK_THROWS_AS(read_traces_csv(dir.write("f.csv", "anchor,pe_tau1\n1.5,0.2\n")), IoError);
    CHECK_THROWS_AS(write_series_csv(dir.write("plain", "x") / "s.csv", TimeSeries(std::vector<double>{1.0})), IoError);
}

TEST_CASE("series files accept missing values and no metadata") {
    test::TempDir dir;
    const auto back = read_series_csv(dir.write("m.csv", "time,value\n10,1\n12,nan\n14,-nan\n"));
    CHECK(back.series.size() == 3);
    CHECK(back.series.spacing == 2.0);
    CHECK(back.series.origin == 10.0);
    CHECK(std::isnan(back.series.values[1]));
    CHECK(std::isnan(back.series.values[2]));
    CHECK_THROWS_AS(back.series.validate_clean(), InvalidInput);
}

TEST_CASE("sweep and reversal writers") {
    test::TempDir dir;
    BinSweepResult sweep{{1, 2, 3}, {0.5, 0.0, NAN}, {true, true, false}, 2, true};
    write_sweep_csv(dir.path() / "w.csv", sweep);
    const auto text = test::slurp(dir.path() / "w.csv");
    CHECK(text.find("# recommended_j=2\n") != std::string::npos);
    CHECK(text.find("j,r_bar,data_sufficient\n1,0.5,1\n2,0,1\n3,nan,0\n") != std::string::npos);

    ReversalSeries rev{{5, 6}, {0.0, 1.0}, 0.5};
    write_reversal_csv(dir.path() / "r.csv", rev, {}, "r_bar_window");
    const auto rtext = test::slurp(dir.path() / "r.csv");
    CHECK(rtext.find("# r_bar=0.5\n") != std::string::npos);
    CHECK(rtext.find("anchor,r_bar_window\n5,0\n6,1\n") != std::string::npos);

    const auto meta = cleaning_metadata({2, 1, {{4, 5}}});
    CHECK(meta.get("n_missing_filled") == "2");
    CHECK(meta.get("gap_spans") == "4-5");
}
