#include "otfbandit/csv_io.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace otf {
namespace {

std::size_t count_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

TEST(Csv, OneRunThreeRounds) {
    testing::TempDir dir;
    std::vector<RegretTrace> traces{{0, {0.0, 0.25, 0.5}}};
    const auto stats = summarize(traces);
    emit_csv(traces, stats, dir.path());
    EXPECT_EQ(count_lines(dir.path() / kTraceFile), 4u);
    EXPECT_EQ(count_lines(dir.path() / kSummaryFile), 4u);
    std::ifstream in(dir.path() / kTraceFile);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "run_id,t,cum_regret");
}

TEST(Csv, RoundTripIsLossless) {
    testing::TempDir dir;
    Rng rng(5);
    std::uniform_real_distribution<double> step(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<RegretTrace> traces;
        for (std::size_t r = 0; r < 1 + trial % 4; ++r) {
            RegretTrace tr{r, {}};
            double acc = 0.0;
            for (int t = 0; t < 50; ++t) tr.cumulative.push_back(acc += step(rng) / 3.0);
            traces.push_back(tr);
        }
        const auto stats = summarize(traces);
        emit_csv(traces, stats, dir.path());
        EXPECT_EQ(read_traces_csv(dir.path() / kTraceFile), traces);
        const auto back = read_summary_csv(dir.path() / kSummaryFile);
        EXPECT_EQ(back.mean, stats.mean);
        EXPECT_EQ(back.stddev, stats.stddev);
    }
}

TEST(Csv, UnwritablePathLeavesNothingBehind) {
    testing::TempDir dir;
    const auto target = dir.path() / "no_such_dir" / "traces.csv";
    std::vector<RegretTrace> traces{{0, {1.0}}};
    EXPECT_THROW(write_traces_csv(traces, target), std::runtime_error);
    EXPECT_FALSE(std::filesystem::exists(target));
    EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
}

TEST(Csv, ErrorMessageNamesPath) {
    testing::TempDir dir;
    const auto target = dir.path() / "missing" / "summary.csv";
    try {
        write_summary_csv(SummaryStats{}, target);
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find(target.string()), std::string::npos);
    }
}

TEST(Csv, RejectsMalformedInput) {
    testing::TempDir dir;
    EXPECT_THROW(read_traces_csv(dir.write("a.csv", "run,t,x\n")), std::runtime_error);
    EXPECT_THROW(read_traces_csv(dir.write("b.csv", "run_id,t,cum_regret\n0,1,abc\n")), std::runtime_error);
    EXPECT_THROW(read_traces_csv(dir.write("c.csv", "run_id,t,cum_regret\n0,2,1.0\n")), std::runtime_error);
}

TEST(Metadata, RoundTrip) {
    testing::TempDir dir;
    const Metadata meta{{"seed", "7"}, {"tau_m", "0.634"}, {"delay", "geometric:100"}};
    write_metadata(meta, dir.path() / kMetadataFile);
    EXPECT_EQ(read_metadata(dir.path() / kMetadataFile), meta);
}

} // namespace
} // namespace otf
