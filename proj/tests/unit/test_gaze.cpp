#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gazeaes/corpus/text.hpp"
#include "gazeaes/gaze/binning.hpp"
#include "gazeaes/gaze/heatmap.hpp"
#include "gazeaes/gaze/records.hpp"

using namespace gazeaes::gaze;
using gazeaes::corpus::Essay;

namespace {

GazeRecord fixated(const std::string& reader, std::size_t ia, double dt, double ffd, long long essay = 1) {
    GazeRecord r;
    r.essay_id = essay;
    r.reader_id = reader;
    r.ia_index = ia;
    r.dwell_time = dt;
    r.first_fixation = ffd;
    r.run_count = dt > 0 ? 1 : 0;
    r.skip = dt > 0 ? 0 : 1;
    return r;
}

Essay essay_with(long long id, std::string_view text) {
    Essay e;
    e.essay_id = id;
    e.set_id = 3;
    e.sentences = gazeaes::corpus::segment(text);
    return e;
}

// Independent restatement of the six cases as interval membership.
int reference_bin(double fv, double mu, double sd) {
    if (fv == 0) return 0;
    const double lo[] = {0, mu - sd, mu - 0.5 * sd, mu + 0.5 * sd, mu + sd};
    int hits = 0, bin = -1;
    for (int k = 0; k < 5; ++k) {
        const double upper = k < 4 ? lo[k + 1] : std::numeric_limits<double>::infinity();
        const bool inside = k == 0 ? (fv > 0 && fv <= lo[1]) : (fv > lo[k] && fv <= upper);
        if (inside) {
            ++hits;
            bin = k + 1;
        }
    }
    return hits == 1 ? bin : -hits;
}

}  // namespace

TEST(ReaderStats, ConstantValuesHaveZeroSpread) {
    std::vector<GazeRecord> rs{fixated("r", 0, 100, 50), fixated("r", 1, 100, 50), fixated("r", 2, 100, 50)};
    const auto s = reader_stats(rs).at("r");
    EXPECT_DOUBLE_EQ(s.dwell_time.mean, 100);
    EXPECT_DOUBLE_EQ(s.dwell_time.sd, 0);
    EXPECT_EQ(s.records, 3u);
}

TEST(ReaderStats, PopulationStandardDeviation) {
    std::vector<GazeRecord> rs{fixated("r", 0, 0, 0), fixated("r", 1, 200, 100)};
    const auto s = reader_stats(rs).at("r");
    EXPECT_DOUBLE_EQ(s.dwell_time.mean, 100);
    EXPECT_DOUBLE_EQ(s.dwell_time.sd, 100);
    EXPECT_DOUBLE_EQ(s.first_fixation.sd, 50);
}

TEST(ReaderStats, ReadersArePartitioned) {
    std::vector<GazeRecord> rs{fixated("a", 0, 10, 5), fixated("b", 0, 30, 5), fixated("a", 1, 30, 5)};
    std::vector<std::string> warnings;
    const auto table = reader_stats(rs, {"a", "b", "c"}, &warnings);
    EXPECT_EQ(table.size(), 2u);
    EXPECT_DOUBLE_EQ(table.at("a").dwell_time.mean, 20);
    EXPECT_DOUBLE_EQ(table.at("b").dwell_time.mean, 30);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("reader c"), std::string::npos);
}

TEST(BinFixation, DocumentedPoints) {
    EXPECT_EQ(bin_fixation(0, 100, 40), 0);
    EXPECT_EQ(bin_fixation(100, 100, 40), 3);
    EXPECT_EQ(bin_fixation(141, 100, 40), 5);
    EXPECT_EQ(bin_fixation(140, 100, 40), 4);
    EXPECT_EQ(bin_fixation(59, 100, 40), 1);
}

TEST(BinFixation, EveryBoundaryBelongsToLowerBin) {
    // mu=100, sd=40: edges at 60, 80, 120, 140.
    EXPECT_EQ(bin_fixation(60, 100, 40), 1);
    EXPECT_EQ(bin_fixation(60.0000001, 100, 40), 2);
    EXPECT_EQ(bin_fixation(80, 100, 40), 2);
    EXPECT_EQ(bin_fixation(80.0000001, 100, 40), 3);
    EXPECT_EQ(bin_fixation(120, 100, 40), 3);
    EXPECT_EQ(bin_fixation(120.0000001, 100, 40), 4);
    EXPECT_EQ(bin_fixation(140, 100, 40), 4);
    EXPECT_EQ(bin_fixation(1e-9, 100, 40), 1);
}

TEST(BinFixation, ZeroSpreadTakenLiterally) {
    // With sd = 0 every edge sits at mu, so FV = mu satisfies the first
    // positive case and anything above mu falls through to the last.
    EXPECT_EQ(bin_fixation(100, 100, 0), 1);
    EXPECT_EQ(bin_fixation(50, 100, 0), 1);
    EXPECT_EQ(bin_fixation(100.5, 100, 0), 5);
    EXPECT_EQ(bin_fixation(0, 100, 0), 0);
    EXPECT_EQ(bin_fixation(3, 0, 0), 5);
}

TEST(BinFixation, NegativeLowerEdgeMakesBinOneUnreachable) {
    // mu=10, sd=15: mu - sd = -5, mu - sd/2 = 2.5.
    EXPECT_EQ(bin_fixation(0.001, 10, 15), 2);
    EXPECT_EQ(bin_fixation(2.5, 10, 15), 2);
    EXPECT_EQ(bin_fixation(3, 10, 15), 3);
    for (double fv = 0.01; fv < 100; fv += 0.37) EXPECT_NE(bin_fixation(fv, 10, 15), 1);
}

TEST(BinFixation, RejectsNegativeInputs) {
    EXPECT_THROW(bin_fixation(-1, 100, 40), std::invalid_argument);
    EXPECT_THROW(bin_fixation(10, 100, -1), std::invalid_argument);
}

TEST(BinFixation, CasesPartitionAndAreMonotone) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> mu_d(0, 400), sd_d(1e-3, 200), fv_d(0, 800);
    for (int i = 0; i < 20000; ++i) {
        const double mu = mu_d(gen), sd = sd_d(gen);
        double a = fv_d(gen), b = fv_d(gen);
        if (a > b) std::swap(a, b);
        const int ba = bin_fixation(a, mu, sd);
        ASSERT_EQ(ba, reference_bin(a, mu, sd)) << a << " " << mu << " " << sd;
        if (a > 0) {
            ASSERT_LE(ba, bin_fixation(b, mu, sd));
        }
    }
}

TEST(BinRunCount, CapsAtFive) {
    EXPECT_EQ(bin_run_count(0), 0);
    EXPECT_EQ(bin_run_count(4), 4);
    EXPECT_EQ(bin_run_count(5), 5);
    EXPECT_EQ(bin_run_count(7), 5);
    for (int rc = 0; rc < 50; ++rc) EXPECT_EQ(bin_run_count(rc), std::min(rc, 5));
    EXPECT_THROW(bin_run_count(-1), std::invalid_argument);
}

TEST(BinAll, SkipAndRegressionBins) {
    std::vector<Essay> essays{essay_with(1, "one two three")};
    auto skipped = fixated("r", 0, 0, 0);
    auto regress = fixated("r", 1, 200, 100);
    regress.is_regression = 1;
    auto plain = fixated("r", 2, 100, 50);
    std::vector<GazeRecord> rs{skipped, regress, plain};
    const auto result = bin_all(rs, reader_stats(rs), essays);
    ASSERT_EQ(result.rejected_records, 0u);
    const auto& g = result.binned.at({1, "r"});
    EXPECT_EQ(g.tokens[0].bin(GazeAttribute::skip), 1);
    EXPECT_EQ(g.tokens[0].bin(GazeAttribute::dwell_time), 0);
    EXPECT_EQ(g.tokens[1].bin(GazeAttribute::is_regression), 1);
    EXPECT_DOUBLE_EQ(g.tokens[1].unit_target(GazeAttribute::is_regression), 1.0);
    EXPECT_EQ(g.tokens[1].bin(GazeAttribute::run_count), 1);
}

TEST(BinAll, UnitTargetsAreMultiplesOfStep) {
    TokenBins t;
    t.bins = {3, 5, 1, 2, 0};
    EXPECT_DOUBLE_EQ(t.unit_target(GazeAttribute::dwell_time), 0.6);
    EXPECT_DOUBLE_EQ(t.unit_target(GazeAttribute::first_fixation), 1.0);
    EXPECT_DOUBLE_EQ(t.unit_target(GazeAttribute::is_regression), 1.0);
    EXPECT_DOUBLE_EQ(t.unit_target(GazeAttribute::run_count), 0.4);
    EXPECT_DOUBLE_EQ(t.unit_target(GazeAttribute::skip), 0.0);
}

TEST(BinAll, MisalignedRecordsRejected) {
    std::vector<Essay> essays{essay_with(1, "only two")};
    std::vector<GazeRecord> rs{fixated("r", 0, 100, 50), fixated("r", 5, 100, 50), fixated("r", 0, 100, 50, 99),
                               fixated("ghost", 0, 100, 50)};
    ReaderStatsTable stats = reader_stats({rs[0]});
    const auto result = bin_all(rs, stats, essays);
    EXPECT_EQ(result.rejected_records, 3u);
    ASSERT_EQ(result.diagnostics.size(), 3u);
    EXPECT_NE(result.diagnostics[0].find("out of range"), std::string::npos);
    const auto& g = result.binned.at({1, "r"});
    EXPECT_TRUE(g.tokens[0].present);
    EXPECT_FALSE(g.tokens[1].present);
    EXPECT_EQ(g.present_count(), 1u);
}

TEST(BinAll, OtherReadersNeverAffectBins) {
    std::vector<Essay> essays{essay_with(1, "a b c d e f")};
    std::vector<GazeRecord> mine, others;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(1, 500);
    for (std::size_t i = 0; i < 6; ++i) {
        const double dt = d(gen);
        mine.push_back(fixated("me", i, dt, dt / 2));
        others.push_back(fixated("you", i, d(gen), 1));
    }
    auto all = mine;
    all.insert(all.end(), others.begin(), others.end());
    const auto base = bin_all(all, reader_stats(all), essays).binned.at({1, "me"});
    std::shuffle(others.begin(), others.end(), gen);
    for (auto& r : others) r.dwell_time = d(gen);
    auto shuffled = others;
    shuffled.insert(shuffled.end(), mine.begin(), mine.end());
    const auto again = bin_all(shuffled, reader_stats(shuffled), essays).binned.at({1, "me"});
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(base.tokens[i].bins, again.tokens[i].bins);
}

TEST(BinAll, AttachGazeToEssays) {
    std::vector<Essay> essays{essay_with(1, "x y"), essay_with(2, "z")};
    std::vector<GazeRecord> rs{fixated("a", 0, 10, 5), fixated("b", 1, 20, 5)};
    EXPECT_EQ(attach_gaze(essays, bin_all(rs, reader_stats(rs), essays)), 1u);
    EXPECT_EQ(essays[0].gaze.size(), 2u);
    EXPECT_TRUE(essays[1].gaze.empty());
}

TEST(GazeCsv, ParsesAndValidates) {
    std::istringstream csv(
        "essay_id,reader_id,ia_index,token,dwell_time_ms,first_fixation_ms,is_regression,run_count,skip\n"
        "1,r1,0,the,200,120,0,1,0\n"
        "1,r1,1,\",\",0,0,0,0,1\n"
        "1,r1,2,cat,100,150,0,1,0\n"
        "1,r1,3,sat,0,0,0,1,1\n"
        "1,r1,4,on,abc,0,0,0,0\n"
        "1,r1,5\n");
    const auto result = load_gaze_csv(csv, "gaze.csv");
    ASSERT_EQ(result.records.size(), 2u);
    EXPECT_EQ(result.records[1].token, ",");
    EXPECT_EQ(result.rejected_rows, 4u);
    EXPECT_NE(result.diagnostics[0].find("gaze.csv:4"), std::string::npos);
    EXPECT_NE(result.diagnostics[0].find("first fixation"), std::string::npos);

    std::ostringstream out;
    write_gaze_csv(out, result.records);
    std::istringstream back(out.str());
    const auto again = load_gaze_csv(back);
    ASSERT_EQ(again.records.size(), 2u);
    EXPECT_EQ(again.records[1].token, ",");
    EXPECT_EQ(again.records[0].dwell_time, 200);
}

TEST(GazeCsv, EmptyFileIsEmpty) {
    std::istringstream csv("");
    EXPECT_TRUE(load_gaze_csv(csv).records.empty());
}

TEST(Readers, NativeFilter) {
    std::istringstream meta("reader_id,native,age\nr1,1,23\nr2,no,30\n");
    const auto table = load_reader_metadata(meta);
    EXPECT_TRUE(table.at("r1").native);
    EXPECT_FALSE(table.at("r2").native);
    EXPECT_EQ(table.at("r2").attributes.at("age"), "30");

    std::vector<GazeRecord> rs{fixated("r1", 0, 1, 1), fixated("r2", 0, 1, 1), fixated("r3", 0, 1, 1)};
    EXPECT_EQ(filter_readers(rs, ReaderFilter::parse("all"), table).size(), 3u);
    const auto native = filter_readers(rs, ReaderFilter::parse("native_only"), table);
    ASSERT_EQ(native.size(), 1u);
    EXPECT_EQ(native[0].reader_id, "r1");
    EXPECT_EQ(filter_readers(rs, ReaderFilter::parse("r2, r3"), table).size(), 2u);
    EXPECT_EQ(ReaderFilter::parse("r3,r2").to_string(), "r2,r3");
}

TEST(Heatmap, CsvAndText) {
    Essay e = essay_with(7, "Hi, there");
    BinnedGaze g;
    g.essay_id = 7;
    g.reader_id = "r";
    g.tokens.resize(3);
    g.tokens[0].present = true;
    g.tokens[0].bins = {4, 3, 0, 2, 0};
    std::ostringstream csv, text;
    write_heatmap_csv(csv, e, g);
    EXPECT_EQ(csv.str(), "position,token,DT,FFD,IR,RC,Skip\n0,hi,4,3,0,2,0\n1,\",\",,,,,\n2,there,,,,,\n");
    write_heatmap_text(text, e, g, GazeAttribute::dwell_time);
    EXPECT_EQ(text.str(), "essay 7 reader r DT\nhi[4] ,[-] there[-]\n");
    g.tokens.pop_back();
    EXPECT_THROW(write_heatmap_csv(csv, e, g), std::invalid_argument);
}
