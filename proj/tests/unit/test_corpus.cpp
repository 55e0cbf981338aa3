#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gazeaes/corpus/embeddings.hpp"
#include "gazeaes/corpus/loader.hpp"
#include "gazeaes/corpus/text.hpp"
#include "gazeaes/corpus/vocabulary.hpp"

using namespace gazeaes::corpus;

namespace {

Essay essay_from(std::string_view text, long long id = 1) {
    Essay e;
    e.essay_id = id;
    e.set_id = 3;
    e.sentences = segment(text);
    return e;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("gazeaes_corpus_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(Scores, Set3TopScoreNormalizesToOne) {
    const auto sets = asap_essay_sets();
    EXPECT_DOUBLE_EQ(normalize_score(3, sets.at(3)), 1.0);
    EXPECT_DOUBLE_EQ(normalize_score(0, sets.at(3)), 0.0);
}

TEST(Scores, Set5MidpointIsHalf) { EXPECT_DOUBLE_EQ(normalize_score(2, asap_essay_sets().at(5)), 0.5); }

TEST(Scores, DenormalizeRoundsNearlyHalfUp) {
    EssaySet range{0, 2, 12, std::nullopt, false};
    EXPECT_EQ(denormalize_score(0.49999, range), 7);
    EXPECT_EQ(denormalize_score(0.45, range), 7);  // 6.5 rounds away from zero
    EXPECT_EQ(denormalize_score(0.0, range), 2);
    EXPECT_EQ(denormalize_score(1.0, range), 12);
}

TEST(Scores, RoundTripOnEveryRange) {
    for (const auto& [id, set] : asap_essay_sets()) {
        for (int raw = set.score_min; raw <= set.score_max; ++raw) {
            EXPECT_EQ(denormalize_score(normalize_score(raw, set), set), raw) << "set " << id;
        }
    }
}

TEST(Scores, OutOfRangeRejected) {
    const auto set = asap_essay_sets().at(3);
    EXPECT_THROW(normalize_score(4, set), ScoreRangeError);
    EXPECT_THROW(normalize_score(-1, set), ScoreRangeError);
    EXPECT_THROW(denormalize_score(1.01, set), ScoreRangeError);
    EXPECT_THROW(denormalize_score(-0.2, set), ScoreRangeError);
}

TEST(Scores, TableRangesAreFixed) {
    const auto sets = asap_essay_sets();
    ASSERT_EQ(sets.size(), 8u);
    EXPECT_EQ(sets.at(8).score_max, 60);
    EXPECT_EQ(sets.at(1).score_min, 2);
    for (int id : {3, 4, 5, 6}) EXPECT_TRUE(sets.at(id).is_source_dependent);
    for (int id : {1, 2, 7, 8}) EXPECT_FALSE(sets.at(id).is_source_dependent);
}

TEST(Text, TokenizeDetachesPunctuation) {
    const std::vector<std::string> expected = {"hello", ",", "world", "!", "it", "'", "s", "@name1", "."};
    EXPECT_EQ(tokenize("Hello, World! It's @NAME1."), expected);
}

TEST(Text, SentenceSplitting) {
    EXPECT_EQ(split_sentences("One. Two!  Three? four"), (std::vector<std::string>{"One.", "Two!", "Three?", "four"}));
    EXPECT_EQ(split_sentences("3.5 is a number"), (std::vector<std::string>{"3.5 is a number"}));
    EXPECT_EQ(split_sentences("no terminal punctuation").size(), 1u);
}

TEST(Text, SegmentIsPure) {
    const std::string text = "The cat sat. The dog ran! Did it?";
    EXPECT_EQ(segment(text), segment(text));
    EXPECT_EQ(segment(text).size(), 3u);
}

TEST(Text, CapsTruncate) {
    std::string longest;
    for (int i = 0; i < 70; ++i) longest += "w" + std::to_string(i) + " ";
    std::string many;
    for (int i = 0; i < 70; ++i) many += "s. ";
    EXPECT_EQ(segment(longest)[0].size(), 50u);
    EXPECT_EQ(segment(many).size(), 60u);
    TextLimits tight{3, 2};
    const auto s = segment("a b c d e. f g. h i.", tight);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].size(), 3u);
}

TEST(Text, EmptyTextIsOneEmptySentence) {
    const auto s = segment("   ");
    ASSERT_EQ(s.size(), 1u);
    EXPECT_TRUE(s[0].empty());
}

TEST(Text, PlaceholdersLongestFirst) {
    PlaceholderMap map{{"@NAME1", "alice"}, {"@NAME10", "bob"}};
    EXPECT_EQ(substitute_placeholders("@NAME10 met @NAME1 at @CITY", map), "bob met alice at @CITY");
    EXPECT_EQ(substitute_placeholders("@NAME1", {}), "@NAME1");
}

TEST(Vocab, SmallCorpus) {
    std::vector<Essay> essays{essay_from("a b c a")};
    const auto vocab = build_vocab(TaggedEssays::of(Role::train, essays));
    EXPECT_EQ(vocab.size(), 3u + Vocabulary::kReserved);
    EXPECT_EQ(vocab.token(Vocabulary::kPad), Vocabulary::kPadToken);
    EXPECT_EQ(vocab.index_of("a"), 2u);
    EXPECT_EQ(vocab.index_of("zebra"), Vocabulary::kUnk);
}

TEST(Vocab, TiesGoToFirstSeen) {
    std::vector<Essay> essays{essay_from("y x z y x z q")};
    const auto vocab = build_vocab(TaggedEssays::of(Role::train, essays));
    EXPECT_EQ(vocab.token(2), "y");
    EXPECT_EQ(vocab.token(3), "x");
    EXPECT_EQ(vocab.token(4), "z");
    EXPECT_EQ(vocab.token(5), "q");
}

TEST(Vocab, MaxSizeRespected) {
    std::vector<Essay> essays{essay_from("a a a b b c d")};
    const auto vocab = build_vocab(TaggedEssays::of(Role::train, essays), 2);
    EXPECT_EQ(vocab.size(), 2u + Vocabulary::kReserved);
    EXPECT_EQ(vocab.index_of("c"), Vocabulary::kUnk);
}

TEST(Vocab, NonTrainingInputIsLeakage) {
    std::vector<Essay> essays{essay_from("a")};
    EXPECT_THROW(build_vocab(TaggedEssays::of(Role::test, essays)), LeakageError);
    EXPECT_THROW(build_vocab(TaggedEssays::of(Role::dev, essays)), LeakageError);
    EXPECT_THROW(build_vocab(TaggedEssays::of(Role::train, {})), std::invalid_argument);
}

TEST(Vocab, WriteReadRoundTrip) {
    std::vector<Essay> essays{essay_from("one two two three")};
    const auto vocab = build_vocab(TaggedEssays::of(Role::train, essays), 10);
    std::stringstream buffer;
    vocab.write(buffer);
    const auto back = Vocabulary::read(buffer);
    EXPECT_EQ(back.tokens(), vocab.tokens());
    EXPECT_EQ(back.max_size(), 10u);
}

class EmbeddingTest : public ::testing::Test {
protected:
    void SetUp() override {
        essays_.push_back(essay_from("apple banana cherry"));
        vocab_ = build_vocab(TaggedEssays::of(Role::train, essays_));
    }
    std::vector<Essay> essays_;
    Vocabulary vocab_;
};

TEST_F(EmbeddingTest, PresentRowsCopiedAbsentRowsFallback) {
    std::istringstream file("apple 1 2 3\nzebra 9 9 9\nbanana -1 0.5 0\n");
    const auto table = load_embeddings(file, vocab_, 3, 42);
    const auto apple = table.row(vocab_.index_of("apple"));
    EXPECT_EQ(std::vector<double>(apple.begin(), apple.end()), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(table.matched, 2u);
    EXPECT_NEAR(table.coverage, 2.0 / 3.0, 1e-15);
    for (double v : table.row(vocab_.index_of("cherry"))) {
        EXPECT_LE(std::abs(v), 0.05);
        EXPECT_NE(v, 0.0);
    }
    for (double v : table.row(Vocabulary::kPad)) EXPECT_EQ(v, 0.0);
}

TEST_F(EmbeddingTest, EmptyFileIsAllFallback) {
    std::istringstream file("");
    const auto table = load_embeddings(file, vocab_, 4, 1);
    EXPECT_EQ(table.coverage, 0.0);
    EXPECT_EQ(table.values.size(), vocab_.size() * 4);
    for (double v : table.values) EXPECT_TRUE(std::isfinite(v));
}

TEST_F(EmbeddingTest, FallbackDependsOnlyOnSeed) {
    std::istringstream a(""), b(""), c("");
    EXPECT_EQ(load_embeddings(a, vocab_, 4, 7).values, load_embeddings(b, vocab_, 4, 7).values);
    EXPECT_NE(load_embeddings(c, vocab_, 4, 8).values, load_embeddings(a, vocab_, 4, 7).values);
}

TEST_F(EmbeddingTest, WrongDimensionNamesLine) {
    std::istringstream file("apple 1 2 3\nbanana 1 2\n");
    try {
        load_embeddings(file, vocab_, 3, 1, "vectors.txt");
        FAIL() << "expected rejection";
    } catch (const EmbeddingFormatError& e) {
        EXPECT_NE(std::string(e.what()).find("vectors.txt:2"), std::string::npos) << e.what();
    }
}

TEST(Loader, FiveRowsFiveEssays) {
    std::istringstream tsv(
        "essay_id\tessay_set\tessay\trater1_domain1\tdomain1_score\n"
        "1\t3\tThe author says. It is hot.\t3\t3\n"
        "2\t3\t\"Quoted text here.\"\t1\t1\n"
        "3\t5\tMood is calm.\t2\t2\n"
        "4\t8\tA story.\t40\t44\n"
        "5\t1\tComputers matter!\t8\t8\n");
    const auto result = load_essays(tsv, asap_essay_sets());
    ASSERT_EQ(result.essays.size(), 5u);
    std::size_t total = 0;
    for (const auto& [set, n] : result.counts_per_set) total += n;
    EXPECT_EQ(total, 5u);
    EXPECT_EQ(result.counts_per_set.at(3), 2u);
    EXPECT_EQ(result.essays[0].raw_score, 3);
    EXPECT_DOUBLE_EQ(result.essays[0].normalized_score, 1.0);
    EXPECT_EQ(result.essays[0].sentences.size(), 2u);
    EXPECT_EQ(result.essays[1].sentences[0][0], "quoted");
    EXPECT_DOUBLE_EQ(result.essays[2].normalized_score, 0.5);
}

TEST(Loader, BadRowsCountedAndDiagnosed) {
    std::istringstream tsv(
        "1\t3\tfine.\t2\n"
        "2\t3\ttoo high.\t4\n"
        "3\t9\tunknown set.\t1\n"
        "oops\n"
        "x\t3\tnot a number.\t1\n"
        "6\t4\t\t0\n");
    EssayLoadOptions options;
    options.has_header = false;
    const auto result = load_essays(tsv, asap_essay_sets(), options, "essays.tsv");
    ASSERT_EQ(result.essays.size(), 2u);
    EXPECT_EQ(result.rejected_rows, 2u);
    EXPECT_EQ(result.malformed_rows, 2u);
    ASSERT_EQ(result.diagnostics.size(), 4u);
    EXPECT_NE(result.diagnostics[0].find("essays.tsv:2"), std::string::npos);
    EXPECT_TRUE(result.essays[1].degenerate);
    ASSERT_EQ(result.essays[1].sentences.size(), 1u);
    EXPECT_TRUE(result.essays[1].sentences[0].empty());
}

TEST(Loader, PlaceholderMapApplied) {
    std::istringstream tsv("1\t3\tI met @PERSON1 today.\t2\n");
    EssayLoadOptions options;
    options.has_header = false;
    options.placeholders = {{"@PERSON1", "Sam"}};
    const auto result = load_essays(tsv, asap_essay_sets(), options);
    EXPECT_EQ(result.essays[0].sentences[0][2], "sam");
}

TEST(Loader, MissingHeaderColumnRejected) {
    std::istringstream tsv("essay_id\tessay\n1\ttext\n");
    EXPECT_THROW(load_essays(tsv, asap_essay_sets()), std::runtime_error);
}

TEST(Metadata, OverridesAndArticles) {
    const auto dir = scratch_dir("meta");
    std::ofstream(dir / "article3.txt") << "The road was long. The sun was hot.";
    std::ofstream(dir / "sets.kv") << "# prompt metadata\nset.3.article = article3.txt\nset.9.min = 1\nset.9.max = 5\n";
    const auto sets = load_set_metadata(dir / "sets.kv");
    ASSERT_TRUE(sets.at(3).source_article.has_value());
    EXPECT_EQ(article_sentences(sets.at(3)).size(), 2u);
    EXPECT_EQ(sets.at(9).score_max, 5);
    EXPECT_EQ(sets.at(8).score_max, 60);
    EXPECT_THROW(article_sentences(sets.at(1)), std::invalid_argument);
}

TEST(Metadata, InvalidRangeRejected) {
    const auto dir = scratch_dir("badmeta");
    std::ofstream(dir / "sets.kv") << "set.3.min = 5\n";
    EXPECT_THROW(load_set_metadata(dir / "sets.kv"), std::invalid_argument);
    std::ofstream(dir / "other.kv") << "set.3.colour = red\n";
    EXPECT_THROW(load_set_metadata(dir / "other.kv"), std::runtime_error);
}
