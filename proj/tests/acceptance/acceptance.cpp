// Acceptance suite: one PASS/FAIL/SKIPPED line per criterion.
//
//   acceptance            run everything
//   acceptance 3 5        run the listed criteria only
//
// Criterion 9 needs the real corpus; point GAZEAES_FULL_DATA at a directory
// holding essays.tsv, sets.txt, gaze.csv and readers.csv (and optionally
// vectors.txt) to enable it.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "experiment_fixture.hpp"
#include "gazeaes/corpus/loader.hpp"
#include "gazeaes/experiments/report.hpp"
#include "gazeaes/gaze/binning.hpp"
#include "gazeaes/metrics/agreement.hpp"
#include "metric_oracles.hpp"
#include "op_cases.hpp"
#include "synthetic.hpp"
#include "tiny_model.hpp"

namespace {

using namespace gazeaes;
namespace ts = gazeaes::test_support;
using Clock = std::chrono::steady_clock;

struct Outcome {
    enum class Status { pass, fail, skipped } status = Status::pass;
    std::string detail;
};

class Failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string sci(double v) {
    std::ostringstream s;
    s << std::setprecision(2) << std::scientific << v;
    return s.str();
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream s;
    s << std::setprecision(digits) << std::fixed << v;
    return s.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ------------------------------------------------------------------------ 1

Outcome gradient_oracle() {
    const auto t0 = Clock::now();
    constexpr std::size_t kInstances = 50;
    const double limit = ts::GradCheckTolerances<double>::limit;
    double worst = 0.0;
    std::size_t entries = 0;
    for (auto kind : ts::differentiable_ops()) {
        for (std::size_t i = 0; i < kInstances; ++i) {
            const auto seed = derive_seed(derive_seed(101, std::string(numerics::to_string(kind))), i);
            auto c = ts::make_op_case<double>(kind, seed);
            const auto r = ts::check_gradients<double>(c.build, c.inputs, seed);
            require(r.max_error < limit, std::string(numerics::to_string(kind)) + " instance " + std::to_string(i) + ": " +
                                             r.worst_location + " rel err " + sci(r.max_error));
            worst = std::max(worst, r.max_error);
            entries += r.checked;
        }
    }
    for (auto arch : {model::Architecture::self_attention, model::Architecture::co_attention}) {
        for (std::size_t i = 0; i < kInstances; ++i) {
            const auto r = ts::tiny_model_gradient_check<double>(derive_seed(202, i), arch);
            require(r.max_error < limit, std::string(model::to_string(arch)) + " model instance " + std::to_string(i) + ": " +
                                             r.worst_location + " rel err " + sci(r.max_error));
            worst = std::max(worst, r.max_error);
            entries += r.checked;
        }
    }
    const double secs = seconds_since(t0);
    require(secs < 60.0, "took " + fixed(secs, 1) + " s");
    return {Outcome::Status::pass, std::to_string(ts::differentiable_ops().size()) + " ops and 2 architectures x " +
                                       std::to_string(kInstances) + " instances, " + std::to_string(entries) +
                                       " entries, max rel err " + sci(worst) + ", " + fixed(secs, 1) + " s"};
}

// ------------------------------------------------------------------------ 2

// Same generator as tests/oracles/qwk_oracle.py.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

double library_qwk(const std::vector<int>& p, const std::vector<int>& a, int lo, int hi) {
    const auto pairs = metrics::zip_ratings(p, a);
    return metrics::qwk(pairs, lo, hi);
}

Outcome qwk_oracle() {
    std::ifstream in(ts::test_data_dir() + "/qwk_oracle.txt");
    require(static_cast<bool>(in), "missing qwk_oracle.txt");
    std::size_t trials = 0;
    int widest = 0;
    double worst = 0.0;
    std::uint64_t trial = 0;
    int hi = 0;
    std::size_t n = 0;
    double expected = 0.0;
    while (in >> trial >> hi >> n >> expected) {
        SplitMix64 g{1000003ULL * trial + 17};
        const int h = 1 + g.below(60);
        const std::size_t len = 1 + static_cast<std::size_t>(g.below(120));
        require(h == hi && len == n, "generator mismatch at trial " + std::to_string(trial));
        std::vector<int> actual(len), predicted(len);
        for (auto& a : actual) a = g.below(h + 1);
        for (std::size_t i = 0; i < len; ++i) {
            predicted[i] = trial % 3 == 0 ? std::clamp(actual[i] + g.below(5) - 2, 0, h) : g.below(h + 1);
        }
        const double got = library_qwk(predicted, actual, 0, h);
        const double err = std::abs(got - expected);
        require(err <= 1e-12, "trial " + std::to_string(trial) + ": " + std::to_string(got) + " vs " +
                                  std::to_string(expected));
        // Second, in-process oracle (pairwise form).
        require(std::abs(got - ts::oracle_qwk(predicted, actual)) <= 1e-12,
                "pairwise oracle disagrees at trial " + std::to_string(trial));
        worst = std::max(worst, err);
        widest = std::max(widest, h);
        ++trials;
    }
    require(trials == 1000, "expected 1000 oracle trials, read " + std::to_string(trials));

    const std::vector<int> truth{0, 1, 2, 3, 4, 2, 1, 60, 30};
    for (int c : {0, 2, 60}) {
        require(library_qwk(std::vector<int>(truth.size(), c), truth, 0, 60) == 0.0,
                "constant prediction " + std::to_string(c) + " is not exactly 0");
    }
    require(library_qwk(truth, truth, 0, 60) == 1.0, "perfect agreement is not 1");
    return {Outcome::Status::pass, std::to_string(trials) + " sequences (ranges up to 0-" + std::to_string(widest) +
                                       "), max |diff| " + sci(worst) + "; constant -> 0, perfect -> 1"};
}

// ------------------------------------------------------------------------ 3

// The six cases exactly as written, evaluated independently of the library.
int written_bin(double fv, double mu, double sd) {
    if (fv == 0) return 0;
    if (fv <= mu - sd) return 1;
    if (fv <= mu - sd / 2) return 2;
    if (fv <= mu + sd / 2) return 3;
    if (fv <= mu + sd) return 4;
    return 5;
}

Outcome binning_conformance() {
    struct Case {
        double fv, mu, sd;
        int bin;
    };
    const auto up = [](double x) { return std::nextafter(x, 1e300); };
    const std::vector<Case> cases{
        // mu = 100, sd = 40: edges 60, 80, 120, 140
        {0, 100, 40, 0},       {1, 100, 40, 1},         {60, 100, 40, 1},      {up(60), 100, 40, 2},
        {80, 100, 40, 2},      {up(80), 100, 40, 3},    {100, 100, 40, 3},     {120, 100, 40, 3},
        {up(120), 100, 40, 4}, {140, 100, 40, 4},       {up(140), 100, 40, 5}, {1e6, 100, 40, 5},
        // sd = 0: every edge at mu
        {0, 50, 0, 0},         {10, 50, 0, 1},          {50, 50, 0, 1},        {up(50), 50, 0, 5},
        // mu - sd < 0: edges -5, 2.5, 17.5, 25; bin 1 unreachable for FV > 0
        {0, 10, 15, 0},        {1e-9, 10, 15, 2},       {2.5, 10, 15, 2},      {up(2.5), 10, 15, 3},
        {17.5, 10, 15, 3},     {up(17.5), 10, 15, 4},   {25, 10, 15, 4},       {up(25), 10, 15, 5},
        // mu - sd = 0 exactly
        {0, 20, 20, 0},        {1e-12, 20, 20, 2},      {10, 20, 20, 2},       {40, 20, 20, 4},
    };
    for (const auto& c : cases) {
        const int got = gaze::bin_fixation(c.fv, c.mu, c.sd);
        require(got == c.bin, "FV=" + std::to_string(c.fv) + " mu=" + std::to_string(c.mu) + " sd=" +
                                  std::to_string(c.sd) + ": bin " + std::to_string(got) + ", expected " +
                                  std::to_string(c.bin));
        require(written_bin(c.fv, c.mu, c.sd) == c.bin, "table entry disagrees with the written formula");
    }
    Rng rng(33);
    std::size_t random_cases = 0;
    for (int i = 0; i < 200000; ++i) {
        const double mu = rng.uniform(0, 500);
        const double sd = i % 10 == 0 ? 0.0 : rng.uniform(0, 400);
        double fv = i % 7 == 0 ? 0.0 : rng.uniform(0, 1000);
        if (i % 5 == 0) {
            const double edges[] = {mu - sd, mu - sd / 2, mu + sd / 2, mu + sd};
            fv = std::max(0.0, edges[rng.below(4)]);
        }
        require(gaze::bin_fixation(fv, mu, sd) == written_bin(fv, mu, sd),
                "random case FV=" + std::to_string(fv) + " mu=" + std::to_string(mu) + " sd=" + std::to_string(sd));
        ++random_cases;
    }
    for (int rc = 0; rc <= 1000; ++rc) {
        require(gaze::bin_run_count(rc) == std::min(rc, 5), "run count " + std::to_string(rc));
    }
    bool threw = false;
    try {
        gaze::bin_fixation(-1, 10, 1);
    } catch (const std::invalid_argument&) {
        threw = true;
    }
    require(threw, "negative FV accepted");
    return {Outcome::Status::pass, std::to_string(cases.size()) + " boundary cases, " + std::to_string(random_cases) +
                                       " random cases, run count 0-1000"};
}

// ------------------------------------------------------------------------ 4

Outcome annotator_fixture() {
    const auto f = ts::load_annotator_fixture(ts::test_data_dir() + "/annotators.csv");
    require(f.annotators.size() == 8 && f.truth.size() == 48, "fixture shape");
    const auto eighth = metrics::agreement_counts(metrics::zip_ratings(f.annotators[7], f.truth));
    require(eighth.correct == 29 && eighth.close == 45,
            "annotator 8: correct " + std::to_string(eighth.correct) + ", close " + std::to_string(eighth.close));
    double q = 0, close = 0, correct = 0;
    for (const auto& a : f.annotators) {
        const auto pairs = metrics::zip_ratings(a, f.truth);
        q += metrics::qwk(pairs, 0, 4);
        const auto c = metrics::agreement_counts(pairs);
        close += static_cast<double>(c.close);
        correct += static_cast<double>(c.correct);
    }
    q /= 8;
    close /= 8;
    correct /= 8;
    require(std::abs(q - 0.646) <= 1e-3, "mean QWK " + fixed(q, 5));
    require(std::abs(close - 42.75) <= 1e-3, "mean close " + fixed(close, 3));
    require(std::abs(correct - 22.25) <= 1e-3, "mean correct " + fixed(correct, 3));
    return {Outcome::Status::pass, "annotator 8 correct 29 close 45; means QWK " + fixed(q, 5) + ", close " +
                                       fixed(close, 2) + ", correct " + fixed(correct, 2)};
}

// --------------------------------------------------------------------- 5, 6

struct SyntheticRun {
    std::vector<corpus::Essay> essays;
    corpus::Vocabulary vocab;
    training::Dataset data;
};

SyntheticRun synthetic_run(std::size_t count, bool with_gaze) {
    SyntheticRun r;
    r.essays = ts::synthetic_essays(count, 3, with_gaze);
    const auto tagged = corpus::TaggedEssays::of(corpus::Role::train, r.essays);
    r.vocab = corpus::build_vocab(tagged, 50);
    r.data = training::Dataset::encode(tagged, r.vocab);
    return r;
}

Outcome overfit_smoke() {
    const auto t0 = Clock::now();
    auto run = synthetic_run(10, false);
    std::set<int> scores;
    for (const auto& e : run.essays) scores.insert(e.raw_score);
    require(scores == std::set<int>{0, 1, 2, 3}, "synthetic scores do not span 0-3");
    require(run.vocab.size() - corpus::Vocabulary::kReserved <= 50, "vocabulary above 50");

    model::ModelConfig cfg;
    cfg.architecture = model::Architecture::self_attention;
    cfg.vocab_size = 50;
    model::EssayScorer<double> scorer(cfg, run.vocab.size(), 1);
    training::TrainConfig tc;
    tc.epochs = 200;
    tc.batch_size = 5;
    tc.seed = 1;
    training::TrainingContext ctx;
    training::train(scorer, run.data, nullptr, tc, ctx);
    const auto ev = training::evaluate(scorer, run.data, ctx);
    const double secs = seconds_since(t0);
    const std::string detail = "10 essays, vocab " + std::to_string(run.vocab.size()) + ", 200 epochs, batch 5: MSE " +
                               sci(ev.loss.score_mse) + ", QWK " + fixed(ev.qwk) + ", " + fixed(secs, 1) + " s";
    require(ev.loss.score_mse < 1e-3, detail);
    require(ev.qwk == 1.0, detail);
    require(secs < 120.0, detail);
    return {Outcome::Status::pass, detail};
}

Outcome multitask_signal() {
    auto run = synthetic_run(20, true);
    model::ModelConfig cfg;
    cfg.architecture = model::Architecture::self_attention;
    cfg.vocab_size = 50;
    cfg.gaze_attributes.assign(gaze::kAllGazeAttributes.begin(), gaze::kAllGazeAttributes.end());
    cfg.gaze_loss_weights = model::default_gaze_weights();
    model::EssayScorer<double> scorer(cfg, run.vocab.size(), 1);
    training::TrainingContext ctx;
    const auto before = training::evaluate(scorer, run.data, ctx);
    training::TrainConfig tc;
    tc.epochs = 100;
    tc.batch_size = 1;
    tc.seed = 1;
    training::train(scorer, run.data, nullptr, tc, ctx);
    const auto after = training::evaluate(scorer, run.data, ctx);

    std::ostringstream detail;
    detail << "20 essays, 100 epochs, batch 1: score MSE " << sci(after.loss.score_mse);
    bool ok = after.loss.score_mse < 1e-2;
    for (auto a : cfg.gaze_attributes) {
        const double ratio = after.loss.gaze_mse.at(a) / before.loss.gaze_mse.at(a);
        detail << ", " << gaze::short_name(a) << " x" << fixed(ratio, 3);
        ok = ok && ratio <= 0.5;
    }
    require(ok, detail.str());
    return {Outcome::Status::pass, detail.str()};
}

// ------------------------------------------------------------------------ 7

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

void require_identical(const experiments::ExperimentReport& a, const experiments::ExperimentReport& b,
                       const std::string& label) {
    require(a.folds.size() == b.folds.size(), label + ": fold count");
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
        const auto& ha = a.folds[f].history;
        const auto& hb = b.folds[f].history;
        require(ha.size() == hb.size(), label + ": history length");
        for (std::size_t e = 0; e < ha.size(); ++e) {
            const auto where = label + " fold " + std::to_string(f) + " epoch " + std::to_string(e + 1);
            require(same_bits(ha[e].train.score_mse, hb[e].train.score_mse), where + ": score MSE differs");
            require(same_bits(ha[e].train.weighted_total, hb[e].train.weighted_total), where + ": total differs");
            require(same_bits(ha[e].dev_qwk, hb[e].dev_qwk), where + ": dev QWK differs");
            require(same_bits(ha[e].max_grad_norm, hb[e].max_grad_norm), where + ": gradient norm differs");
            require(ha[e].clipped_batches == hb[e].clipped_batches, where + ": clipping differs");
        }
    }
    require(a.predictions.size() == b.predictions.size(), label + ": prediction count");
    for (std::size_t i = 0; i < a.predictions.size(); ++i) {
        require(same_bits(a.predictions[i].normalized, b.predictions[i].normalized), label + ": predictions differ");
    }
}

Outcome zero_weight_equivalence() {
    const auto data = ts::experiment_fixture();
    std::size_t epochs_compared = 0;
    const std::pair<experiments::System, experiments::System> pairs[] = {
        {experiments::System::co_attention_gaze, experiments::System::co_attention},
        {experiments::System::essays_gaze, experiments::System::extra_essays},
    };
    for (int precision : {32, 64}) {
        for (const auto& [with_gaze, without] : pairs) {
            auto zeroed = ts::fixture_config(with_gaze, 4);
            zeroed.precision = precision;
            zeroed.folds = {0, 3};
            zeroed.target_sets = {experiments::default_target_sets(with_gaze).front()};
            zeroed.model.gaze_attributes.assign(gaze::kAllGazeAttributes.begin(), gaze::kAllGazeAttributes.end());
            for (auto a : gaze::kAllGazeAttributes) zeroed.model.gaze_loss_weights[a] = 0.0;
            auto plain = zeroed;
            plain.system = without;
            plain.model.gaze_attributes.clear();
            plain.model.gaze_loss_weights.clear();
            const auto a = experiments::run_experiment(zeroed, data);
            const auto b = experiments::run_experiment(plain, data);
            require(a.folds.front().gaze_essays > 0, "zero-weight run saw no gaze labels");
            require_identical(a, b, experiments::to_string(with_gaze) + " " + std::to_string(precision) + "-bit");
            for (const auto& f : a.folds) epochs_compared += f.history.size();

            // Control: with the weights switched on, the runs must diverge.
            auto weighted = zeroed;
            for (auto at : gaze::kAllGazeAttributes) weighted.model.gaze_loss_weights[at] = 1.0;
            const auto c = experiments::run_experiment(weighted, data);
            bool diverged = false;
            try {
                require_identical(c, b, "control");
            } catch (const Failure&) {
                diverged = true;
            }
            require(diverged, experiments::to_string(with_gaze) + ": nonzero gaze weights changed nothing");
        }
    }
    return {Outcome::Status::pass, std::to_string(epochs_compared) +
                                       " epochs bit-identical (co-attention and self-attention, 32- and 64-bit); nonzero weights diverge"};
}

// ------------------------------------------------------------------------ 8

void check_partition(const std::vector<experiments::FoldSpec>& folds, const std::vector<long long>& ids) {
    const std::size_t n = ids.size();
    const std::set<long long> all(ids.begin(), ids.end());
    require(folds.size() == 5, "fold count");
    std::map<long long, int> in_test, in_dev;
    for (const auto& f : folds) {
        std::set<long long> tr(f.train.begin(), f.train.end()), dv(f.dev.begin(), f.dev.end()),
            te(f.test.begin(), f.test.end());
        require(tr.size() == f.train.size() && dv.size() == f.dev.size() && te.size() == f.test.size(),
                "duplicate id inside a partition");
        std::set<long long> cover = tr;
        cover.insert(dv.begin(), dv.end());
        cover.insert(te.begin(), te.end());
        require(cover == all && tr.size() + dv.size() + te.size() == n, "partitions are not a disjoint cover");
        if (n % 5 == 0) {
            require(tr.size() * 5 == 3 * n && dv.size() * 5 == n && te.size() * 5 == n,
                    "not 60/20/20 for n=" + std::to_string(n));
        } else {
            require(dv.size() == n / 5 || dv.size() == n / 5 + 1, "dev size off for n=" + std::to_string(n));
            require(te.size() == n / 5 || te.size() == n / 5 + 1, "test size off for n=" + std::to_string(n));
        }
        for (auto id : te) ++in_test[id];
        for (auto id : dv) ++in_dev[id];
    }
    for (auto id : ids) {
        require(in_test[id] == 1 && in_dev[id] == 1, "essay " + std::to_string(id) + " not tested exactly once");
    }
}

Outcome harness_integrity() {
    // Fold partitions.
    std::size_t partitions = 0;
    std::vector<std::size_t> sizes{5, 10, 20, 100, 1000, 1783, 1800, 1726, 1772, 1805, 1569, 723};
    Rng rng(8);
    for (int i = 0; i < 100; ++i) sizes.push_back(5 + rng.below(2000));
    for (std::size_t n : sizes) {
        std::vector<long long> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<long long>(10 * i + rng.below(10));
        check_partition(experiments::make_folds(ids, 1, rng.next()), ids);
        ++partitions;
    }

    // Full experiment matrix on the fixture, with folds fixed up front so
    // the test partitions are known independently of the harness.
    auto data = ts::experiment_fixture();
    for (int s = 1; s <= 8; ++s) {
        std::vector<long long> ids;
        for (const auto& e : data.essays) {
            if (e.set_id == s) ids.push_back(e.essay_id);
        }
        data.folds[s] = experiments::make_folds(ids, s, derive_seed(77, std::to_string(s)));
    }
    std::set<long long> gaze_ids;
    for (const auto& r : data.gaze_records) gaze_ids.insert(r.essay_id);
    require(gaze_ids.size() == 48, "fixture has " + std::to_string(gaze_ids.size()) + " gaze essays");

    std::size_t fold_runs = 0, checks = 0;
    for (auto system : {experiments::System::self_attention, experiments::System::co_attention,
                        experiments::System::co_attention_gaze, experiments::System::only_prompt,
                        experiments::System::extra_essays, experiments::System::essays_gaze}) {
        const auto config = ts::fixture_config(system);
        experiments::ExperimentReport report;
        try {
            report = experiments::run_experiment(config, data);
        } catch (const corpus::LeakageError& e) {
            throw Failure(experiments::to_string(system) + ": leakage assertion fired: " + e.what());
        }
        for (const auto& f : report.folds) {
            const auto& spec = data.folds.at(f.set_id).at(static_cast<std::size_t>(f.fold_id));
            require(f.leakage_checks > 0, "no leakage checks ran");
            require(f.train_size == spec.train.size() + f.augmented, "training size mismatch");
            if (experiments::augments_training(system)) {
                require(f.augmented == 48, experiments::to_string(system) + " augmented " +
                                               std::to_string(f.augmented) + " essays");
            } else {
                require(f.augmented == 0, "augmentation in a non-augmenting system");
            }
            const std::set<long long> test(spec.test.begin(), spec.test.end());
            for (auto id : spec.train) require(!test.count(id), "fold lists a test essay in train");
            if (experiments::augments_training(system)) {
                for (auto id : gaze_ids) require(!test.count(id), "augmentation essay in the test partition");
            }
            checks += f.leakage_checks;
            ++fold_runs;
        }
        std::vector<long long> predicted;
        for (const auto& p : report.predictions) predicted.push_back(p.essay_id);
        std::vector<long long> expected;
        for (const auto& f : report.folds) {
            const auto& t = data.folds.at(f.set_id).at(static_cast<std::size_t>(f.fold_id)).test;
            expected.insert(expected.end(), t.begin(), t.end());
        }
        require(predicted == expected, experiments::to_string(system) + ": predictions are not the test partitions");
    }

    // Planted leaks must be refused, by preflight validation or by the
    // in-fold assertions, and never run to completion.
    const auto refuses = [&](const experiments::ExperimentData& d, experiments::System system) {
        try {
            experiments::run_experiment(ts::fixture_config(system), d);
        } catch (const corpus::LeakageError&) {
            return true;
        } catch (const experiments::ExperimentConfigError&) {
            return true;
        }
        return false;
    };
    auto overlap = data;
    auto& fold = overlap.folds.at(3).at(0);
    fold.train.push_back(fold.test.front());
    require(refuses(overlap, experiments::System::co_attention_gaze), "a test essay placed in training was not refused");

    auto gaze_in_target = data;
    auto planted = gaze_in_target.gaze_records.front();
    planted.essay_id = gaze_in_target.folds.at(1).at(0).test.front();
    gaze_in_target.gaze_records.push_back(planted);
    require(refuses(gaze_in_target, experiments::System::essays_gaze),
            "a test essay among the augmentation essays was not refused");

    // The low-level assertions themselves, fed test-tagged data directly.
    std::vector<corpus::Essay> test_essays;
    for (const auto& e : data.essays) {
        if (e.set_id == 3) test_essays.push_back(e);
    }
    const auto tagged = corpus::TaggedEssays::of(corpus::Role::test, test_essays);
    bool vocab_refused = false;
    try {
        corpus::build_vocab(tagged, 50);
    } catch (const corpus::LeakageError&) {
        vocab_refused = true;
    }
    require(vocab_refused, "vocabulary built from a test partition");
    auto train_tagged = corpus::TaggedEssays::of(corpus::Role::train, test_essays);
    const auto vocab = corpus::build_vocab(train_tagged, 50);
    const auto test_data = training::Dataset::encode(tagged, vocab);
    model::ModelConfig cfg = ts::fixture_config(experiments::System::self_attention).model;
    model::EssayScorer<double> scorer(cfg, vocab.size(), 1);
    training::TrainingContext ctx;
    bool train_refused = false;
    try {
        training::train(scorer, test_data, nullptr, training::TrainConfig{}, ctx);
    } catch (const corpus::LeakageError&) {
        train_refused = true;
    }
    require(train_refused, "training ran on a test partition");

    return {Outcome::Status::pass, std::to_string(partitions) + " partitions are disjoint covers (60/20/20 when n%5==0); " +
                                       "6 systems x " + std::to_string(fold_runs / 6) + " folds with " +
                                       std::to_string(checks) + " leakage checks, none fired; augmentation 48; " +
                                       "planted leaks refused"};
}

// ------------------------------------------------------------------------ 9

Outcome full_data() {
    const char* dir_env = std::getenv("GAZEAES_FULL_DATA");
    if (!dir_env || !*dir_env) {
        return {Outcome::Status::skipped, "set GAZEAES_FULL_DATA to the real corpus directory to run"};
    }
    const std::filesystem::path dir(dir_env);
    experiments::ExperimentData data;
    data.sets = corpus::load_set_metadata(dir / "sets.txt");
    auto loaded = corpus::load_essays(dir / "essays.tsv", data.sets);
    data.essays = std::move(loaded.essays);
    auto gaze_loaded = gaze::load_gaze_csv(dir / "gaze.csv");
    data.gaze_records = std::move(gaze_loaded.records);
    data.readers = gaze::load_reader_metadata(dir / "readers.csv");

    experiments::ExperimentConfig base;
    base.seed = 0;
    if (const char* jobs = std::getenv("GAZEAES_JOBS")) base.jobs = std::max(1, std::atoi(jobs));
    else base.jobs = std::max(1u, std::thread::hardware_concurrency());
    if (std::filesystem::exists(dir / "vectors.txt")) base.embeddings = dir / "vectors.txt";

    auto ca = base;
    ca.system = experiments::System::co_attention;
    auto cag = base;
    cag.system = experiments::System::co_attention_gaze;
    const auto a = experiments::run_experiment(ca, data);
    const auto b = experiments::run_experiment(cag, data);
    const auto cmp = experiments::compare(a, b, data.sets);

    const experiments::ExperimentReport* both[] = {&a, &b};
    experiments::write_summary_table(std::cout, both);
    experiments::write_comparison(std::cout, cmp);
    const std::string detail = "co-attention mean QWK " + fixed(a.grand_mean_qwk) + ", with gaze " +
                               fixed(b.grand_mean_qwk) + ", p = " + sci(cmp.overall.p_value);
    require(b.grand_mean_qwk > a.grand_mean_qwk && cmp.overall.p_value < 0.05, detail);
    return {Outcome::Status::pass, detail};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "gradient oracle", gradient_oracle},
        {2, "QWK oracle", qwk_oracle},
        {3, "binning conformance", binning_conformance},
        {4, "agreement-count fixture", annotator_fixture},
        {5, "overfit smoke test", overfit_smoke},
        {6, "multi-task signal", multitask_signal},
        {7, "zero-weight equivalence", zero_weight_equivalence},
        {8, "harness integrity", harness_integrity},
        {9, "full-data directional reproduction", full_data},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Outcome::Status::fail, e.what()};
        }
        const char* label = o.status == Outcome::Status::pass ? "PASS" : o.status == Outcome::Status::fail ? "FAIL"
                                                                                                              : "SKIPPED";
        failed += o.status == Outcome::Status::fail;
        std::cout << label << " [" << c.id << "] " << c.name << ": " << o.detail << " (" << fixed(seconds_since(t0), 1)
                  << " s)" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
