#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dlm/cues.hpp"
#include "dlm/errors.hpp"
#include "dlm/mapping.hpp"
#include "dlm/production.hpp"
#include "dlm/rng.hpp"
#include "dlm/utf8.hpp"

using namespace dlm;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
    return m;
}

// Words whose letters are pairwise distinct: their trigram graphs are chains,
// so each word is the unique start-to-end path over its own grams.
std::vector<std::string> unique_path_words(std::size_t count, std::uint64_t seed) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz";
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        std::string pool = alphabet;
        std::vector<char> letters(pool.begin(), pool.end());
        rng.shuffle(letters);
        std::size_t len = 3 + rng.next_below(6);
        std::string word(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(len));
        if (seen.insert(word).second) words.push_back(word);
    }
    return words;
}

// Exhaustive enumeration of all boundary-to-boundary strings over an active
// gram set, with a decoded-length cap. Independent of the beam search.
std::set<std::string> enumerate_paths(const std::vector<std::string>& grams, int order,
                                      std::size_t max_len) {
    std::set<std::string> results;
    const std::size_t overlap = static_cast<std::size_t>(order) - 1;
    std::function<void(std::size_t, std::string)> walk = [&](std::size_t at,
                                                             std::string assembled) {
        const std::string& gram = grams[at];
        if (utf8_decode(gram).back() == U'#') {
            std::string decoded;
            for (char32_t cp : utf8_decode(assembled))
                if (cp != U'#') decoded += utf8_encode(cp);
            if (decoded.size() <= max_len * 4) results.insert(decoded);
            return;
        }
        for (std::size_t next = 0; next < grams.size(); ++next) {
            auto a = utf8_decode(gram);
            auto b = utf8_decode(grams[next]);
            bool match =
                std::equal(a.end() - static_cast<std::ptrdiff_t>(overlap), a.end(), b.begin());
            if (!match) continue;
            std::string extended = assembled + utf8_encode(b.back());
            std::size_t decoded_len = 0;
            for (char32_t cp : utf8_decode(extended))
                if (cp != U'#') ++decoded_len;
            if (decoded_len > max_len) continue;
            walk(next, extended);
        }
    };
    for (std::size_t v = 0; v < grams.size(); ++v)
        if (utf8_decode(grams[v]).front() == U'#') walk(v, grams[v]);
    return results;
}

SupportVector gold_support(const CueMatrix& C, std::size_t row, double high = 1.0,
                           double theta = 0.01) {
    SupportVector support;
    support.values = Eigen::RowVectorXd::Zero(C.cols());
    for (int id : C.rows[row]) support.values[id] = high;
    support.threshold = theta;
    return support;
}

WordEntry entry(const std::string& word, const std::string& lemma, Pos pos) {
    WordEntry e;
    e.word = word;
    e.lemma = lemma;
    e.pos = pos;
    return e;
}

} // namespace

TEST_CASE("cue support is the semantic vector through G") {
    Eigen::MatrixXd G = random_matrix(4, 7, 3);
    Eigen::RowVectorXd zero = Eigen::RowVectorXd::Zero(4);
    CHECK(predict_cue_support(zero, G).values.cwiseAbs().maxCoeff() == 0.0);

    Eigen::RowVectorXd s1 = random_matrix(1, 4, 5);
    Eigen::RowVectorXd s2 = random_matrix(1, 4, 6);
    Eigen::RowVectorXd lhs = predict_cue_support((s1 + s2).eval(), G).values;
    Eigen::RowVectorXd rhs =
        predict_cue_support(s1, G).values + predict_cue_support(s2, G).values;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero-residual training recovers binary support rows") {
    auto words = unique_path_words(30, 17);
    CueMatrix C = build_cue_matrix(words, 3);
    Eigen::MatrixXd W0 = random_matrix(C.cols(), C.cols() + 10, 23);
    Eigen::MatrixXd S = C.dense() * W0;
    MappingPair pair = train_endstate(C, S, 0.0);
    for (std::size_t i = 0; i < words.size(); ++i) {
        SupportVector support =
            predict_cue_support(S.row(static_cast<Eigen::Index>(i)), pair.G);
        CHECK((support.values - C.dense().row(static_cast<Eigen::Index>(i)))
                  .cwiseAbs()
                  .maxCoeff() < 1e-6);
    }
}

TEST_CASE("order graph links grams overlapping in n-1 symbols") {
    GramIndex index;
    int a = index.add("#do"), b = index.add("dom"), c = index.add("omi");
    OrderGraph graph = build_order_graph({a, b, c}, index, 3);
    REQUIRE(graph.vertices.size() == 3);
    CHECK(graph.edges[0] == std::vector<int>{1}); // #do -> dom
    CHECK(graph.edges[1] == std::vector<int>{2}); // dom -> omi
    CHECK(graph.edges[2].empty());
    CHECK(graph.starts == std::vector<int>{0});
    CHECK(!graph.is_end[0]);
    CHECK(!graph.is_end[1]);
    CHECK(!graph.is_end[2]);
}

TEST_CASE("disjoint grams yield no edges") {
    GramIndex index;
    int a = index.add("#ab"), b = index.add("cd#");
    OrderGraph graph = build_order_graph({a, b}, index, 3);
    CHECK(graph.edges[0].empty());
    CHECK(graph.edges[1].empty());
}

TEST_CASE("edge set matches a pairwise overlap oracle") {
    auto words = unique_path_words(8, 41);
    CueMatrix C = build_cue_matrix(words, 3);
    Rng rng(43);
    std::vector<int> active;
    for (int id = 0; id < C.cols(); ++id)
        if (rng.next_double() < 0.5) active.push_back(id);
    if (active.size() > 30) active.resize(30);

    OrderGraph graph = build_order_graph(active, C.index, 3);
    for (std::size_t u = 0; u < graph.vertices.size(); ++u) {
        for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
            auto a = utf8_decode(C.index.grams[static_cast<std::size_t>(graph.vertices[u])]);
            auto b = utf8_decode(C.index.grams[static_cast<std::size_t>(graph.vertices[v])]);
            bool expected = std::equal(a.end() - 2, a.end(), b.begin());
            bool actual = std::find(graph.edges[u].begin(), graph.edges[u].end(),
                                    static_cast<int>(v)) != graph.edges[u].end();
            CHECK(actual == expected);
        }
    }
}

TEST_CASE("gold supports reconstruct every unique-path word") {
    auto words = unique_path_words(50, 71);
    CueMatrix C = build_cue_matrix(words, 3);
    for (std::size_t i = 0; i < words.size(); ++i) {
        // oracle: the word is the unique boundary-to-boundary string
        std::vector<std::string> active_grams_list;
        for (int id : C.rows[i]) active_grams_list.push_back(C.index.grams[static_cast<std::size_t>(id)]);
        std::set<std::string> oracle = enumerate_paths(active_grams_list, 3, 30);
        REQUIRE(oracle == std::set<std::string>{words[i]});

        auto candidates = synthesize_forms(gold_support(C, i), C.index, 3, 20, 30);
        REQUIRE(!candidates.empty());
        CHECK(candidates.front().word == words[i]);
        CHECK(candidates.front().path_score == doctest::Approx(1.0));
    }
}

TEST_CASE("support below the threshold yields NoPath") {
    CueMatrix C = build_cue_matrix({"abc"}, 3);
    SupportVector support;
    support.values = Eigen::RowVectorXd::Constant(C.cols(), 0.005);
    support.threshold = 0.01;
    try {
        synthesize_forms(support, C.index, 3, 5, 30);
        FAIL("expected NoPath");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NoPath);
    }
}

TEST_CASE("stronger support on a longer competitor wins the ranking") {
    // active grams of "zda" plus those of "zdadzą" with higher support on
    // the latter's grams
    CueMatrix C = build_cue_matrix({"zda", "zdadz\xc4\x85"}, 3);
    SupportVector support;
    support.values = Eigen::RowVectorXd::Zero(C.cols());
    for (int id : C.rows[1]) support.values[id] = 0.9;
    support.values[C.index.find("da#")] = 0.4; // the short form's own ending
    for (int id : C.rows[0]) {
        if (support.values[id] == 0.0) support.values[id] = 0.9; // shared prefix grams
    }

    auto candidates = synthesize_forms(support, C.index, 3, 10, 30);
    REQUIRE(candidates.size() >= 2);
    CHECK(candidates.front().word != "zda");
    CHECK(candidates.front().word == "zdadz\xc4\x85");
}

TEST_CASE("raising the threshold never enlarges the active set") {
    Rng rng(87);
    SupportVector support;
    support.values = Eigen::RowVectorXd(20);
    for (int i = 0; i < 20; ++i) support.values[i] = rng.next_double();
    support.threshold = 0.05;
    std::vector<int> previous = active_grams(support);
    for (double theta : {0.1, 0.3, 0.5, 0.9}) {
        support.threshold = theta;
        std::vector<int> active = active_grams(support);
        CHECK(std::includes(previous.begin(), previous.end(), active.begin(), active.end()));
        previous = active;
    }
}

TEST_CASE("a wider beam never lowers the best path score") {
    auto words = unique_path_words(6, 99);
    CueMatrix C = build_cue_matrix(words, 3);
    Rng rng(101);
    SupportVector support;
    support.values = Eigen::RowVectorXd(C.cols());
    for (int i = 0; i < C.cols(); ++i) support.values[i] = 0.2 + 0.8 * rng.next_double();
    double previous = -1.0;
    for (int beam : {1, 2, 4, 8, 16}) {
        auto candidates = synthesize_forms(support, C.index, 3, beam, 30);
        CHECK(candidates.front().path_score >= previous - 1e-12);
        previous = candidates.front().path_score;
    }
}

TEST_CASE("synthesized strings re-encode onto their own path vertices") {
    auto words = unique_path_words(10, 111);
    CueMatrix C = build_cue_matrix(words, 3);
    Rng rng(113);
    SupportVector support;
    support.values = Eigen::RowVectorXd(C.cols());
    for (int i = 0; i < C.cols(); ++i) support.values[i] = rng.next_double();
    std::vector<CandidateForm> candidates;
    try {
        candidates = synthesize_forms(support, C.index, 3, 20, 30);
    } catch (const Error& e) {
        REQUIRE(e.code() == Err::NoPath);
        return;
    }
    for (const CandidateForm& cand : candidates) {
        EncodedWord enc = encode_word(cand.word, C.index, 3);
        CHECK(enc.unseen.empty());
        std::set<int> path_set(cand.path.begin(), cand.path.end());
        CHECK(std::set<int>(enc.cols.begin(), enc.cols.end()) == path_set);
    }
}

TEST_CASE("feedback re-ranking selects the planted word over distractors") {
    auto words = unique_path_words(20, 121);
    CueMatrix C = build_cue_matrix(words, 3);
    Eigen::MatrixXd W0 = random_matrix(C.cols(), C.cols() + 5, 123);
    Eigen::MatrixXd S = C.dense() * W0;
    MappingPair pair = train_endstate(C, S, 0.0);

    // candidates: the true word plus two other training words
    std::vector<CandidateForm> candidates;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
        CandidateForm cand;
        cand.word = words[i];
        cand.path = C.rows[i];
        cand.path_score = 0.5;
        candidates.push_back(cand);
    }
    Eigen::VectorXd target = S.row(1).transpose();
    CandidateForm best =
        rerank_by_feedback(candidates, pair.F, target, C.index, 3, Metric::pearson);
    CHECK(best.word == words[1]);
    CHECK(best.feedback_score == doctest::Approx(1.0));
}

TEST_CASE("a single candidate is returned unchanged and ties use path score") {
    GramIndex index;
    index.add("#ab");
    index.add("ab#");
    Eigen::MatrixXd F = Eigen::MatrixXd::Ones(2, 3);

    std::vector<CandidateForm> single{{"ab", {0, 1}, 0.7, 0.0}};
    Eigen::VectorXd target = Eigen::VectorXd::LinSpaced(3, 0.1, 0.9);
    CandidateForm best = rerank_by_feedback(single, F, target, index, 3, Metric::cosine);
    CHECK(best.word == "ab");
    CHECK(best.path_score == 0.7);

    // identical encodings -> identical feedback; the higher path score wins
    std::vector<CandidateForm> tied{{"ab", {0, 1}, 0.3, 0.0}, {"ab", {0, 1}, 0.9, 0.0}};
    best = rerank_by_feedback(tied, F, target, index, 3, Metric::cosine);
    CHECK(best.path_score == 0.9);
}

TEST_CASE("planted lexicon gives perfect production accuracy") {
    auto words = unique_path_words(40, 131);
    CueMatrix C = build_cue_matrix(words, 3);
    Eigen::MatrixXd W0 = random_matrix(C.cols(), C.cols() + 8, 133);
    Eigen::MatrixXd S = C.dense() * W0;
    MappingPair pair = train_endstate(C, S, 0.0);

    Dataset dataset;
    dataset.words = words;
    dataset.S = S;
    for (const auto& w : words) dataset.features.push_back(entry(w, w, Pos::noun));

    ProductionReport report = evaluate_production(dataset, pair, C.index, 3);
    CHECK(report.accuracy == 1.0);
    for (const auto& record : report.records)
        CHECK(record.category == ProductionOutcome::correct);
}

TEST_CASE("empty evaluation set is rejected") {
    Dataset dataset;
    dataset.S.resize(0, 4);
    MappingPair pair;
    pair.F = Eigen::MatrixXd::Zero(3, 4);
    pair.G = Eigen::MatrixXd::Zero(4, 3);
    GramIndex index;
    index.add("#ab");
    try {
        evaluate_production(dataset, pair, index, 3);
        FAIL("expected EmptyEvaluation");
    } catch (const Error& e) {
        CHECK(e.code() == Err::EmptyEvaluation);
    }
}

TEST_CASE("words hitting NoPath are scored incorrect with an empty marker") {
    CueMatrix C = build_cue_matrix({"abc"}, 3);
    Dataset dataset;
    dataset.words = {"abc"};
    dataset.features = {entry("abc", "abc", Pos::noun)};
    dataset.S = Eigen::MatrixXd::Ones(1, 2);
    MappingPair pair;
    pair.F = Eigen::MatrixXd::Zero(C.cols(), 2);
    pair.G = Eigen::MatrixXd::Zero(2, C.cols()); // all supports 0 -> below theta

    ProductionReport report = evaluate_production(dataset, pair, C.index, 3);
    CHECK(report.accuracy == 0.0);
    REQUIRE(report.records.size() == 1);
    CHECK(report.records[0].produced.empty());
    CHECK(report.records[0].category == ProductionOutcome::nonword);
}

TEST_CASE("production errors are classified against the lexicon") {
    Lexicon lexicon;
    WordEntry imperf = entry("pcha\xc4\x87", "pcha\xc4\x87", Pos::verb);
    imperf.pos_detailed = PosDetailed::inf_verb;
    imperf.aspect = Aspect::imperf;
    WordEntry perf = entry("pchn\xc4\x85\xc4\x87", "pcha\xc4\x87", Pos::verb);
    perf.pos_detailed = PosDetailed::inf_verb;
    perf.aspect = Aspect::perf;
    WordEntry other = entry("spa\xc4\x87", "spa\xc4\x87", Pos::verb);
    other.pos_detailed = PosDetailed::inf_verb;
    other.aspect = Aspect::imperf;
    lexicon.entries = {imperf, perf, other};

    ProductionErrorRecord same = classify_production_error(imperf, perf.word, lexicon);
    CHECK(same.category == ProductionOutcome::same_lexeme_feature_change);
    CHECK(same.changed_features == std::vector<std::string>{"aspect"});

    CHECK(classify_production_error(imperf, imperf.word, lexicon).category ==
          ProductionOutcome::correct);
    CHECK(classify_production_error(imperf, other.word, lexicon).category ==
          ProductionOutcome::wrong_lexeme);
    CHECK(classify_production_error(imperf, "qqq", lexicon).category ==
          ProductionOutcome::nonword);
}
