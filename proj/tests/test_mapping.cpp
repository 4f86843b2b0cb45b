#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "dlm/cues.hpp"
#include "dlm/errors.hpp"
#include "dlm/mapping.hpp"
#include "dlm/rng.hpp"

using namespace dlm;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
    return m;
}

// 40 distinct single-letter words: cue matrix is the identity, so the planted
// model C * W0 is exactly representable
std::vector<std::string> forty_letters() {
    std::vector<std::string> words;
    for (char c = 'a'; c <= 'z'; ++c) words.push_back(std::string(1, c));
    for (const char* w : {"\xc4\x85", "\xc4\x87", "\xc4\x99", "\xc5\x82", "\xc5\x84",
                          "\xc3\xb3", "\xc5\x9b", "\xc5\xba", "\xc5\xbc", "\xce\xb1",
                          "\xce\xb2", "\xce\xb3", "\xce\xb4", "\xce\xb5"})
        words.push_back(w);
    words.resize(40);
    return words;
}

} // namespace

TEST_CASE("solving against the identity returns the targets") {
    Eigen::MatrixXd Y = random_matrix(3, 2, 11);
    Eigen::MatrixXd W = solve_mapping(Eigen::MatrixXd::Identity(3, 3), Y, 0.0);
    CHECK((W - Y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a planted coefficient matrix is recovered from full-rank data") {
    Eigen::MatrixXd X = random_matrix(8, 3, 21);
    Eigen::MatrixXd W0 = random_matrix(3, 4, 22);
    Eigen::MatrixXd W = solve_mapping(X, X * W0, 0.0);
    CHECK((W - W0).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("solution norm is non-increasing in the ridge weight") {
    Eigen::MatrixXd X = random_matrix(12, 5, 31);
    Eigen::MatrixXd Y = random_matrix(12, 3, 32);
    double previous = -1.0;
    for (double ridge : {0.0, 0.1, 1.0, 10.0}) {
        double norm = solve_mapping(X, Y, ridge).norm();
        if (previous >= 0.0) CHECK(norm <= previous + 1e-12);
        previous = norm;
    }
}

TEST_CASE("zero-ridge full-rank solutions satisfy the normal equations") {
    Eigen::MatrixXd X = random_matrix(20, 6, 41);
    Eigen::MatrixXd Y = random_matrix(20, 4, 42);
    Eigen::MatrixXd W = solve_mapping(X, Y, 0.0);
    CHECK((X.transpose() * (X * W - Y)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("rank-deficient zero-ridge solves pick the minimum-norm solution") {
    // X has a repeated column, so solutions form an affine family
    Eigen::MatrixXd X = random_matrix(10, 4, 51);
    X.col(3) = X.col(1);
    Eigen::MatrixXd Y = random_matrix(10, 2, 52);
    Eigen::MatrixXd W = solve_mapping(X, Y, 0.0);

    Eigen::MatrixXd residual = X * W - Y;
    Eigen::VectorXd null_dir = Eigen::VectorXd::Zero(4);
    null_dir[1] = 1.0;
    null_dir[3] = -1.0; // X * null_dir = 0
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd other = W;
        for (Eigen::Index c = 0; c < other.cols(); ++c)
            other.col(c) += rng.next_gaussian() * null_dir;
        CHECK((X * other - Y).norm() == doctest::Approx(residual.norm()).epsilon(1e-10));
        CHECK(W.norm() <= other.norm() + 1e-10);
    }
}

TEST_CASE("non-finite input is rejected") {
    Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 2);
    Eigen::MatrixXd Y = Eigen::MatrixXd::Ones(2, 1);
    X(0, 0) = std::nan("");
    try {
        solve_mapping(X, Y, 0.0);
        FAIL("expected NonFiniteInput");
    } catch (const Error& e) {
        CHECK(e.code() == Err::NonFiniteInput);
    }
}

TEST_CASE("the two-word toy system reproduces its semantic matrix exactly") {
    CueMatrix C = build_cue_matrix({"dominus", "servus"}, 3);
    Eigen::MatrixXd S(2, 6);
    S << 0.1483, 2.8810, 1.4648, -0.8663, -0.4064, -2.0027,
         0.8104, 0.1501, 1.1981, -1.7612, 0.1230, -0.768;
    MappingPair pair = train_endstate(C, S, 0.0);
    CHECK((C.dense() * pair.F - S).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((S * pair.G - C.dense()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("self-mapping reproduces the cue matrix on training rows") {
    CueMatrix C = build_cue_matrix({"spa\xc4\x87", "sta\xc4\x87", "zda\xc4\x87"}, 3);
    Eigen::MatrixXd dense = C.dense();
    Eigen::MatrixXd F = solve_mapping(dense, dense, 0.0);
    CHECK((dense * F - dense).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("planted 40-word lexicon reaches full comprehension accuracy") {
    auto words = forty_letters();
    CueMatrix C = build_cue_matrix(words, 3);
    REQUIRE(C.cols() == 40); // one gram per single-letter word

    Eigen::MatrixXd W0 = random_matrix(40, 16, 61);
    Eigen::MatrixXd S = C.dense() * W0 + 1e-8 * random_matrix(40, 16, 62);
    MappingPair pair = train_endstate(C, S, 0.0);

    std::vector<int> targets(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) targets[i] = static_cast<int>(i);
    Eigen::MatrixXd predicted = predict_semantics(C.dense(), pair.F);
    for (Metric metric : {Metric::pearson, Metric::cosine}) {
        ComprehensionReport report = evaluate_comprehension(predicted, S, targets, metric);
        CHECK(report.accuracy == 1.0);
    }
}

TEST_CASE("predict_semantics is linear in its input rows") {
    Eigen::MatrixXd F = random_matrix(6, 4, 71);
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 6);
    CHECK(predict_semantics(zero, F).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(2, 6);
    onehot(0, 2) = 1.0;
    onehot(1, 5) = 1.0;
    Eigen::MatrixXd rows = predict_semantics(onehot, F);
    CHECK((rows.row(0) - F.row(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rows.row(1) - F.row(5)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(1, 6);
    sum(0, 2) = 1.0;
    sum(0, 5) = 1.0;
    CHECK((predict_semantics(sum, F) - (F.row(2) + F.row(5))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("similarity endpoints and a longhand pearson computation") {
    Eigen::VectorXd u(3);
    u << 1.0, 2.0, 3.0;
    CHECK(similarity(u, u, Metric::pearson) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(similarity(u, u, Metric::cosine) == doctest::Approx(1.0).epsilon(1e-12));
    Eigen::VectorXd neg = -u;
    CHECK(similarity(u, neg, Metric::pearson) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(similarity(u, neg, Metric::cosine) == doctest::Approx(-1.0).epsilon(1e-12));

    Eigen::VectorXd v(3);
    v << 1.0, 2.0, 3.0001;
    // longhand: r = sum((u-mu)(v-mv)) / sqrt(sum((u-mu)^2) sum((v-mv)^2))
    double mu = (1.0 + 2.0 + 3.0) / 3.0;
    double mv = (1.0 + 2.0 + 3.0001) / 3.0;
    double cov = 0.0, su = 0.0, sv = 0.0;
    for (int i = 0; i < 3; ++i) {
        cov += (u[i] - mu) * (v[i] - mv);
        su += (u[i] - mu) * (u[i] - mu);
        sv += (v[i] - mv) * (v[i] - mv);
    }
    double longhand = cov / std::sqrt(su * sv);
    CHECK(similarity(u, v, Metric::pearson) == doctest::Approx(longhand).epsilon(1e-9));
}

TEST_CASE("similarity invariances and degenerate inputs") {
    Eigen::VectorXd u(4), v(4);
    u << 0.3, -1.2, 2.0, 0.7;
    v << 1.1, 0.4, -0.5, 2.2;
    double cos_ref = similarity(u, v, Metric::cosine);
    double pear_ref = similarity(u, v, Metric::pearson);
    CHECK(similarity((3.5 * u).eval(), v, Metric::cosine) ==
          doctest::Approx(cos_ref).epsilon(1e-12));
    CHECK(similarity(u, (0.25 * v).eval(), Metric::cosine) ==
          doctest::Approx(cos_ref).epsilon(1e-12));
    Eigen::VectorXd shifted = v.array() + 7.0;
    CHECK(similarity(u, shifted, Metric::pearson) == doctest::Approx(pear_ref).epsilon(1e-9));
    CHECK(similarity((2.0 * u).eval(), shifted, Metric::pearson) ==
          doctest::Approx(pear_ref).epsilon(1e-9));

    Eigen::VectorXd constant = Eigen::VectorXd::Ones(4);
    try {
        similarity(constant, v, Metric::pearson);
        FAIL("expected ZeroVariance");
    } catch (const Error& e) {
        CHECK(e.code() == Err::ZeroVariance);
    }
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
    try {
        similarity(zero, v, Metric::cosine);
        FAIL("expected ZeroNorm");
    } catch (const Error& e) {
        CHECK(e.code() == Err::ZeroNorm);
    }
}

TEST_CASE("identical predicted and gold rows give full accuracy") {
    Eigen::MatrixXd gold = random_matrix(8, 5, 81);
    std::vector<int> targets = {0, 1, 2, 3, 4, 5, 6, 7};
    ComprehensionReport report = evaluate_comprehension(gold, gold, targets, Metric::pearson);
    CHECK(report.accuracy == 1.0);
    for (const auto& item : report.per_word) CHECK(item.nearest_id == item.target_id);
}

TEST_CASE("comprehension accuracy equals a brute-force nearest-neighbour count") {
    Eigen::MatrixXd gold = random_matrix(10, 3, 91);
    int variant = 0;
    for (double scale : {0.01, 0.3, 1.0, 3.0}) {
        Eigen::MatrixXd predicted =
            gold + scale * random_matrix(10, 3, 92 + static_cast<std::uint64_t>(variant++));
        std::vector<int> targets(10);
        for (int i = 0; i < 10; ++i) targets[static_cast<std::size_t>(i)] = i;

        for (Metric metric : {Metric::pearson, Metric::cosine}) {
            ComprehensionReport report = evaluate_comprehension(predicted, gold, targets, metric);
            int correct = 0;
            for (int i = 0; i < 10; ++i) {
                int best = -1;
                double best_score = -2.0;
                int ties = 0;
                for (int j = 0; j < 10; ++j) {
                    double s = similarity(predicted.row(i).transpose().eval(),
                                          gold.row(j).transpose().eval(), metric);
                    if (s > best_score) {
                        best_score = s;
                        best = j;
                        ties = 1;
                    } else if (s == best_score) {
                        ++ties;
                    }
                }
                if (best == i && ties == 1) ++correct;
            }
            CHECK(report.accuracy == doctest::Approx(correct / 10.0));
        }
    }
}

TEST_CASE("accuracy is invariant under a common permutation of gold rows and targets") {
    Eigen::MatrixXd gold = random_matrix(12, 4, 101);
    Eigen::MatrixXd predicted = gold + 0.4 * random_matrix(12, 4, 102);
    std::vector<int> targets(12);
    for (int i = 0; i < 12; ++i) targets[static_cast<std::size_t>(i)] = i;
    double base = evaluate_comprehension(predicted, gold, targets, Metric::pearson).accuracy;

    std::vector<int> perm(12);
    for (int i = 0; i < 12; ++i) perm[static_cast<std::size_t>(i)] = i;
    Rng rng(103);
    rng.shuffle(perm);
    Eigen::MatrixXd gold_perm(12, 4);
    std::vector<int> inverse(12);
    for (int i = 0; i < 12; ++i)
        inverse[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;
    for (int i = 0; i < 12; ++i) gold_perm.row(i) = gold.row(perm[static_cast<std::size_t>(i)]);
    std::vector<int> targets_perm(12);
    for (int i = 0; i < 12; ++i)
        targets_perm[static_cast<std::size_t>(i)] = inverse[static_cast<std::size_t>(i)];
    CHECK(evaluate_comprehension(predicted, gold_perm, targets_perm, Metric::pearson).accuracy ==
          doctest::Approx(base));
}

TEST_CASE("exact ties are scored incorrect") {
    Eigen::MatrixXd gold(2, 3);
    gold << 1.0, 0.0, 0.0,
            1.0, 0.0, 0.0; // duplicate rows: no strict maximum exists
    Eigen::MatrixXd predicted(1, 3);
    predicted << 1.0, 0.0, 0.0;
    ComprehensionReport report = evaluate_comprehension(predicted, gold, {0}, Metric::cosine);
    CHECK(report.accuracy == 0.0);
}
