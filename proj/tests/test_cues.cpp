#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dlm/cues.hpp"
#include "dlm/errors.hpp"
#include "dlm/rng.hpp"
#include "dlm/utf8.hpp"

using namespace dlm;

namespace {

// words over a mixed Latin/Polish alphabet, 3-10 letters
std::vector<std::string> random_words(std::size_t count, std::uint64_t seed) {
    static const std::vector<std::string> letters = {
        "a", "b", "c", "d", "e", "k", "o", "p", "r", "s",
        "t", "u", "w", "z", "\xc4\x85", "\xc5\x82", "\xc5\xbc"}; // ą ł ż
    Rng rng(seed);
    std::set<std::string> seen;
    std::vector<std::string> words;
    while (words.size() < count) {
        std::size_t len = 3 + rng.next_below(8);
        std::string word;
        for (std::size_t i = 0; i < len; ++i)
            word += letters[static_cast<std::size_t>(rng.next_below(letters.size()))];
        if (seen.insert(word).second) words.push_back(word);
    }
    return words;
}

} // namespace

TEST_CASE("trigram extraction follows the boundary-padded window layout") {
    CHECK(extract_ngrams("dominus", 3) ==
          std::vector<std::string>{"#do", "dom", "omi", "min", "inu", "nus", "us#"});
    CHECK(extract_ngrams("ab", 3) == std::vector<std::string>{"#ab", "ab#"});
    CHECK(extract_ngrams("a", 3) == std::vector<std::string>{"#a#"});
}

TEST_CASE("extraction rejects bad input") {
    try {
        extract_ngrams("", 3);
        FAIL("expected EmptyWord");
    } catch (const Error& e) {
        CHECK(e.code() == Err::EmptyWord);
    }
    try {
        extract_ngrams("x", 1);
        FAIL("expected BadOrder");
    } catch (const Error& e) {
        CHECK(e.code() == Err::BadOrder);
    }
    CHECK_THROWS_AS(extract_ngrams("a#b", 3), Error);
}

TEST_CASE("grams are windows over code points, not bytes") {
    // "żaba": ż is a two-byte letter but a single symbol
    auto grams = extract_ngrams("\xc5\xbc\x61\x62\x61", 3);
    REQUIRE(grams.size() == 4);
    CHECK(grams[0] == "#\xc5\xbc\x61");
    CHECK(grams[3] == "ba#");
    for (const auto& g : grams) CHECK(utf8_length(g) == 3);
}

TEST_CASE("gram count is word length plus 3 minus order") {
    for (const std::string& word : random_words(60, 19)) {
        for (int n = 2; n <= 4; ++n) {
            auto grams = extract_ngrams(word, n);
            long expected = static_cast<long>(utf8_length(word)) + 3 - n;
            CHECK(static_cast<long>(grams.size()) == std::max(expected, 0L));
        }
    }
}

TEST_CASE("cue matrix shares columns between overlapping words") {
    CueMatrix m = build_cue_matrix({"dominus", "servus"}, 3);
    REQUIRE(m.words.size() == 2);
    int us_col = m.index.find("us#");
    REQUIRE(us_col >= 0);
    for (const auto& row : m.rows)
        CHECK(std::binary_search(row.begin(), row.end(), us_col));
    // dominus has 7 distinct trigrams, servus 6, one shared
    CHECK(m.cols() == 12);
    CHECK(m.nnz() == 13);
}

TEST_CASE("repeated grams within a word collapse to a single one") {
    CueMatrix m = build_cue_matrix({"aa"}, 3);
    CHECK(m.cols() == 2);
    CHECK(m.rows[0].size() == 2);
    CHECK(m.index.find("#aa") == 0);
    CHECK(m.index.find("aa#") == 1);

    // "aaaa" yields #aa, aaa, aaa, aa# -> three distinct columns
    CueMatrix r = build_cue_matrix({"aaaa"}, 3);
    CHECK(r.cols() == 3);
    CHECK(r.rows[0].size() == 3);
}

TEST_CASE("column count equals the union of per-word gram sets") {
    auto words = random_words(200, 101);
    CueMatrix m = build_cue_matrix(words, 3);

    std::set<std::string> oracle;
    for (const auto& word : words)
        for (const auto& gram : extract_ngrams(word, 3)) oracle.insert(gram);
    CHECK(static_cast<std::size_t>(m.cols()) == oracle.size());

    // per-row nonzeros equal the number of distinct grams of the word
    for (std::size_t i = 0; i < words.size(); ++i) {
        auto grams = extract_ngrams(words[i], 3);
        std::set<std::string> distinct(grams.begin(), grams.end());
        CHECK(m.rows[i].size() == distinct.size());
    }
}

TEST_CASE("encoding a training word reproduces its matrix row") {
    auto words = random_words(50, 55);
    CueMatrix m = build_cue_matrix(words, 3);
    for (std::size_t i = 0; i < words.size(); ++i) {
        EncodedWord enc = encode_word(words[i], m.index, 3);
        CHECK(enc.unseen.empty());
        CHECK(enc.cols == m.rows[i]);
    }
}

TEST_CASE("a word sharing no grams with training encodes to zero") {
    CueMatrix m = build_cue_matrix({"abc", "bcd"}, 3);
    EncodedWord enc = encode_word("xyz", m.index, 3);
    CHECK(enc.cols.empty());
    CHECK(enc.unseen == std::vector<std::string>{"#xy", "xyz", "yz#"});
    Eigen::RowVectorXd row = to_dense_row(enc, m.cols());
    CHECK(row.cwiseAbs().sum() == 0.0);
}

TEST_CASE("held-out encoding matches an independent set intersection") {
    auto words = random_words(50, 77);
    CueMatrix m = build_cue_matrix(words, 3);
    std::string heldout = "zasp\xc4\x85"; // zaspą
    EncodedWord enc = encode_word(heldout, m.index, 3);

    std::set<int> oracle;
    std::size_t unseen = 0;
    for (const auto& gram : extract_ngrams(heldout, 3)) {
        int id = m.index.find(gram);
        if (id >= 0) {
            oracle.insert(id);
        } else {
            ++unseen;
        }
    }
    CHECK(std::vector<int>(oracle.begin(), oracle.end()) == enc.cols);
    CHECK(enc.unseen.size() == unseen);
}

TEST_CASE("permuting the word list permutes rows and keeps the column set") {
    auto words = random_words(40, 31);
    CueMatrix a = build_cue_matrix(words, 3);

    auto shuffled = words;
    Rng rng(5);
    rng.shuffle(shuffled);
    CueMatrix b = build_cue_matrix(shuffled, 3);

    std::set<std::string> cols_a(a.index.grams.begin(), a.index.grams.end());
    std::set<std::string> cols_b(b.index.grams.begin(), b.index.grams.end());
    CHECK(cols_a == cols_b);

    for (std::size_t i = 0; i < shuffled.size(); ++i) {
        auto it = std::find(words.begin(), words.end(), shuffled[i]);
        std::size_t j = static_cast<std::size_t>(it - words.begin());
        std::set<std::string> grams_a, grams_b;
        for (int c : a.rows[j]) grams_a.insert(a.index.grams[static_cast<std::size_t>(c)]);
        for (int c : b.rows[i]) grams_b.insert(b.index.grams[static_cast<std::size_t>(c)]);
        CHECK(grams_a == grams_b);
    }
}

TEST_CASE("gram index round-trips through its TSV sidecar") {
    CueMatrix m = build_cue_matrix(random_words(30, 91), 3);
    std::ostringstream out;
    write_gram_index(m.index, out);
    std::istringstream in(out.str());
    GramIndex reloaded = read_gram_index(in);
    CHECK(reloaded.grams == m.index.grams);
    CHECK(gram_index_hash(reloaded) == gram_index_hash(m.index));
}
