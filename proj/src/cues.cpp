#include "dlm/cues.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "dlm/errors.hpp"
#include "dlm/utf8.hpp"

namespace dlm {

int GramIndex::add(const std::string& gram) {
    auto it = lookup.find(gram);
    if (it != lookup.end()) return it->second;
    int id = static_cast<int>(grams.size());
    grams.push_back(gram);
    lookup.emplace(gram, id);
    return id;
}

int GramIndex::find(const std::string& gram) const {
    auto it = lookup.find(gram);
    return it == lookup.end() ? -1 : it->second;
}

std::vector<std::string> extract_ngrams(const std::string& word, int order) {
    if (word.empty()) raise(Err::EmptyWord, "cannot extract n-grams from an empty word");
    if (order < 2) raise(Err::BadOrder, "gram order must be at least 2");
    if (word.find('#') != std::string::npos)
        raise(Err::EmptyWord, "word contains reserved boundary character '#'");

    std::vector<char32_t> padded;
    padded.reserve(word.size() + 2);
    padded.push_back(U'#');
    for (char32_t cp : utf8_decode(word)) padded.push_back(cp);
    padded.push_back(U'#');

    std::vector<std::string> grams;
    if (padded.size() < static_cast<std::size_t>(order)) return grams;
    for (std::size_t i = 0; i + static_cast<std::size_t>(order) <= padded.size(); ++i) {
        grams.push_back(utf8_encode(
            std::vector<char32_t>(padded.begin() + static_cast<std::ptrdiff_t>(i),
                                  padded.begin() + static_cast<std::ptrdiff_t>(i) + order)));
    }
    return grams;
}

CueMatrix build_cue_matrix(const std::vector<std::string>& words, int order) {
    CueMatrix matrix;
    matrix.order = order;
    matrix.words = words;
    matrix.rows.reserve(words.size());
    for (const std::string& word : words) {
        std::vector<int> row;
        for (const std::string& gram : extract_ngrams(word, order))
            row.push_back(matrix.index.add(gram));
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

std::size_t CueMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    return total;
}

Eigen::MatrixXd CueMatrix::dense() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j : rows[i]) out(static_cast<Eigen::Index>(i), j) = 1.0;
    return out;
}

EncodedWord encode_word(const std::string& word, const GramIndex& index, int order) {
    EncodedWord encoded;
    for (const std::string& gram : extract_ngrams(word, order)) {
        int id = index.find(gram);
        if (id < 0) {
            encoded.unseen.push_back(gram);
        } else {
            encoded.cols.push_back(id);
        }
    }
    std::sort(encoded.cols.begin(), encoded.cols.end());
    encoded.cols.erase(std::unique(encoded.cols.begin(), encoded.cols.end()),
                       encoded.cols.end());
    return encoded;
}

Eigen::RowVectorXd to_dense_row(const EncodedWord& encoded, int cols) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(cols);
    for (int id : encoded.cols) row[id] = 1.0;
    return row;
}

void write_cue_triplets(const CueMatrix& matrix, std::ostream& out) {
    out << "row\tcol\tvalue\n";
    for (std::size_t i = 0; i < matrix.rows.size(); ++i)
        for (int j : matrix.rows[i]) out << i << '\t' << j << "\t1\n";
}

void write_gram_index(const GramIndex& index, std::ostream& out) {
    out << "col\tgram\n";
    for (std::size_t i = 0; i < index.grams.size(); ++i)
        out << i << '\t' << index.grams[i] << '\n';
}

GramIndex read_gram_index(std::istream& in) {
    GramIndex index;
    std::string line;
    if (!std::getline(in, line)) raise(Err::EmptyInput, "gram index file is empty");
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos) raise(Err::IoError, "malformed gram index line");
        index.add(line.substr(tab + 1));
    }
    return index;
}

std::uint64_t gram_index_hash(const GramIndex& index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char byte) {
        h ^= byte;
        h *= 0x100000001b3ULL;
    };
    for (const std::string& gram : index.grams) {
        for (char c : gram) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

} // namespace dlm
