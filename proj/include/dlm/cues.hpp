#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace dlm {

/// Bijection between n-gram strings and column ids, in first-appearance order.
struct GramIndex {
    std::vector<std::string> grams;
    std::unordered_map<std::string, int> lookup;

    int add(const std::string& gram);
    /// Column id, or -1 when the gram is unknown.
    int find(const std::string& gram) const;
    int size() const { return static_cast<int>(grams.size()); }
};

/// All consecutive n-grams of the word padded with one boundary `#` on each
/// side, in order, duplicates preserved. Grams are windows over Unicode
/// scalar values, so diacritics count as single symbols.
std::vector<std::string> extract_ngrams(const std::string& word, int order);

/// Sparse binary words-by-grams matrix; row i lists the distinct gram column
/// ids of word i in ascending order.
struct CueMatrix {
    int order = 3;
    std::vector<std::string> words;
    GramIndex index;
    std::vector<std::vector<int>> rows;

    int cols() const { return index.size(); }
    std::size_t nnz() const;
    Eigen::MatrixXd dense() const;
};

CueMatrix build_cue_matrix(const std::vector<std::string>& words, int order);

struct EncodedWord {
    std::vector<int> cols;             // known gram columns, ascending, distinct
    std::vector<std::string> unseen;   // grams absent from the index, in order
};

/// Encodes a (possibly held-out) word against a trained gram index. Unknown
/// grams contribute nothing and are returned in `unseen`.
EncodedWord encode_word(const std::string& word, const GramIndex& index, int order);

Eigen::RowVectorXd to_dense_row(const EncodedWord& encoded, int cols);

// TSV serialization: sparse triplets (row, col, 1) plus a gram-index sidecar.
void write_cue_triplets(const CueMatrix& matrix, std::ostream& out);
void write_gram_index(const GramIndex& index, std::ostream& out);
GramIndex read_gram_index(std::istream& in);

/// FNV-1a hash over the gram list; stored in mapping sidecars so a persisted
/// mapping can be checked against the index it was trained with.
std::uint64_t gram_index_hash(const GramIndex& index);

} // namespace dlm
