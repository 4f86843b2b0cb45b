#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dlm/diag.hpp"

namespace dlm {

// ---------------------------------------------------------------------------
// morphosyntactic and (mor)phonotactic labels
// ---------------------------------------------------------------------------

enum class Pos { adjective, adverb, gerund, noun, participle, verb };

// Fine-grained scheme: participles split into four subtypes and verbs into
// future/past/present plus imperative, impersonal and infinitive.
enum class PosDetailed {
    adjective,
    adverb,
    gerund,
    noun,
    active_adj_participle,
    passive_adj_participle,
    pres_adv_participle,
    perf_adv_participle,
    fut_verb,
    past_verb,
    pres_verb,
    imperat_verb,
    impers_verb,
    inf_verb,
};

enum class Tense { past, present, future };
enum class Person { first, second, third };
enum class Case { nom, gen, dat, acc, instr, loc, voc };
enum class Gender3 { fem, masc, neut };
enum class Gender5 { fem, masc_anim, masc_inanim, masc_pers, neut };
enum class Number { sg, pl };
enum class Aspect { imperf, perf };
// Phonetic realizations of the consonantal prefixes; `si` stands for the
// alveolo-palatal fricative spelled "ɕ" in the input files.
enum class PrefixType { si, f, fs, s, v, vz, z };
enum class Parsability { most, less, least };
enum class Sonority { F, F_R, F_R_R, plat, plat_F, plat_F_R, plat_R, R, R_plat };
enum class ClusterSize { cc, ccc, cccc };

struct WordEntry {
    std::string word;  // orthographic form; non-empty, lowercase, no '#' or whitespace
    std::string lemma;
    Pos pos = Pos::noun;
    std::optional<PosDetailed> pos_detailed;
    std::optional<Tense> tense;
    std::optional<Person> person;
    std::optional<Case> case_;
    std::optional<Gender3> gender3;
    std::optional<Gender5> gender5;
    std::optional<Number> number;
    std::optional<Aspect> aspect;
    std::optional<PrefixType> prefix;
    std::optional<Parsability> parsability;
    std::optional<Sonority> sonority_profile;
    std::optional<ClusterSize> cluster_size;
    long frequency = 0;

    bool operator==(const WordEntry&) const = default;
};

struct Lexicon {
    std::vector<WordEntry> entries;
    std::string provenance;
};

// label <-> token conversions (tokens as they appear in the TSV columns)
std::string to_token(Pos v);
std::string to_token(PosDetailed v);
std::string to_token(Tense v);
std::string to_token(Person v);
std::string to_token(Case v);
std::string to_token(Gender3 v);
std::string to_token(Gender5 v);
std::string to_token(Number v);
std::string to_token(Aspect v);
std::string to_token(PrefixType v);
std::string to_token(Parsability v);
std::string to_token(Sonority v);
std::string to_token(ClusterSize v);

/// Names of all feature columns usable for classification, in canonical order.
const std::vector<std::string>& feature_columns();

/// Value of a named feature column for one entry; empty optional when absent.
/// Raises Err::UnknownFeature for names outside feature_columns().
std::optional<std::string> feature_value(const WordEntry& entry, const std::string& column);

struct Violation {
    std::size_t row; // index into Lexicon::entries
    std::string word;
    std::string message;
};

/// Checks word-form invariants and the "present iff applicable to pos" rule
/// for every optional feature. Returns all violations found.
std::vector<Violation> validate_lexicon(const Lexicon& lexicon);

// ---------------------------------------------------------------------------
// file formats
// ---------------------------------------------------------------------------

/// Parses the tab-separated lexicon format: header row naming a subset of the
/// WordEntry fields, one entry per line, empty cell = feature absent. Enums
/// decode case-insensitively; unknown columns are skipped with a warning.
Lexicon parse_lexicon_file(std::istream& in, Diag* diag = nullptr);

/// Writes all columns in canonical order; parse -> serialize -> parse is the
/// identity on content.
void serialize_lexicon(const Lexicon& lexicon, std::ostream& out);

struct EmbeddingTable {
    int dim = 0;
    std::vector<std::string> words;            // insertion order
    std::vector<Eigen::VectorXd> vectors;      // aligned to words
    std::unordered_map<std::string, int> index;

    const Eigen::VectorXd* find(const std::string& word) const;
    std::size_t size() const { return words.size(); }
};

/// Parses whitespace-separated text vectors: an optional "count dim" header
/// line followed by `word v1 .. v_dim` lines. Duplicate words keep the first
/// occurrence and are counted in a warning tally.
EmbeddingTable parse_embedding_file(std::istream& in,
                                    std::optional<int> expected_dim = std::nullopt,
                                    Diag* diag = nullptr);

void serialize_embeddings(const EmbeddingTable& table, std::ostream& out);

// ---------------------------------------------------------------------------
// dataset assembly
// ---------------------------------------------------------------------------

struct SyncreticResult {
    Lexicon lexicon;
    std::size_t dropped = 0;
};

/// For each set of entries sharing a word string, retains the entry with
/// maximal frequency (ties break by first occurrence).
SyncreticResult resolve_syncretic(const std::vector<WordEntry>& entries, Diag* diag = nullptr);

/// Analysis-ready dataset: row i of S is the embedding of words[i], and
/// features[i] carries the labels of words[i].
struct Dataset {
    std::vector<std::string> words;
    Eigen::MatrixXd S;
    std::vector<WordEntry> features;

    std::size_t size() const { return words.size(); }
    Dataset select(const std::vector<int>& ids) const;
};

struct JoinResult {
    Dataset dataset;
    std::size_t missing = 0; // lexicon words without a vector
};

/// Intersects a deduplicated lexicon with an embedding table, keeping lexicon
/// order. Raises Err::EmptyJoin when no word has a vector.
JoinResult join_dataset(const Lexicon& lexicon, const EmbeddingTable& table, Diag* diag = nullptr);

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<int> test_ids; // row ids into the source dataset
};

/// Deterministic held-out split: every test word's lemma occurs in train on
/// another word, and every feature value present in test occurs in train.
/// Selection walks seeded shuffles greedily (up to 1000 attempts); if the
/// requested size is unreachable the largest feasible test set is returned
/// with a warning. Raises Err::InfeasibleSplit when no word qualifies.
SplitResult split_heldout(const Dataset& dataset, int n_test, std::uint64_t seed,
                          Diag* diag = nullptr);

} // namespace dlm
