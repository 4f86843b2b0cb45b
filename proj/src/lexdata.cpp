#include "dlm/lexdata.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "dlm/errors.hpp"
#include "dlm/rng.hpp"

namespace dlm {

namespace {

std::string normalize_token(const std::string& token) {
    std::string out;
    out.reserve(token.size());
    for (char c : token) {
        if (c == '.' || c == '-') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

template <typename T>
struct TokenTable {
    // first entry per value is the canonical spelling
    std::vector<std::pair<std::string, T>> entries;

    std::optional<T> parse(const std::string& raw) const {
        std::string norm = normalize_token(raw);
        for (const auto& [tok, val] : entries) {
            if (normalize_token(tok) == norm) return val;
        }
        return std::nullopt;
    }

    std::string canonical(T value) const {
        for (const auto& [tok, val] : entries) {
            if (val == value) return tok;
        }
        return "?";
    }
};

const TokenTable<Pos>& pos_table() {
    static const TokenTable<Pos> t{{
        {"adjective", Pos::adjective},
        {"adverb", Pos::adverb},
        {"gerund", Pos::gerund},
        {"noun", Pos::noun},
        {"participle", Pos::participle},
        {"verb", Pos::verb},
    }};
    return t;
}

const TokenTable<PosDetailed>& pos_detailed_table() {
    static const TokenTable<PosDetailed> t{{
        {"adjective", PosDetailed::adjective},
        {"adj", PosDetailed::adjective},
        {"adverb", PosDetailed::adverb},
        {"adv", PosDetailed::adverb},
        {"gerund", PosDetailed::gerund},
        {"ger", PosDetailed::gerund},
        {"noun", PosDetailed::noun},
        {"active_adj_participle", PosDetailed::active_adj_participle},
        {"active_adj_particip", PosDetailed::active_adj_participle},
        {"passive_adj_participle", PosDetailed::passive_adj_participle},
        {"passive_adj_particip", PosDetailed::passive_adj_participle},
        {"pres_adv_participle", PosDetailed::pres_adv_participle},
        {"pres_adv_particip", PosDetailed::pres_adv_participle},
        {"perf_adv_participle", PosDetailed::perf_adv_participle},
        {"perf_adv_particip", PosDetailed::perf_adv_participle},
        {"fut_verb", PosDetailed::fut_verb},
        {"past_verb", PosDetailed::past_verb},
        {"pres_verb", PosDetailed::pres_verb},
        {"imperat_verb", PosDetailed::imperat_verb},
        {"impers_verb", PosDetailed::impers_verb},
        {"inf_verb", PosDetailed::inf_verb},
    }};
    return t;
}

const TokenTable<Tense>& tense_table() {
    static const TokenTable<Tense> t{{
        {"past", Tense::past},
        {"present", Tense::present},
        {"pres", Tense::present},
        {"future", Tense::future},
        {"fut", Tense::future},
    }};
    return t;
}

const TokenTable<Person>& person_table() {
    static const TokenTable<Person> t{{
        {"first", Person::first},
        {"1", Person::first},
        {"second", Person::second},
        {"2", Person::second},
        {"third", Person::third},
        {"3", Person::third},
    }};
    return t;
}

const TokenTable<Case>& case_table() {
    static const TokenTable<Case> t{{
        {"nom", Case::nom},
        {"nominative", Case::nom},
        {"gen", Case::gen},
        {"genitive", Case::gen},
        {"dat", Case::dat},
        {"dative", Case::dat},
        {"acc", Case::acc},
        {"accusative", Case::acc},
        {"instr", Case::instr},
        {"instrumental", Case::instr},
        {"loc", Case::loc},
        {"locative", Case::loc},
        {"voc", Case::voc},
        {"vocative", Case::voc},
    }};
    return t;
}

const TokenTable<Gender3>& gender3_table() {
    static const TokenTable<Gender3> t{{
        {"fem", Gender3::fem},
        {"feminine", Gender3::fem},
        {"masc", Gender3::masc},
        {"masculine", Gender3::masc},
        {"neut", Gender3::neut},
        {"neuter", Gender3::neut},
    }};
    return t;
}

const TokenTable<Gender5>& gender5_table() {
    static const TokenTable<Gender5> t{{
        {"fem", Gender5::fem},
        {"feminine", Gender5::fem},
        {"masc_anim", Gender5::masc_anim},
        {"m_animate", Gender5::masc_anim},
        {"masc_inanim", Gender5::masc_inanim},
        {"m_inanimate", Gender5::masc_inanim},
        {"masc_pers", Gender5::masc_pers},
        {"m_personal", Gender5::masc_pers},
        {"neut", Gender5::neut},
        {"neuter", Gender5::neut},
    }};
    return t;
}

const TokenTable<Number>& number_table() {
    static const TokenTable<Number> t{{
        {"sg", Number::sg},
        {"singular", Number::sg},
        {"pl", Number::pl},
        {"plural", Number::pl},
    }};
    return t;
}

const TokenTable<Aspect>& aspect_table() {
    static const TokenTable<Aspect> t{{
        {"imperf", Aspect::imperf},
        {"imperfective", Aspect::imperf},
        {"perf", Aspect::perf},
        {"perfective", Aspect::perf},
    }};
    return t;
}

const TokenTable<PrefixType>& prefix_table() {
    static const TokenTable<PrefixType> t{{
        {"\xc9\x95", PrefixType::si}, // ɕ
        {"si", PrefixType::si},
        {"f", PrefixType::f},
        {"fs", PrefixType::fs},
        {"s", PrefixType::s},
        {"v", PrefixType::v},
        {"vz", PrefixType::vz},
        {"z", PrefixType::z},
    }};
    return t;
}

const TokenTable<Parsability>& parsability_table() {
    static const TokenTable<Parsability> t{{
        {"most", Parsability::most},
        {"less", Parsability::less},
        {"least", Parsability::least},
    }};
    return t;
}

const TokenTable<Sonority>& sonority_table() {
    static const TokenTable<Sonority> t{{
        {"F", Sonority::F},
        {"F+R", Sonority::F_R},
        {"F+R+R", Sonority::F_R_R},
        {"plat", Sonority::plat},
        {"plat+F", Sonority::plat_F},
        {"plat+F+R", Sonority::plat_F_R},
        {"plat+R", Sonority::plat_R},
        {"R", Sonority::R},
        {"R+plat", Sonority::R_plat},
    }};
    return t;
}

const TokenTable<ClusterSize>& cluster_size_table() {
    static const TokenTable<ClusterSize> t{{
        {"CC", ClusterSize::cc},
        {"CCC", ClusterSize::ccc},
        {"CCCC", ClusterSize::cccc},
    }};
    return t;
}

Pos coarse_of(PosDetailed d) {
    switch (d) {
    case PosDetailed::adjective: return Pos::adjective;
    case PosDetailed::adverb: return Pos::adverb;
    case PosDetailed::gerund: return Pos::gerund;
    case PosDetailed::noun: return Pos::noun;
    case PosDetailed::active_adj_participle:
    case PosDetailed::passive_adj_participle:
    case PosDetailed::pres_adv_participle:
    case PosDetailed::perf_adv_participle: return Pos::participle;
    default: return Pos::verb;
    }
}

std::optional<PosDetailed> derive_detailed(Pos pos, const std::optional<Tense>& tense) {
    switch (pos) {
    case Pos::adjective: return PosDetailed::adjective;
    case Pos::adverb: return PosDetailed::adverb;
    case Pos::gerund: return PosDetailed::gerund;
    case Pos::noun: return PosDetailed::noun;
    case Pos::verb:
        if (tense) {
            switch (*tense) {
            case Tense::past: return PosDetailed::past_verb;
            case Tense::present: return PosDetailed::pres_verb;
            case Tense::future: return PosDetailed::fut_verb;
            }
        }
        return std::nullopt;
    case Pos::participle: return std::nullopt; // subtype not recoverable
    }
    return std::nullopt;
}

// Which optional features a detailed class carries.
struct Applicable {
    bool tense = false, person = false, case_ = false, gender = false, number = false,
         aspect = false;
};

Applicable applicable_for(PosDetailed d) {
    Applicable a;
    switch (d) {
    case PosDetailed::adjective:
    case PosDetailed::noun:
        a.number = a.case_ = a.gender = true;
        break;
    case PosDetailed::adverb:
        break;
    case PosDetailed::gerund:
    case PosDetailed::active_adj_participle:
    case PosDetailed::passive_adj_participle:
        a.number = a.case_ = a.gender = a.aspect = true;
        break;
    case PosDetailed::pres_adv_participle:
    case PosDetailed::perf_adv_participle:
    case PosDetailed::impers_verb:
    case PosDetailed::inf_verb:
        a.aspect = true;
        break;
    case PosDetailed::fut_verb:
    case PosDetailed::past_verb:
    case PosDetailed::pres_verb:
        a.person = a.number = a.aspect = a.tense = true;
        break;
    case PosDetailed::imperat_verb:
        a.person = a.number = a.aspect = true;
        break;
    }
    return a;
}

// Without a detailed class only the union over the subtypes can be enforced.
Applicable applicable_union(Pos pos) {
    Applicable a;
    switch (pos) {
    case Pos::adjective:
    case Pos::noun:
        a.number = a.case_ = a.gender = true;
        break;
    case Pos::adverb:
        break;
    case Pos::gerund:
    case Pos::participle:
        a.number = a.case_ = a.gender = a.aspect = true;
        break;
    case Pos::verb:
        a.person = a.number = a.aspect = a.tense = true;
        break;
    }
    return a;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

template <typename T>
T parse_cell(const TokenTable<T>& table, const std::string& token, std::size_t line_no,
             const std::string& column) {
    auto value = table.parse(token);
    if (!value) {
        raise(Err::InvalidEnumValue, "row " + std::to_string(line_no) + ", column " + column +
                                         ": unknown value \"" + token + "\"");
    }
    return *value;
}

} // namespace

std::string to_token(Pos v) { return pos_table().canonical(v); }
std::string to_token(PosDetailed v) { return pos_detailed_table().canonical(v); }
std::string to_token(Tense v) { return tense_table().canonical(v); }
std::string to_token(Person v) { return person_table().canonical(v); }
std::string to_token(Case v) { return case_table().canonical(v); }
std::string to_token(Gender3 v) { return gender3_table().canonical(v); }
std::string to_token(Gender5 v) { return gender5_table().canonical(v); }
std::string to_token(Number v) { return number_table().canonical(v); }
std::string to_token(Aspect v) { return aspect_table().canonical(v); }
std::string to_token(PrefixType v) { return prefix_table().canonical(v); }
std::string to_token(Parsability v) { return parsability_table().canonical(v); }
std::string to_token(Sonority v) { return sonority_table().canonical(v); }
std::string to_token(ClusterSize v) { return cluster_size_table().canonical(v); }

const std::vector<std::string>& feature_columns() {
    static const std::vector<std::string> columns = {
        "pos",     "pos_detailed", "tense",       "person",
        "case",    "gender3",      "gender5",     "number",
        "aspect",  "prefix",       "parsability", "sonority_profile",
        "cluster_size",
    };
    return columns;
}

std::optional<std::string> feature_value(const WordEntry& e, const std::string& column) {
    auto opt = [](const auto& field) -> std::optional<std::string> {
        if (field) return to_token(*field);
        return std::nullopt;
    };
    if (column == "pos") return to_token(e.pos);
    if (column == "pos_detailed") return opt(e.pos_detailed);
    if (column == "tense") return opt(e.tense);
    if (column == "person") return opt(e.person);
    if (column == "case") return opt(e.case_);
    if (column == "gender3") return opt(e.gender3);
    if (column == "gender5") return opt(e.gender5);
    if (column == "number") return opt(e.number);
    if (column == "aspect") return opt(e.aspect);
    if (column == "prefix") return opt(e.prefix);
    if (column == "parsability") return opt(e.parsability);
    if (column == "sonority_profile") return opt(e.sonority_profile);
    if (column == "cluster_size") return opt(e.cluster_size);
    raise(Err::UnknownFeature, "no feature column named \"" + column + "\"");
}

std::vector<Violation> validate_lexicon(const Lexicon& lexicon) {
    std::vector<Violation> out;
    auto flag = [&](std::size_t row, const std::string& word, std::string msg) {
        out.push_back({row, word, std::move(msg)});
    };

    for (std::size_t i = 0; i < lexicon.entries.size(); ++i) {
        const WordEntry& e = lexicon.entries[i];
        if (e.word.empty()) flag(i, e.word, "empty word form");
        for (char c : e.word) {
            if (c == '#') {
                flag(i, e.word, "word contains reserved boundary character '#'");
                break;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                flag(i, e.word, "word contains whitespace");
                break;
            }
        }
        for (char c : e.word) {
            if (c >= 'A' && c <= 'Z') {
                flag(i, e.word, "word is not lowercase");
                break;
            }
        }
        if (e.frequency < 0) flag(i, e.word, "negative frequency");

        if (e.pos_detailed && coarse_of(*e.pos_detailed) != e.pos) {
            flag(i, e.word,
                 "pos_detailed " + to_token(*e.pos_detailed) + " inconsistent with pos " +
                     to_token(e.pos));
        }
        if (e.pos_detailed && e.tense) {
            PosDetailed d = *e.pos_detailed;
            bool ok = (d == PosDetailed::past_verb && *e.tense == Tense::past) ||
                      (d == PosDetailed::pres_verb && *e.tense == Tense::present) ||
                      (d == PosDetailed::fut_verb && *e.tense == Tense::future);
            bool tensed = d == PosDetailed::past_verb || d == PosDetailed::pres_verb ||
                          d == PosDetailed::fut_verb;
            if (tensed && !ok) flag(i, e.word, "tense inconsistent with pos_detailed");
        }
        if (e.gender3 && e.gender5) {
            Gender3 expect = Gender3::masc;
            if (*e.gender5 == Gender5::fem) expect = Gender3::fem;
            if (*e.gender5 == Gender5::neut) expect = Gender3::neut;
            if (*e.gender3 != expect) flag(i, e.word, "gender5 inconsistent with gender3");
        }

        // presence-iff-applicable; without a detailed class only presence
        // outside the coarse union can be checked
        Applicable a = e.pos_detailed ? applicable_for(*e.pos_detailed) : applicable_union(e.pos);
        bool strict = e.pos_detailed.has_value();
        auto check = [&](bool applies, bool present, const char* name) {
            if (present && !applies)
                flag(i, e.word, std::string(name) + " not applicable to this part of speech");
            else if (strict && applies && !present)
                flag(i, e.word, std::string(name) + " missing but applicable");
        };
        check(a.tense, e.tense.has_value(), "tense");
        check(a.person, e.person.has_value(), "person");
        check(a.case_, e.case_.has_value(), "case");
        check(a.gender, e.gender3.has_value() || e.gender5.has_value(), "gender");
        check(a.number, e.number.has_value(), "number");
        check(a.aspect, e.aspect.has_value(), "aspect");
    }
    return out;
}

Lexicon parse_lexicon_file(std::istream& in, Diag* diag) {
    std::string line;
    if (!std::getline(in, line)) raise(Err::MissingColumn, "empty lexicon file, no header row");
    line = strip_cr(line);

    std::vector<std::string> header = split_tabs(line);
    std::vector<std::string> columns(header.size());
    long unknown_columns = 0;
    static const std::unordered_set<std::string> known = {
        "word",    "lemma",   "pos",    "pos_detailed", "tense",
        "person",  "case",    "gender3", "gender5",     "number",
        "aspect",  "prefix",  "parsability", "sonority_profile",
        "cluster_size", "frequency",
    };
    for (std::size_t c = 0; c < header.size(); ++c) {
        std::string name = normalize_token(header[c]);
        if (known.count(name)) {
            columns[c] = name;
        } else {
            columns[c] = "";
            ++unknown_columns;
            warn(diag, "lexdata", "unknown_column", header[c]);
        }
    }
    if (std::find(columns.begin(), columns.end(), "word") == columns.end())
        raise(Err::MissingColumn, "lexicon header has no \"word\" column");

    Lexicon lexicon;
    bool saw_detailed_column =
        std::find(columns.begin(), columns.end(), "pos_detailed") != columns.end();

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        std::vector<std::string> cells = split_tabs(line);
        if (cells.size() > columns.size())
            warn(diag, "lexdata", "extra_cells", "line " + std::to_string(line_no));
        cells.resize(columns.size());

        WordEntry e;
        bool have_pos = false;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const std::string& name = columns[c];
            const std::string& cell = cells[c];
            if (name.empty() || cell.empty()) continue;
            if (name == "word") {
                e.word = cell;
            } else if (name == "lemma") {
                e.lemma = cell;
            } else if (name == "pos") {
                e.pos = parse_cell(pos_table(), cell, line_no, "pos");
                have_pos = true;
            } else if (name == "pos_detailed") {
                e.pos_detailed = parse_cell(pos_detailed_table(), cell, line_no, "pos_detailed");
            } else if (name == "tense") {
                e.tense = parse_cell(tense_table(), cell, line_no, "tense");
            } else if (name == "person") {
                e.person = parse_cell(person_table(), cell, line_no, "person");
            } else if (name == "case") {
                e.case_ = parse_cell(case_table(), cell, line_no, "case");
            } else if (name == "gender3") {
                e.gender3 = parse_cell(gender3_table(), cell, line_no, "gender3");
            } else if (name == "gender5") {
                e.gender5 = parse_cell(gender5_table(), cell, line_no, "gender5");
            } else if (name == "number") {
                e.number = parse_cell(number_table(), cell, line_no, "number");
            } else if (name == "aspect") {
                e.aspect = parse_cell(aspect_table(), cell, line_no, "aspect");
            } else if (name == "prefix") {
                e.prefix = parse_cell(prefix_table(), cell, line_no, "prefix");
            } else if (name == "parsability") {
                e.parsability = parse_cell(parsability_table(), cell, line_no, "parsability");
            } else if (name == "sonority_profile") {
                e.sonority_profile = parse_cell(sonority_table(), cell, line_no, "sonority_profile");
            } else if (name == "cluster_size") {
                e.cluster_size = parse_cell(cluster_size_table(), cell, line_no, "cluster_size");
            } else if (name == "frequency") {
                long value = 0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
                if (ec != std::errc{} || ptr != cell.data() + cell.size())
                    raise(Err::InvalidEnumValue, "row " + std::to_string(line_no) +
                                                     ", column frequency: not an integer \"" +
                                                     cell + "\"");
                e.frequency = value;
            }
        }
        if (e.word.empty())
            raise(Err::InvalidEnumValue,
                  "row " + std::to_string(line_no) + ", column word: empty word form");

        if (e.pos_detailed) {
            if (!have_pos) e.pos = coarse_of(*e.pos_detailed);
        } else if (have_pos && !saw_detailed_column) {
            e.pos_detailed = derive_detailed(e.pos, e.tense);
        }
        lexicon.entries.push_back(std::move(e));
    }
    return lexicon;
}

void serialize_lexicon(const Lexicon& lexicon, std::ostream& out) {
    out << "word\tlemma\tpos\tpos_detailed\ttense\tperson\tcase\tgender3\tgender5\tnumber\t"
           "aspect\tprefix\tparsability\tsonority_profile\tcluster_size\tfrequency\n";
    auto cell = [](const auto& field) -> std::string {
        if (field) return to_token(*field);
        return "";
    };
    for (const WordEntry& e : lexicon.entries) {
        out << e.word << '\t' << e.lemma << '\t' << to_token(e.pos) << '\t'
            << cell(e.pos_detailed) << '\t' << cell(e.tense) << '\t' << cell(e.person) << '\t'
            << cell(e.case_) << '\t' << cell(e.gender3) << '\t' << cell(e.gender5) << '\t'
            << cell(e.number) << '\t' << cell(e.aspect) << '\t' << cell(e.prefix) << '\t'
            << cell(e.parsability) << '\t' << cell(e.sonority_profile) << '\t'
            << cell(e.cluster_size) << '\t' << e.frequency << '\n';
    }
}

const Eigen::VectorXd* EmbeddingTable::find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return nullptr;
    return &vectors[static_cast<std::size_t>(it->second)];
}

EmbeddingTable parse_embedding_file(std::istream& in, std::optional<int> expected_dim,
                                    Diag* diag) {
    EmbeddingTable table;
    long duplicates = 0;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;

    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        std::istringstream cells(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (cells >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;

        if (first_content_line && tokens.size() == 2) {
            // optional "count dim" header
            long count = 0, dim = 0;
            auto r1 = std::from_chars(tokens[0].data(), tokens[0].data() + tokens[0].size(), count);
            auto r2 = std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), dim);
            bool full1 = r1.ec == std::errc{} && r1.ptr == tokens[0].data() + tokens[0].size();
            bool full2 = r2.ec == std::errc{} && r2.ptr == tokens[1].data() + tokens[1].size();
            if (full1 && full2 && count > 0 && dim > 0) {
                if (expected_dim && *expected_dim != dim)
                    raise(Err::DimensionMismatch, "header declares dim " + std::to_string(dim) +
                                                      ", expected " +
                                                      std::to_string(*expected_dim));
                table.dim = static_cast<int>(dim);
                first_content_line = false;
                continue;
            }
        }
        first_content_line = false;

        const std::string& word = tokens[0];
        int dim = static_cast<int>(tokens.size()) - 1;
        if (dim < 1)
            raise(Err::DimensionMismatch,
                  "line " + std::to_string(line_no) + ": no values for word \"" + word + "\"");
        if (table.dim == 0) {
            if (expected_dim && *expected_dim != dim)
                raise(Err::DimensionMismatch, "line " + std::to_string(line_no) + ": found " +
                                                  std::to_string(dim) + " values, expected " +
                                                  std::to_string(*expected_dim));
            table.dim = dim;
        } else if (dim != table.dim) {
            raise(Err::DimensionMismatch, "line " + std::to_string(line_no) + ": found " +
                                              std::to_string(dim) + " values, expected " +
                                              std::to_string(table.dim));
        }

        if (table.index.count(word)) {
            ++duplicates;
            continue; // keep the first occurrence
        }

        Eigen::VectorXd v(table.dim);
        for (int k = 0; k < table.dim; ++k) {
            const std::string& cell = tokens[static_cast<std::size_t>(k) + 1];
            char* end = nullptr;
            double value = std::strtod(cell.c_str(), &end);
            if (end != cell.c_str() + cell.size() || !std::isfinite(value))
                raise(Err::NonFiniteValue, "line " + std::to_string(line_no) +
                                               ": bad value \"" + cell + "\"");
            v[k] = value;
        }
        table.index.emplace(word, static_cast<int>(table.words.size()));
        table.words.push_back(word);
        table.vectors.push_back(std::move(v));
    }

    if (table.words.empty()) raise(Err::EmptyInput, "embedding stream has no vectors");
    if (duplicates > 0) warn(diag, "lexdata", "duplicate_embedding_words", "", duplicates);
    return table;
}

void serialize_embeddings(const EmbeddingTable& table, std::ostream& out) {
    out << table.words.size() << ' ' << table.dim << '\n';
    char buf[40];
    for (std::size_t i = 0; i < table.words.size(); ++i) {
        out << table.words[i];
        const Eigen::VectorXd& v = table.vectors[i];
        for (int k = 0; k < table.dim; ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", v[k]);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

SyncreticResult resolve_syncretic(const std::vector<WordEntry>& entries, Diag* diag) {
    SyncreticResult result;
    std::unordered_map<std::string, std::size_t> slot; // word -> index in output
    for (const WordEntry& e : entries) {
        auto it = slot.find(e.word);
        if (it == slot.end()) {
            slot.emplace(e.word, result.lexicon.entries.size());
            result.lexicon.entries.push_back(e);
        } else if (e.frequency > result.lexicon.entries[it->second].frequency) {
            result.lexicon.entries[it->second] = e;
        }
    }
    result.dropped = entries.size() - result.lexicon.entries.size();
    if (result.dropped > 0)
        warn(diag, "lexdata", "syncretic_rows_dropped", "", static_cast<long>(result.dropped));
    return result;
}

Dataset Dataset::select(const std::vector<int>& ids) const {
    Dataset out;
    out.words.reserve(ids.size());
    out.features.reserve(ids.size());
    out.S.resize(static_cast<Eigen::Index>(ids.size()), S.cols());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        int id = ids[i];
        out.words.push_back(words[static_cast<std::size_t>(id)]);
        out.features.push_back(features[static_cast<std::size_t>(id)]);
        out.S.row(static_cast<Eigen::Index>(i)) = S.row(id);
    }
    return out;
}

JoinResult join_dataset(const Lexicon& lexicon, const EmbeddingTable& table, Diag* diag) {
    JoinResult result;
    std::vector<const Eigen::VectorXd*> rows;
    for (const WordEntry& e : lexicon.entries) {
        const Eigen::VectorXd* v = table.find(e.word);
        if (!v) {
            ++result.missing;
            continue;
        }
        result.dataset.words.push_back(e.word);
        result.dataset.features.push_back(e);
        rows.push_back(v);
    }
    if (rows.empty()) raise(Err::EmptyJoin, "no lexicon word has an embedding");
    result.dataset.S.resize(static_cast<Eigen::Index>(rows.size()), table.dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        result.dataset.S.row(static_cast<Eigen::Index>(i)) = *rows[i];
    if (result.missing > 0)
        warn(diag, "lexdata", "words_without_vectors", "", static_cast<long>(result.missing));
    return result;
}

SplitResult split_heldout(const Dataset& dataset, int n_test, std::uint64_t seed, Diag* diag) {
    const std::size_t n = dataset.size();
    if (n_test <= 0 || static_cast<std::size_t>(n_test) >= n)
        raise(Err::InfeasibleSplit,
              "n_test must be positive and smaller than the dataset size");

    // Intern the constraint keys (lemma plus every feature value) so each
    // attempt only copies a count vector.
    std::unordered_map<std::string, int> key_ids;
    auto intern = [&](const std::string& key) {
        auto [it, inserted] = key_ids.emplace(key, static_cast<int>(key_ids.size()));
        return it->second;
    };
    std::vector<std::vector<int>> entry_keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        const WordEntry& e = dataset.features[i];
        entry_keys[i].push_back(intern("lemma\t" + e.lemma));
        for (const std::string& column : feature_columns()) {
            if (auto value = feature_value(e, column))
                entry_keys[i].push_back(intern(column + "\t" + *value));
        }
    }
    std::vector<int> base_counts(key_ids.size(), 0);
    for (const auto& keys : entry_keys)
        for (int k : keys) ++base_counts[static_cast<std::size_t>(k)];

    constexpr int kMaxAttempts = 1000;
    std::vector<int> best_test;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<int> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        rng.shuffle(order);

        std::vector<int> counts = base_counts;
        std::vector<int> test;
        for (int idx : order) {
            const auto& keys = entry_keys[static_cast<std::size_t>(idx)];
            bool ok = true;
            for (int k : keys) {
                if (counts[static_cast<std::size_t>(k)] - 1 < 1) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (int k : keys) --counts[static_cast<std::size_t>(k)];
            test.push_back(idx);
            if (static_cast<int>(test.size()) == n_test) break;
        }
        if (test.size() > best_test.size()) best_test = std::move(test);
        if (static_cast<int>(best_test.size()) == n_test) break;
    }

    if (best_test.empty())
        raise(Err::InfeasibleSplit, "no word satisfies the held-out constraints");
    if (static_cast<int>(best_test.size()) < n_test)
        warn(diag, "lexdata", "heldout_short",
             "requested " + std::to_string(n_test) + ", achieved " +
                 std::to_string(best_test.size()));

    std::sort(best_test.begin(), best_test.end());
    std::vector<char> in_test(n, 0);
    for (int idx : best_test) in_test[static_cast<std::size_t>(idx)] = 1;
    std::vector<int> train_ids;
    train_ids.reserve(n - best_test.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!in_test[i]) train_ids.push_back(static_cast<int>(i));

    SplitResult result;
    result.train = dataset.select(train_ids);
    result.test = dataset.select(best_test);
    result.test_ids = std::move(best_test);
    return result;
}

} // namespace dlm
