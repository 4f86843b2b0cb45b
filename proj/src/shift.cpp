#include "dlm/shift.hpp"

#include <unordered_map>

#include "dlm/errors.hpp"

namespace dlm {

ShiftVectorSet shift_vectors(const Dataset& dataset, Diag* diag) {
    struct Group {
        std::vector<int> singulars;
        std::vector<int> plurals;
    };
    std::unordered_map<std::string, Group> groups;
    std::vector<std::string> key_order;

    auto token_or_empty = [](const auto& field) -> std::string {
        if (field) return to_token(*field);
        return "";
    };

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const WordEntry& e = dataset.features[i];
        if (!e.number) continue;
        std::string key = e.lemma + '\t' + token_or_empty(e.case_) + '\t' +
                          token_or_empty(e.gender3) + '\t' + token_or_empty(e.gender5) + '\t' +
                          to_token(e.pos);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) key_order.push_back(key);
        if (*e.number == Number::sg) {
            it->second.singulars.push_back(static_cast<int>(i));
        } else {
            it->second.plurals.push_back(static_cast<int>(i));
        }
    }

    std::vector<std::pair<int, int>> pairs;
    long skipped = 0;
    for (const std::string& key : key_order) {
        const Group& g = groups[key];
        if (g.singulars.empty() || g.plurals.empty()) continue;
        if (g.singulars.size() != 1 || g.plurals.size() != 1) {
            ++skipped;
            continue;
        }
        pairs.emplace_back(g.singulars.front(), g.plurals.front());
    }
    if (skipped > 0) warn(diag, "semspace", "ambiguous_shift_groups", "", skipped);
    if (pairs.empty())
        raise(Err::NoPairs, "no (lemma, case, gender, pos) group has a singular-plural pair");

    ShiftVectorSet set;
    set.rows.resize(static_cast<Eigen::Index>(pairs.size()), dataset.S.cols());
    set.labels.reserve(pairs.size());
    for (std::size_t r = 0; r < pairs.size(); ++r) {
        auto [sg, pl] = pairs[r];
        set.rows.row(static_cast<Eigen::Index>(r)) = dataset.S.row(pl) - dataset.S.row(sg);
        const WordEntry& e = dataset.features[static_cast<std::size_t>(sg)];
        ShiftLabels labels;
        labels.case_label = token_or_empty(e.case_);
        labels.gender_label = e.gender5 ? to_token(*e.gender5) : token_or_empty(e.gender3);
        labels.pos_label = to_token(e.pos);
        set.labels.push_back(std::move(labels));
    }
    set.pair_ids = std::move(pairs);
    return set;
}

} // namespace dlm
