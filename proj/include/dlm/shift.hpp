#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

#include "dlm/diag.hpp"
#include "dlm/lexdata.hpp"

namespace dlm {

struct ShiftLabels {
    std::string case_label;   // empty when the pair carries no case
    std::string gender_label; // finest gender available (gender5, else gender3)
    std::string pos_label;
};

/// Plural-minus-singular difference vectors, one per (lemma, case, gender,
/// pos) group with exactly one singular and one plural member.
struct ShiftVectorSet {
    Eigen::MatrixXd rows;
    std::vector<ShiftLabels> labels;
    std::vector<std::pair<int, int>> pair_ids; // (singular row, plural row) in the dataset
};

/// Groups with more than one form per number are skipped with a warning.
/// Raises Err::NoPairs when no group qualifies.
ShiftVectorSet shift_vectors(const Dataset& dataset, Diag* diag = nullptr);

} // namespace dlm
