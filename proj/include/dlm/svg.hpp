#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace dlm {

/// Renders an axis-free scatterplot with a deterministic categorical palette
/// and a legend. Identical input yields identical bytes. At most 50 distinct
/// labels (Err::TooManyClasses otherwise); empty input yields a valid empty
/// canvas.
std::string emit_scatter(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels);

} // namespace dlm
