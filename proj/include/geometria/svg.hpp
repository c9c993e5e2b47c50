#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace geometria::svg {

// Standalone SVG emitters. Each chart embeds its data table as CSV inside
// a <metadata> block so figures stay reproducible without a plot runtime.

struct BoxplotSeries {
  std::string label;
  std::vector<double> values;
};

std::string boxplot(const std::string& title,
                    const std::vector<BoxplotSeries>& series,
                    const std::string& csv_table);

std::string heatmap(const std::string& title,
                    const std::vector<std::string>& labels,
                    const Eigen::MatrixXd& values,
                    const std::string& csv_table);

std::string scatter(const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<std::pair<double, double>>& points,
                    const std::string& csv_table);

}  // namespace geometria::svg
