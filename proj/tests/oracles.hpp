#pragma once

// Independent oracles used by the unit and acceptance suites. Nothing here
// may call into the implementation paths it checks: the Procrustes oracle
// searches the orthogonal group directly instead of using an SVD, and the
// JSD oracle evaluates the entropy form instead of the KL form.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "geometria/rng.hpp"

namespace oracles {

// Grid search over rotations and reflections (Euler angles for n = 3,
// Givens angles for n = 4) followed by exact single-angle coordinate
// ascent. Returns the standardized disparity 1 - (max trace)^2 for the two
// already-centered, unit-norm point configurations.
double procrustes_disparity_bruteforce(const Eigen::MatrixXd& a,
                                       const Eigen::MatrixXd& b);

// Center rows and scale to unit Frobenius norm (the shared normalization
// convention, applied before the search).
Eigen::MatrixXd standardize_points(const Eigen::MatrixXd& m);

// Base-2 Jensen-Shannon divergence via H(m) - (H(p) + H(q)) / 2.
double jsd_entropy_form(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// Levenshtein distance by plain recursive memoization.
std::uint64_t edit_distance_recursive(const std::string& a,
                                      const std::string& b);

// Spearman via independently computed average ranks and the closed-form
// Pearson over them.
double spearman_rank_oracle(const std::vector<double>& x,
                            const std::vector<double>& y);

// Deterministic random helpers for property tests.
Eigen::VectorXd random_probability_vector(geometria::Rng& rng, int dim);
Eigen::MatrixXd random_symmetric_structure(geometria::Rng& rng, int n);
Eigen::MatrixXd random_orthogonal(geometria::Rng& rng, int n);

}  // namespace oracles
