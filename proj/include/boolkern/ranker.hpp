#pragma once

#include "boolkern/data.hpp"
#include "boolkern/gram.hpp"

#include <functional>
#include <span>
#include <vector>

namespace boolkern {

struct RankerConfig {
    double lambda_p = 0.1;
    std::size_t max_iters = 1000;
    /// Stop once an iteration lowers the objective by less than this.
    double tol = 1e-8;

    /// Throws std::invalid_argument on negative lambda_p, zero max_iters or non-positive tol.
    void validate() const;
};

/// A user's distribution over their training positives.
struct UserModel {
    Index user = 0;
    std::vector<Index> positive_items;
    std::vector<double> alpha;
};

/// Row means of the full item kernel: q_i = (1/m) sum_j K[i][j].
std::vector<double> compute_q(const KernelMatrix& k);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::span<const double> v);

/// a' K a + lambda_p |a|^2 - 2 a' q for a row-major p x p block K.
double qp_objective(std::span<const double> k_pp, std::span<const double> q_p, double lambda_p,
                    std::span<const double> alpha);

using SolveObserver = std::function<void(std::size_t iteration, double objective)>;

/// Minimizes qp_objective over the simplex by projected gradient descent
/// from the uniform distribution, with step 1 / (2 (B + lambda_p)) where B
/// bounds the largest eigenvalue of the block (min of trace and largest
/// absolute row sum). Iterates until the decrease drops below cfg.tol or
/// cfg.max_iters is reached; the objective never increases. `observe`, when
/// set, sees the objective before the first step and after every step.
/// Throws std::invalid_argument for an empty positive set.
std::vector<double> solve_user(std::span<const double> k_pp, std::span<const double> q_p,
                               const RankerConfig& cfg, const SolveObserver& observe = {});

/// r = sum_k alpha_k K[positives_k, :] - q, one score per item.
std::vector<double> score_user(const KernelMatrix& k, std::span<const Index> positives,
                               std::span<const double> alpha, std::span<const double> q);

/// Extracts the positive block and its q entries, then solves.
UserModel fit_user(const KernelMatrix& k, std::span<const double> q, Index user,
                   std::span<const Index> positives, const RankerConfig& cfg);

/// Scores for the listed users (parallel over users). Entry k of the result
/// belongs to users[k]; `user_items` is indexed by user id.
std::vector<std::vector<double>> score_users(const KernelMatrix& k, std::span<const double> q,
                                             const std::vector<std::vector<Index>>& user_items,
                                             std::span<const Index> users, const RankerConfig& cfg);

/// End to end: Gram over the training items (once), q (once), then an
/// independent solve per user. Users without positives get an empty vector.
std::vector<std::vector<double>> recommend_all(const BinaryInteractionMatrix& train,
                                               const KernelSpec& spec, const RankerConfig& cfg);

}  // namespace boolkern
