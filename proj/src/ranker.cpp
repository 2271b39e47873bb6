#include "boolkern/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace boolkern {

void RankerConfig::validate() const {
    if (!(lambda_p >= 0.0)) throw std::invalid_argument("ranker: lambda_p must be non-negative");
    if (max_iters == 0) throw std::invalid_argument("ranker: max_iters must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("ranker: tol must be positive");
}

std::vector<double> compute_q(const KernelMatrix& k) {
    const std::size_t m = k.size();
    std::vector<double> q(m, 0.0);
    if (m == 0) return q;
    for (std::size_t i = 0; i < m; ++i) {
        double sum = 0.0;
        for (double v : k.row(i)) sum += v;
        q[i] = sum / static_cast<double>(m);
    }
    return q;
}

std::vector<double> project_simplex(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i] - theta, 0.0);
    return w;
}

namespace {

void multiply(std::span<const double> k_pp, std::span<const double> x, std::vector<double>& out) {
    const std::size_t p = x.size();
    out.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        const double* row = k_pp.data() + i * p;
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) s += row[j] * x[j];
        out[i] = s;
    }
}

double objective_from_product(std::span<const double> k_alpha, std::span<const double> q_p,
                              double lambda_p, std::span<const double> alpha) {
    double quad = 0.0;
    double norm = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        quad += alpha[i] * k_alpha[i];
        norm += alpha[i] * alpha[i];
        lin += alpha[i] * q_p[i];
    }
    return quad + lambda_p * norm - 2.0 * lin;
}

double eigenvalue_bound(std::span<const double> k_pp, std::size_t p) {
    double trace = 0.0;
    double max_row = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        trace += k_pp[i * p + i];
        double row = 0.0;
        for (std::size_t j = 0; j < p; ++j) row += std::abs(k_pp[i * p + j]);
        max_row = std::max(max_row, row);
    }
    return std::min(std::abs(trace), max_row);
}

}  // namespace

double qp_objective(std::span<const double> k_pp, std::span<const double> q_p, double lambda_p,
                    std::span<const double> alpha) {
    std::vector<double> k_alpha;
    multiply(k_pp, alpha, k_alpha);
    return objective_from_product(k_alpha, q_p, lambda_p, alpha);
}

std::vector<double> solve_user(std::span<const double> k_pp, std::span<const double> q_p,
                               const RankerConfig& cfg, const SolveObserver& observe) {
    const std::size_t p = q_p.size();
    if (p == 0) throw std::invalid_argument("solve_user: user has no positive items");
    if (k_pp.size() != p * p) throw std::invalid_argument("solve_user: kernel block has wrong size");
    std::vector<double> alpha(p, 1.0 / static_cast<double>(p));
    if (p == 1) {
        if (observe) observe(0, qp_objective(k_pp, q_p, cfg.lambda_p, alpha));
        return alpha;
    }

    // Gradient 2 (K + lambda I) a - 2 q is Lipschitz with constant 2 (lambda_max + lambda).
    const double lipschitz = std::max(2.0 * (eigenvalue_bound(k_pp, p) + cfg.lambda_p), 1e-12);
    const double step = 1.0 / lipschitz;

    std::vector<double> k_alpha;
    multiply(k_pp, alpha, k_alpha);
    double objective = objective_from_product(k_alpha, q_p, cfg.lambda_p, alpha);
    if (observe) observe(0, objective);

    std::vector<double> trial(p);
    std::vector<double> k_trial;
    for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
        for (std::size_t i = 0; i < p; ++i) {
            const double grad = 2.0 * (k_alpha[i] + cfg.lambda_p * alpha[i] - q_p[i]);
            trial[i] = alpha[i] - step * grad;
        }
        auto next = project_simplex(trial);
        multiply(k_pp, next, k_trial);
        const double next_objective = objective_from_product(k_trial, q_p, cfg.lambda_p, next);
        if (next_objective > objective) break;  // rounding noise at the optimum
        const double decrease = objective - next_objective;
        alpha.swap(next);
        k_alpha.swap(k_trial);
        objective = next_objective;
        if (observe) observe(iter, objective);
        if (decrease < cfg.tol) break;
    }
    return alpha;
}

std::vector<double> score_user(const KernelMatrix& k, std::span<const Index> positives,
                               std::span<const double> alpha, std::span<const double> q) {
    const std::size_t m = k.size();
    if (positives.size() != alpha.size() || q.size() != m) {
        throw std::invalid_argument("score_user: dimension mismatch");
    }
    std::vector<double> scores(m, 0.0);
    for (std::size_t a = 0; a < positives.size(); ++a) {
        const double w = alpha[a];
        if (w == 0.0) continue;
        const auto row = k.row(positives[a]);
        for (std::size_t j = 0; j < m; ++j) scores[j] += w * row[j];
    }
    for (std::size_t j = 0; j < m; ++j) scores[j] -= q[j];
    return scores;
}

UserModel fit_user(const KernelMatrix& k, std::span<const double> q, Index user,
                   std::span<const Index> positives, const RankerConfig& cfg) {
    const std::size_t p = positives.size();
    std::vector<double> block(p * p);
    std::vector<double> q_p(p);
    for (std::size_t a = 0; a < p; ++a) {
        q_p[a] = q[positives[a]];
        for (std::size_t b = 0; b < p; ++b) block[a * p + b] = k(positives[a], positives[b]);
    }
    UserModel model;
    model.user = user;
    model.positive_items.assign(positives.begin(), positives.end());
    model.alpha = solve_user(block, q_p, cfg);
    return model;
}

std::vector<std::vector<double>> score_users(const KernelMatrix& k, std::span<const double> q,
                                             const std::vector<std::vector<Index>>& user_items,
                                             std::span<const Index> users, const RankerConfig& cfg) {
    cfg.validate();
    for (Index u : users) {
        if (u >= user_items.size() || user_items[u].empty()) {
            throw std::invalid_argument("score_users: user " + std::to_string(u) + " has no positive items");
        }
    }
    std::vector<std::vector<double>> out(users.size());
    const auto count = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
        const Index u = users[static_cast<std::size_t>(idx)];
        const auto& items = user_items[u];
        const auto model = fit_user(k, q, u, items, cfg);
        out[static_cast<std::size_t>(idx)] = score_user(k, model.positive_items, model.alpha, q);
    }
    return out;
}

std::vector<std::vector<double>> recommend_all(const BinaryInteractionMatrix& train,
                                               const KernelSpec& spec, const RankerConfig& cfg) {
    if (train.item_count() == 0 || train.interaction_count() == 0) {
        throw std::invalid_argument("recommend_all: empty training matrix");
    }
    const auto k = gram(train, spec);
    const auto q = compute_q(k);
    const auto by_user = train.user_rows();
    std::vector<Index> users;
    for (std::size_t u = 0; u < by_user.size(); ++u) {
        if (!by_user[u].empty()) users.push_back(static_cast<Index>(u));
    }
    auto scored = score_users(k, q, by_user, users, cfg);
    std::vector<std::vector<double>> out(train.user_count());
    for (std::size_t idx = 0; idx < users.size(); ++idx) out[users[idx]] = std::move(scored[idx]);
    return out;
}

}  // namespace boolkern
