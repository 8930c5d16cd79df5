#include "tridiag/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "tridiag/error.hpp"

namespace tridiag {

namespace {

constexpr std::size_t kMaxCluster = 400;

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t i, std::size_t j) { parent[find(i)] = find(j); }
};

}  // namespace

std::vector<std::size_t> optimal_assignment(std::span<const double> cost, std::size_t size) {
    // Shortest augmenting path with potentials, 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t n = size;
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

Matching match_multisets(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "multisets to be matched differ in size",
                    {{"left", x.size()}, {"right", y.size()}});
    }
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i].real() < x[j].real(); });

    // Nearest partner ignoring availability, used to detect contention.
    std::vector<std::size_t> nearest(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double dist = std::abs(x[i] - y[j]);
            if (dist < best) {
                best = dist;
                nearest[i] = j;
            }
        }
    }

    std::vector<std::size_t> assigned(n, 0);
    std::vector<char> taken(n, 0);
    for (std::size_t i : order) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (taken[j]) continue;
            const double dist = std::abs(x[i] - y[j]);
            if (dist < best) {
                best = dist;
                pick = j;
            }
        }
        assigned[i] = pick;
        taken[pick] = 1;
    }

    // Points that wanted the same partner, or whose greedy partner is not
    // their nearest, form ambiguous clusters.
    DisjointSets sets(n);
    std::vector<std::size_t> claimant(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = nearest[i];
        if (claimant[j] == n) {
            claimant[j] = i;
        } else {
            sets.unite(i, claimant[j]);
        }
    }
    std::vector<std::size_t> holder(n);
    for (std::size_t i = 0; i < n; ++i) holder[assigned[i]] = i;
    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i] != nearest[i]) sets.unite(i, holder[nearest[i]]);
    }

    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[sets.find(i)].push_back(i);
    for (const std::vector<std::size_t>& members : clusters) {
        const std::size_t m = members.size();
        if (m < 2 || m > kMaxCluster) continue;
        std::vector<std::size_t> cols(m);
        for (std::size_t k = 0; k < m; ++k) cols[k] = assigned[members[k]];
        std::vector<double> cost(m * m);
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t k = 0; k < m; ++k) cost[r * m + k] = std::abs(x[members[r]] - y[cols[k]]);
        const std::vector<std::size_t> best = optimal_assignment(cost, m);
        for (std::size_t r = 0; r < m; ++r) assigned[members[r]] = cols[best[r]];
    }

    Matching out;
    out.pairs.reserve(n);
    for (std::size_t i : order) {
        out.pairs.emplace_back(i, assigned[i]);
        out.max_distance = std::max(out.max_distance, std::abs(x[i] - y[assigned[i]]));
    }
    return out;
}

}  // namespace tridiag
