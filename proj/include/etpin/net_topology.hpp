#pragma once

// Graph modes (unit-weight Laplacian plus pinned-node set) and the switching
// network that pairs them with a Markov generator.
//
// Node indices are 1-based at the boundary (edge lists, pinned lists,
// diagnostics) and 0-based everywhere else.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "etpin/linalg.hpp"

namespace etpin {

/// Unordered link between two 1-based node indices.
using Edge = std::pair<std::size_t, std::size_t>;

/// Builds L with L_ij = -1 per link and L_ii = number of incident links.
inline Matrix laplacian_from_edges(std::span<const Edge> edges, std::size_t m) {
    Matrix lap(m, m);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [a, b] : edges) {
        if (a < 1 || a > m || b < 1 || b > m)
            throw std::invalid_argument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                        ") references a node outside 1.." + std::to_string(m));
        if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
        const auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw std::invalid_argument("duplicate edge (" + std::to_string(key.first) + "," +
                                        std::to_string(key.second) + ")");
        const std::size_t i = a - 1, j = b - 1;
        lap(i, j) = -1.0;
        lap(j, i) = -1.0;
        lap(i, i) += 1.0;
        lap(j, j) += 1.0;
    }
    return lap;
}

struct GraphMode {
    Matrix laplacian;
    std::vector<std::size_t> pinned;  // 0-based, sorted, unique

    /// Constructs from a 1-based edge list and 1-based pinned list.
    static GraphMode from_edges(std::span<const Edge> edges, std::size_t m,
                                std::span<const std::size_t> pinned_one_based) {
        GraphMode mode;
        mode.laplacian = laplacian_from_edges(edges, m);
        for (std::size_t p : pinned_one_based) {
            if (p < 1 || p > m)
                throw std::invalid_argument("pinned node " + std::to_string(p) + " outside 1.." + std::to_string(m));
            mode.pinned.push_back(p - 1);
        }
        std::sort(mode.pinned.begin(), mode.pinned.end());
        if (std::adjacent_find(mode.pinned.begin(), mode.pinned.end()) != mode.pinned.end())
            throw std::invalid_argument("pinned list contains a duplicate node");
        return mode;
    }

    std::size_t node_count() const noexcept { return laplacian.rows(); }

    /// D_i: 1 if node i is pinned in this mode, else 0.
    double pin_indicator(std::size_t i) const {
        return std::binary_search(pinned.begin(), pinned.end(), i) ? 1.0 : 0.0;
    }

    std::vector<std::size_t> neighbors(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < node_count(); ++j)
            if (j != i && laplacian(i, j) != 0.0) out.push_back(j);
        return out;
    }

    Matrix pinning_matrix() const {
        Matrix d(node_count(), node_count());
        for (std::size_t p : pinned) d(p, p) = 1.0;
        return d;
    }
};

struct SwitchingNetwork {
    std::vector<GraphMode> modes;
    Matrix generator;  // infinitesimal generator Q, N x N

    std::size_t mode_count() const noexcept { return modes.size(); }
    std::size_t node_count() const noexcept { return modes.empty() ? 0 : modes.front().node_count(); }
};

namespace detail {
inline std::string fmt_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}
}  // namespace detail

/// Checks every structural invariant and reports all violations found.
/// An empty result means the network is valid.
inline std::vector<std::string> validate_network(const SwitchingNetwork& net) {
    std::vector<std::string> diag;
    using detail::fmt_number;

    if (net.modes.empty()) diag.emplace_back("network has no modes");
    const std::size_t m = net.node_count();

    for (std::size_t u = 0; u < net.modes.size(); ++u) {
        const GraphMode& mode = net.modes[u];
        const std::string tag = "mode " + std::to_string(u + 1) + ": ";
        const Matrix& lap = mode.laplacian;
        if (!lap.square()) {
            diag.push_back(tag + "laplacian is not square");
            continue;
        }
        if (lap.rows() != m) {
            diag.push_back(tag + "has " + std::to_string(lap.rows()) + " nodes, expected " + std::to_string(m));
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) {
            double row_sum = 0.0;
            int links = 0;
            for (std::size_t j = 0; j < m; ++j) {
                row_sum += lap(i, j);
                if (i == j) continue;
                if (lap(i, j) != 0.0 && lap(i, j) != -1.0)
                    diag.push_back(tag + "laplacian entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                   ") is " + fmt_number(lap(i, j)) + ", expected 0 or -1");
                if (lap(i, j) == -1.0) ++links;
                if (lap(i, j) != lap(j, i) && i < j)
                    diag.push_back(tag + "laplacian is not symmetric at (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ")");
            }
            if (row_sum != 0.0)
                diag.push_back(tag + "laplacian row " + std::to_string(i + 1) + " sums to " + fmt_number(row_sum));
            if (lap(i, i) != static_cast<double>(links))
                diag.push_back(tag + "laplacian diagonal " + std::to_string(i + 1) + " is " + fmt_number(lap(i, i)) +
                               " but node has " + std::to_string(links) + " links");
        }
        for (std::size_t k = 0; k < mode.pinned.size(); ++k) {
            if (mode.pinned[k] >= m)
                diag.push_back(tag + "pinned node " + std::to_string(mode.pinned[k] + 1) + " out of range");
            if (k > 0 && mode.pinned[k] == mode.pinned[k - 1])
                diag.push_back(tag + "pinned node " + std::to_string(mode.pinned[k] + 1) + " listed twice");
        }
    }

    const Matrix& q = net.generator;
    if (!q.square() || q.rows() != net.modes.size()) {
        diag.push_back("generator is " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) + ", expected " +
                       std::to_string(net.modes.size()) + "x" + std::to_string(net.modes.size()));
        return diag;
    }
    for (std::size_t u = 0; u < q.rows(); ++u) {
        double row_sum = 0.0;
        for (std::size_t v = 0; v < q.cols(); ++v) {
            row_sum += q(u, v);
            if (u != v && q(u, v) < 0.0)
                diag.push_back("generator entry (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                               ") is negative: " + fmt_number(q(u, v)));
        }
        if (q(u, u) > 0.0)
            diag.push_back("generator diagonal " + std::to_string(u + 1) + " is positive: " + fmt_number(q(u, u)));
        double scale = 0.0;
        for (double v : q.row(u)) scale = std::max(scale, std::abs(v));
        if (std::abs(row_sum) > 1e-12 * std::max(1.0, scale))
            diag.push_back("generator row " + std::to_string(u + 1) + " sums to " + fmt_number(row_sum));
    }
    return diag;
}

}  // namespace etpin
