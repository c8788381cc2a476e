#include "tumatch/solver_homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "tumatch/common.hpp"
#include "tumatch/kernels.hpp"
#include "tumatch/solver_entropic.hpp"

namespace tumatch {
namespace {

// Spanning-tree basis for the bipartite transportation problem. Rows are
// nodes 0..tx-1, columns are nodes tx..tx+ty-1; each basic cell is an edge.
struct Basis {
    std::size_t tx, ty;
    std::vector<char> basic;             // tx*ty flags
    std::vector<std::vector<std::size_t>> adj; // node -> incident basic cells

    std::size_t cell(std::size_t i, std::size_t j) const { return i * ty + j; }
    std::size_t row_node(std::size_t c) const { return c / ty; }
    std::size_t col_node(std::size_t c) const { return tx + c % ty; }

    void add(std::size_t c) {
        basic[c] = 1;
        adj[row_node(c)].push_back(c);
        adj[col_node(c)].push_back(c);
    }
    void remove(std::size_t c) {
        basic[c] = 0;
        auto drop = [c](std::vector<std::size_t>& v) {
            v.erase(std::find(v.begin(), v.end(), c));
        };
        drop(adj[row_node(c)]);
        drop(adj[col_node(c)]);
    }
};

// Northwest-corner start: a spanning tree with tx+ty-1 basic cells,
// possibly with zero allocations under degenerate margins.
void northwest_corner(const Margins& m, Table& flow, Basis& basis) {
    std::vector<double> supply = m.p, demand = m.q;
    std::size_t i = 0, j = 0;
    const std::size_t tx = m.p.size(), ty = m.q.size();
    while (true) {
        const double amt = std::min(supply[i], demand[j]);
        flow(i, j) = amt;
        basis.add(basis.cell(i, j));
        supply[i] -= amt;
        demand[j] -= amt;
        if (i + 1 == tx && j + 1 == ty) break;
        if (supply[i] <= demand[j] && i + 1 < tx)
            ++i;
        else
            ++j;
    }
}

// Dual prices from the tree: u[0] = 0, then u_i + v_j = phi_ij along basic
// cells.
void compute_duals(const Table& phi, const Basis& basis, std::vector<double>& u,
                   std::vector<double>& v) {
    const std::size_t tx = basis.tx, ty = basis.ty;
    std::vector<char> seen(tx + ty, 0);
    std::vector<std::size_t> stack{0};
    u.assign(tx, 0.0);
    v.assign(ty, 0.0);
    seen[0] = 1;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        for (const std::size_t c : basis.adj[node]) {
            const std::size_t rn = basis.row_node(c), cn = basis.col_node(c);
            const std::size_t other = (node == rn) ? cn : rn;
            if (seen[other]) continue;
            seen[other] = 1;
            const std::size_t i = c / ty, j = c % ty;
            if (other == cn)
                v[j] = phi(i, j) - u[i];
            else
                u[i] = phi(i, j) - v[j];
            stack.push_back(other);
        }
    }
}

// Unique tree path between the two endpoints of the entering cell.
std::vector<std::size_t> tree_path(const Basis& basis, std::size_t from_node,
                                   std::size_t to_node) {
    const std::size_t n = basis.tx + basis.ty;
    std::vector<std::size_t> parent_cell(n, SIZE_MAX), parent_node(n, SIZE_MAX);
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{from_node};
    seen[from_node] = 1;
    while (!stack.empty()) {
        const std::size_t node = stack.back();
        stack.pop_back();
        if (node == to_node) break;
        for (const std::size_t c : basis.adj[node]) {
            const std::size_t rn = basis.row_node(c), cn = basis.col_node(c);
            const std::size_t other = (node == rn) ? cn : rn;
            if (seen[other]) continue;
            seen[other] = 1;
            parent_cell[other] = c;
            parent_node[other] = node;
            stack.push_back(other);
        }
    }
    std::vector<std::size_t> cells;
    for (std::size_t node = to_node; node != from_node; node = parent_node[node])
        cells.push_back(parent_cell[node]);
    std::reverse(cells.begin(), cells.end());
    return cells;
}

} // namespace

HomogeneousSolution solve_lp(const Table& phi, const Margins& m) {
    m.require_strictly_positive("solve_lp");
    if (phi.rows() != m.p.size() || phi.cols() != m.q.size())
        throw InvalidArgument("solve_lp: surplus shape does not fit margins");
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (!std::isfinite(phi.data()[i]))
            throw InvalidArgument("solve_lp: non-finite surplus entry");

    const std::size_t tx = m.p.size(), ty = m.q.size();
    double scale = 1.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        scale = std::max(scale, std::abs(phi.data()[i]));
    const double eps = 1e-11 * scale;

    Table flow(tx, ty, 0.0);
    Basis basis{tx, ty, std::vector<char>(tx * ty, 0),
                std::vector<std::vector<std::size_t>>(tx + ty)};
    northwest_corner(m, flow, basis);

    std::vector<double> u, v;
    HomogeneousSolution sol;
    const long pivot_cap = 200000;
    while (true) {
        compute_duals(phi, basis, u, v);

        // entering cell: lowest flat index with positive reduced cost
        std::size_t enter = SIZE_MAX;
        for (std::size_t c = 0; c < tx * ty; ++c) {
            if (basis.basic[c]) continue;
            const std::size_t i = c / ty, j = c % ty;
            if (phi(i, j) - u[i] - v[j] > eps) {
                enter = c;
                break;
            }
        }
        if (enter == SIZE_MAX) break;
        if (++sol.pivots > pivot_cap)
            throw ConvergenceError("solve_lp: pivot cap exceeded");

        // cycle: entering cell plus tree path from its column back to its row
        const std::vector<std::size_t> path =
            tree_path(basis, basis.col_node(enter), basis.row_node(enter));

        // orientation alternates along the path; cells leaving a column node
        // toward a row node are "minus" cells, starting with the first
        std::vector<std::size_t> minus, plus;
        std::size_t node = basis.col_node(enter);
        for (const std::size_t c : path) {
            const bool at_col = node >= tx;
            (at_col ? minus : plus).push_back(c);
            node = (node == basis.row_node(c)) ? basis.col_node(c)
                                               : basis.row_node(c);
        }

        double theta = std::numeric_limits<double>::infinity();
        for (const std::size_t c : minus) theta = std::min(theta, flow.data()[c]);
        std::size_t leave = SIZE_MAX;
        for (const std::size_t c : minus)
            if (flow.data()[c] <= theta && c < leave) leave = c;

        flow.data()[enter] += theta;
        for (const std::size_t c : plus) flow.data()[c] += theta;
        for (const std::size_t c : minus) flow.data()[c] -= theta;
        flow.data()[leave] = 0.0;
        basis.remove(leave);
        basis.add(enter);
    }

    // optimal: assemble outputs, duals normalized to E_p[u0] = 0
    const double shift = kernels::active().dot(u.data(), m.p.data(), tx);
    for (double& x : u) x -= shift;
    for (double& x : v) x += shift;

    sol.pi0.pi = flow;
    sol.u0 = std::move(u);
    sol.v0 = std::move(v);
    sol.w0 = kernels::active().dot(flow.data(), phi.data(), phi.size());
    for (std::size_t c = 0; c < tx * ty && sol.is_unique_hint; ++c) {
        if (basis.basic[c]) continue;
        const std::size_t i = c / ty, j = c % ty;
        if (std::abs(phi(i, j) - sol.u0[i] - sol.v0[j]) <= 1e-9 * scale)
            sol.is_unique_hint = false;
    }
    return sol;
}

std::vector<AnnealRow> anneal_check(const Table& phi, const Margins& m,
                                    const std::vector<double>& sigma_grid,
                                    double tol, long max_iter) {
    if (sigma_grid.empty()) throw InvalidArgument("anneal_check: empty sigma grid");
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        if (!(sigma_grid[k] > 0.0))
            throw InvalidArgument("anneal_check: sigma grid must be positive");
        if (k > 0 && sigma_grid[k] >= sigma_grid[k - 1])
            throw InvalidArgument("anneal_check: sigma grid must be decreasing");
    }
    const HomogeneousSolution lp = solve_lp(phi, m);

    std::vector<AnnealRow> rows;
    rows.reserve(sigma_grid.size());
    IpfpOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    for (const double sigma : sigma_grid) {
        const EntropicSolution sol = solve_ipfp(phi, m, sigma, opts);
        if (!sol.converged)
            throw ConvergenceError("anneal_check: IPFP did not converge at sigma " +
                                   std::to_string(sigma));
        rows.push_back({sigma, sol.objective, lp.w0 - sol.objective});
        opts.start = std::make_pair(sol.u, sol.v); // warm start, c folded out
    }
    return rows;
}

} // namespace tumatch
