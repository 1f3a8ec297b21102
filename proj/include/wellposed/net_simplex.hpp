#pragma once

// Network simplex for the dense transportation problem
//
//   min  sum_{ij} c(i,j) x_ij
//   s.t. sum_j x_ij = a_i,  sum_i x_ij = b_j,  x >= 0,
//
// specialized to the complete bipartite case. Costs are produced by a
// callback and never materialized (a 4096x4096 instance has 16.7M arcs);
// flow lives only on spanning-tree arcs, stored on the child node.
// Pivoting uses block pricing with Cunningham's strongly feasible
// tie-breaking, the classic safeguard against degenerate cycling.
//
// A bipartite simplification exploited throughout: every arc points from
// the supply side to the demand side, so the orientation of a tree arc
// relative to its child node is just "which side is the child on".

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "wellposed/errors.hpp"

namespace wellposed::detail {

struct PlanEntry {
    int i, j;
    double mass;
};

template <class CostFn>
class TransportSimplex {
public:
    TransportSimplex(const std::vector<double>& supply,
                     const std::vector<double>& demand,
                     CostFn cost)
        : n_(static_cast<int>(supply.size())),
          m_(static_cast<int>(demand.size())),
          cost_(cost),
          root_(n_ + m_) {
        if (n_ == 0 || m_ == 0) throw Infeasible("transport: empty marginal");
        double sa = 0.0, sb = 0.0;
        for (double a : supply) sa += a;
        for (double b : demand) sb += b;
        if (std::abs(sa - sb) > 1e-9 * std::max(sa, sb))
            throw Infeasible("transport: supply and demand masses differ");
        a_ = supply;
        b_ = demand;
        b_.back() += sa - sb; // exact float balance
        mass_scale_ = sa;
        init();
    }

    double solve(std::vector<PlanEntry>* plan_out = nullptr) {
        // rows of the cost matrix are scanned cyclically in blocks; a
        // min-only first pass over each row keeps the scan vectorizable
        const int rows_per_block = std::clamp(524288 / std::max(m_, 1), 1, n_);
        const double eps = 1e-11 * (1.0 + max_cost_);
        int next_row = 0;

        while (true) {
            int in_i = -1, in_j = -1;
            double best = -eps;
            int scanned = 0;
            while (scanned < n_) {
                int stop = std::min(next_row + rows_per_block, n_);
                for (int i = next_row; i < stop; ++i) {
                    const double* crow = cost_row(i);
                    const double* pid = pi_.data() + n_;
                    double lo = 1e300;
                    for (int j = 0; j < m_; ++j)
                        lo = std::min(lo, crow[j] - pid[j]);
                    if (lo + pi_[i] < best) {
                        for (int j = 0; j < m_; ++j) {
                            double red = crow[j] - pid[j] + pi_[i];
                            if (red < best) {
                                best = red;
                                in_i = i;
                                in_j = j;
                            }
                        }
                    }
                }
                scanned += stop - next_row;
                next_row = stop == n_ ? 0 : stop;
                if (in_i >= 0) break;
            }
            if (in_i < 0) break; // full sweep found nothing: optimal
            pivot(in_i, n_ + in_j, best);
        }

        // artificial arcs must be drained at optimality of a balanced problem
        for (int u = 0; u < n_ + m_; ++u)
            if (parent_[u] == root_ && flow_[u] > 1e-7 * (1.0 + mass_scale_))
                throw Infeasible("transport: residual flow on artificial arc");

        double total = 0.0;
        if (plan_out) plan_out->clear();
        for (int u = 0; u < n_ + m_; ++u) {
            if (parent_[u] == root_ || flow_[u] <= 0.0) continue;
            int s = u < n_ ? u : parent_[u];
            int t = u < n_ ? parent_[u] : u;
            total += cost_(s, t - n_) * flow_[u];
            if (plan_out) plan_out->push_back({s, t - n_, flow_[u]});
        }
        return total;
    }

private:
    bool child_arc_up(int u) const { return u < n_; } // arc points child -> parent

    const double* cost_row(int i) const { return cmat_.data() + static_cast<std::size_t>(i) * m_; }
    double arc_cost(int i, int j) const { return cmat_[static_cast<std::size_t>(i) * m_ + j]; }

    void init() {
        const int N = n_ + m_ + 1;
        parent_.assign(N, -1);
        flow_.assign(N, 0.0);
        pi_.assign(N, 0.0);
        succ_num_.assign(N, 1);
        first_child_.assign(N, -1);
        next_sib_.assign(N, -1);
        prev_sib_.assign(N, -1);

        cmat_.resize(static_cast<std::size_t>(n_) * m_);
        max_cost_ = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < m_; ++j) {
                double c = cost_(i, j);
                cmat_[static_cast<std::size_t>(i) * m_ + j] = c;
                max_cost_ = std::max(max_cost_, c);
            }
        const double art = (max_cost_ + 1.0) * (n_ + m_ + 1);

        succ_num_[root_] = N;
        for (int u = 0; u < n_ + m_; ++u) {
            parent_[u] = root_;
            attach_child(root_, u);
            flow_[u] = u < n_ ? a_[u] : b_[u - n_];
            pi_[u] = u < n_ ? -art : art;
        }
        pi_[root_] = 0.0;
    }

    void attach_child(int p, int c) {
        prev_sib_[c] = -1;
        next_sib_[c] = first_child_[p];
        if (first_child_[p] >= 0) prev_sib_[first_child_[p]] = c;
        first_child_[p] = c;
    }

    void detach_child(int p, int c) {
        if (prev_sib_[c] >= 0) next_sib_[prev_sib_[c]] = next_sib_[c];
        else first_child_[p] = next_sib_[c];
        if (next_sib_[c] >= 0) prev_sib_[next_sib_[c]] = prev_sib_[c];
        prev_sib_[c] = next_sib_[c] = -1;
    }

    // entering arc runs src -> dst; reduced is its (negative) reduced cost
    void pivot(int src, int dst, double reduced) {
        int u = src, v = dst;
        while (u != v) {
            if (succ_num_[u] < succ_num_[v]) u = parent_[u];
            else v = parent_[v];
        }
        const int join = u;

        // leaving arc: smallest residual along the cycle; ties resolved
        // Cunningham-style (strict on the src side, non-strict on the dst
        // side) to keep the tree strongly feasible
        double delta = 1e300;
        int u_out = -1, out_side = 0;
        for (int w = src; w != join; w = parent_[w])
            if (child_arc_up(w) && flow_[w] < delta) {
                delta = flow_[w];
                u_out = w;
                out_side = 1;
            }
        for (int w = dst; w != join; w = parent_[w])
            if (!child_arc_up(w) && flow_[w] <= delta) {
                delta = flow_[w];
                u_out = w;
                out_side = 2;
            }
        if (u_out < 0) throw NumericalFailure("transport: no blocking arc on pivot cycle");

        if (delta > 0.0) {
            for (int w = src; w != join; w = parent_[w])
                flow_[w] += child_arc_up(w) ? -delta : delta;
            for (int w = dst; w != join; w = parent_[w])
                flow_[w] += child_arc_up(w) ? delta : -delta;
        }

        // the side of the cycle holding u_out is re-rooted at u_in and
        // re-attached below v_in through the entering arc
        const int u_in = out_side == 1 ? src : dst;
        const int v_in = out_side == 1 ? dst : src;
        const int v_out = parent_[u_out];

        path_.clear();
        for (int x = u_in;; x = parent_[x]) {
            path_.push_back(x);
            if (x == u_out) break;
        }
        detach_child(v_out, u_out);
        for (int idx = static_cast<int>(path_.size()) - 1; idx >= 1; --idx) {
            int c = path_[idx];      // becomes the child
            int p = path_[idx - 1];  // its old child, now the parent
            detach_child(c, p);
            attach_child(p, c);
            parent_[c] = p;
            flow_[c] = flow_[p]; // arc (p,c) data lived on p, the old child side
        }
        parent_[u_in] = v_in;
        attach_child(v_in, u_in);
        flow_[u_in] = delta;

        // potentials of the moved subtree shift so the entering arc prices to zero
        const double shift = u_in == src ? -reduced : reduced;
        const int moved = apply_shift_and_resize(u_in, shift);
        for (int x = v_in; x >= 0; x = parent_[x]) succ_num_[x] += moved;
        for (int x = v_out; x >= 0; x = parent_[x]) succ_num_[x] -= moved;
    }

    int apply_shift_and_resize(int node, double shift) {
        dfs_.clear();
        order_.clear();
        dfs_.push_back(node);
        while (!dfs_.empty()) {
            int x = dfs_.back();
            dfs_.pop_back();
            pi_[x] += shift;
            order_.push_back(x);
            for (int c = first_child_[x]; c >= 0; c = next_sib_[c]) dfs_.push_back(c);
        }
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            int s = 1;
            for (int c = first_child_[*it]; c >= 0; c = next_sib_[c]) s += succ_num_[c];
            succ_num_[*it] = s;
        }
        return static_cast<int>(order_.size());
    }

    int n_, m_;
    CostFn cost_;
    int root_;
    std::vector<double> a_, b_;
    double max_cost_ = 0.0, mass_scale_ = 0.0;

    std::vector<int> parent_, succ_num_;
    std::vector<int> first_child_, next_sib_, prev_sib_;
    std::vector<double> flow_, pi_;
    std::vector<int> path_, dfs_, order_;
};

/// Type-erased front end; see TransportSimplex.
double solve_transport(const std::vector<double>& supply,
                       const std::vector<double>& demand,
                       const std::function<double(int, int)>& cost,
                       std::vector<PlanEntry>* plan = nullptr);

} // namespace wellposed::detail
