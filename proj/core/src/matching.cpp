#include "gkp/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gkp {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

}  // namespace

// Internally the solver MAXIMIZES total weight over w' = C - w_scaled with
// C > max w_scaled, so every edge has positive internal weight; on a complete
// even graph the maximum-weight matching is then necessarily perfect, and
// maximizing sum(C - w) is the same as minimizing sum(w).

void MinWeightMatcher::ensure_capacity(int n) {
    const int m = 2 * n + 1;
    if (static_cast<int>(g_.size()) >= m) return;
    g_.assign(m, std::vector<Edge>(m));
    lab_.assign(m, 0);
    match_.assign(m, 0);
    slack_.assign(m, 0);
    top_.assign(m, 0);
    parent_.assign(m, 0);
    side_.assign(m, -1);
    vis_.assign(m, 0);
    flower_.assign(m, {});
    flower_from_.assign(m, std::vector<int>(n + 1, 0));
}

std::int64_t MinWeightMatcher::edge_delta(const Edge& e) const noexcept {
    return lab_[e.u] + lab_[e.v] - 2 * e.w;
}

void MinWeightMatcher::update_slack(int u, int x) noexcept {
    if (slack_[x] == 0 || edge_delta(g_[u][x]) < edge_delta(g_[slack_[x]][x])) slack_[x] = u;
}

void MinWeightMatcher::set_slack(int x) noexcept {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
        if (g_[u][x].w > 0 && top_[u] != x && side_[top_[u]] == 0) update_slack(u, x);
}

void MinWeightMatcher::push_queue(int x) {
    if (x <= n_) {
        queue_.push_back(x);
    } else {
        for (int y : flower_[x]) push_queue(y);
    }
}

void MinWeightMatcher::set_top(int x, int b) {
    top_[x] = b;
    if (x > n_)
        for (int y : flower_[x]) set_top(y, b);
}

// Position of member xr inside blossom b's cycle, reorienting so the
// position is even (the base stays at index 0).
int MinWeightMatcher::blossom_position(int b, int xr) {
    auto& cyc = flower_[b];
    int pr = static_cast<int>(std::find(cyc.begin(), cyc.end(), xr) - cyc.begin());
    if (pr % 2 == 1) {
        std::reverse(cyc.begin() + 1, cyc.end());
        return static_cast<int>(cyc.size()) - pr;
    }
    return pr;
}

void MinWeightMatcher::set_match(int u, int v) {
    match_[u] = g_[u][v].v;
    if (u <= n_) return;
    const Edge e = g_[u][v];
    const int xr = flower_from_[u][e.u];
    const int pr = blossom_position(u, xr);
    auto& cyc = flower_[u];
    for (int i = 0; i < pr; ++i) set_match(cyc[i], cyc[i ^ 1]);
    set_match(xr, v);
    std::rotate(cyc.begin(), cyc.begin() + pr, cyc.end());
}

void MinWeightMatcher::augment(int u, int v) {
    for (;;) {
        const int xnv = top_[match_[u]];
        set_match(u, v);
        if (xnv == 0) return;
        set_match(xnv, top_[parent_[xnv]]);
        u = top_[parent_[xnv]];
        v = xnv;
    }
}

int MinWeightMatcher::find_lca(int u, int v) {
    for (++lca_stamp_; u != 0 || v != 0; std::swap(u, v)) {
        if (u == 0) continue;
        if (vis_[u] == lca_stamp_) return u;
        vis_[u] = lca_stamp_;
        u = top_[match_[u]];
        if (u != 0) u = top_[parent_[u]];
    }
    return 0;
}

void MinWeightMatcher::add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && top_[b] != 0) ++b;
    if (b > n_x_) ++n_x_;

    lab_[b] = 0;
    side_[b] = 0;
    match_[b] = match_[lca];
    auto& cyc = flower_[b];
    cyc.clear();
    cyc.push_back(lca);
    for (int x = u, y; x != lca; x = top_[parent_[y]]) {
        cyc.push_back(x);
        cyc.push_back(y = top_[match_[x]]);
        push_queue(y);
    }
    std::reverse(cyc.begin() + 1, cyc.end());
    for (int x = v, y; x != lca; x = top_[parent_[y]]) {
        cyc.push_back(x);
        cyc.push_back(y = top_[match_[x]]);
        push_queue(y);
    }

    set_top(b, b);
    for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
    for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
    for (int xs : cyc) {
        for (int x = 1; x <= n_x_; ++x)
            if (g_[b][x].w == 0 || edge_delta(g_[xs][x]) < edge_delta(g_[b][x])) {
                g_[b][x] = g_[xs][x];
                g_[x][b] = g_[x][xs];
            }
        for (int x = 1; x <= n_; ++x)
            if (flower_from_[xs][x] != 0) flower_from_[b][x] = xs;
    }
    set_slack(b);
}

void MinWeightMatcher::expand_blossom(int b) {
    for (int y : flower_[b]) set_top(y, y);
    const int xr = flower_from_[b][g_[b][parent_[b]].u];
    const int pr = blossom_position(b, xr);
    auto& cyc = flower_[b];
    for (int i = 0; i < pr; i += 2) {
        const int xs = cyc[i];
        const int xns = cyc[i + 1];
        parent_[xs] = g_[xns][xs].u;
        side_[xs] = 1;
        side_[xns] = 0;
        slack_[xs] = 0;
        set_slack(xns);
        push_queue(xns);
    }
    side_[xr] = 1;
    parent_[xr] = parent_[b];
    for (int i = pr + 1; i < static_cast<int>(cyc.size()); ++i) {
        side_[cyc[i]] = -1;
        set_slack(cyc[i]);
    }
    top_[b] = 0;
}

bool MinWeightMatcher::on_found_edge(const Edge& e) {
    const int u = top_[e.u];
    const int v = top_[e.v];
    if (side_[v] == -1) {
        parent_[v] = e.u;
        side_[v] = 1;
        const int nu = top_[match_[v]];
        slack_[v] = slack_[nu] = 0;
        side_[nu] = 0;
        push_queue(nu);
    } else if (side_[v] == 0) {
        const int lca = find_lca(u, v);
        if (lca == 0) {
            augment(u, v);
            augment(v, u);
            return true;
        }
        add_blossom(u, lca, v);
    }
    return false;
}

// One phase of the primal-dual search: grows alternating trees from every
// exposed node, adjusting duals until an augmenting path is found (true) or
// no heavier matching exists (false).
bool MinWeightMatcher::grow_phase() {
    std::fill(side_.begin(), side_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
    queue_.clear();
    queue_head_ = 0;
    for (int x = 1; x <= n_x_; ++x)
        if (top_[x] == x && match_[x] == 0) {
            parent_[x] = 0;
            side_[x] = 0;
            push_queue(x);
        }
    if (queue_.empty()) return false;

    long dual_rounds = 0;
    const long dual_round_cap = 100L * n_ + 1000;
    for (;;) {
        while (queue_head_ < queue_.size()) {
            const int u = queue_[queue_head_++];
            if (side_[top_[u]] == 1) continue;
            for (int v = 1; v <= n_; ++v)
                if (g_[u][v].w > 0 && top_[u] != top_[v]) {
                    if (edge_delta(g_[u][v]) == 0) {
                        if (on_found_edge(g_[u][v])) return true;
                    } else {
                        update_slack(u, top_[v]);
                    }
                }
        }

        std::int64_t d = kInf;
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (top_[b] == b && side_[b] == 1) d = std::min(d, lab_[b] / 2);
        for (int x = 1; x <= n_x_; ++x)
            if (top_[x] == x && slack_[x] != 0) {
                if (side_[x] == -1)
                    d = std::min(d, edge_delta(g_[slack_[x]][x]));
                else if (side_[x] == 0)
                    d = std::min(d, edge_delta(g_[slack_[x]][x]) / 2);
            }
        for (int u = 1; u <= n_; ++u) {
            if (side_[top_[u]] == 0) {
                if (lab_[u] <= d) return false;
                lab_[u] -= d;
            } else if (side_[top_[u]] == 1) {
                lab_[u] += d;
            }
        }
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (top_[b] == b) {
                if (side_[b] == 0)
                    lab_[b] += 2 * d;
                else if (side_[b] == 1)
                    lab_[b] -= 2 * d;
            }
        if (++dual_rounds > dual_round_cap)
            throw std::logic_error("matching: dual adjustment did not converge");

        queue_.clear();
        queue_head_ = 0;
        for (int x = 1; x <= n_x_; ++x)
            if (top_[x] == x && slack_[x] != 0 && top_[slack_[x]] != x &&
                edge_delta(g_[slack_[x]][x]) == 0) {
                if (on_found_edge(g_[slack_[x]][x])) return true;
            }
        for (int b = n_ + 1; b <= n_x_; ++b)
            if (top_[b] == b && side_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
}

Matching MinWeightMatcher::solve(int n, std::span<const double> w) {
    if (n < 0 || n % 2 != 0) throw std::invalid_argument("matching: node count must be even");
    if (static_cast<std::size_t>(n) * n != w.size())
        throw std::invalid_argument("matching: weight matrix size mismatch");
    Matching result;
    result.total_weight = 0.0;
    if (n == 0) return result;

    double w_abs_max = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double wij = w[static_cast<std::size_t>(i) * n + j];
            if (!(wij >= 0.0) || !std::isfinite(wij))
                throw std::invalid_argument("matching: weights must be finite and nonnegative");
            w_abs_max = std::max(w_abs_max, wij);
        }

    ensure_capacity(n);
    n_ = n;
    n_x_ = n;
    lca_stamp_ = 0;
    std::fill(vis_.begin(), vis_.begin() + 2 * n + 1, 0);

    const double scale = static_cast<double>(std::int64_t{1} << 40) / std::max(1.0, w_abs_max);
    std::int64_t s_max = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double wij = w[static_cast<std::size_t>(i) * n + j];
            s_max = std::max(s_max, static_cast<std::int64_t>(std::llround(wij * scale)));
        }
    const std::int64_t c = s_max + 1;

    for (int u = 0; u <= 2 * n; ++u) {
        top_[u] = u;
        match_[u] = 0;
        flower_[u].clear();
    }
    std::int64_t w_internal_max = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int u = i + 1, v = j + 1;
            std::int64_t wi = 0;
            if (i != j) {
                const double wij = w[static_cast<std::size_t>(i) * n + j];
                wi = c - std::llround(wij * scale);
            }
            g_[u][v] = Edge{u, v, wi};
            flower_from_[u][v] = (u == v) ? u : 0;
            w_internal_max = std::max(w_internal_max, wi);
        }
    for (int u = 1; u <= n; ++u) lab_[u] = w_internal_max;

    int matched_pairs = 0;
    while (grow_phase()) ++matched_pairs;
    if (matched_pairs != n / 2) throw std::logic_error("matching: failed to reach a perfect matching");

    for (int u = 1; u <= n; ++u) {
        if (match_[u] > u) {
            result.pairs.emplace_back(u - 1, match_[u] - 1);
            result.total_weight +=
                w[static_cast<std::size_t>(u - 1) * n + (match_[u] - 1)];
        }
    }
    return result;
}

Matching min_weight_perfect_matching(int n, std::span<const double> w) {
    MinWeightMatcher matcher;
    return matcher.solve(n, w);
}

}  // namespace gkp
