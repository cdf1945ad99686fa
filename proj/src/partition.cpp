#include "qcloud/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "qcloud/error.hpp"

namespace qcloud {

namespace {

// Working graph for the multilevel scheme: vertices carry weights
// (number of original vertices merged into them).
struct WGraph {
    std::vector<int> vw;                                  // vertex weights
    std::vector<std::vector<std::pair<int, int>>> adj;    // (neighbor, edge weight)

    int n() const { return static_cast<int>(vw.size()); }
    int total_weight() const { return std::accumulate(vw.begin(), vw.end(), 0); }
};

struct Level {
    WGraph graph;
    std::vector<int> coarse_of;  // fine vertex -> coarse vertex (next level)
};

// Heavy-edge matching: visit vertices in id order, match each unmatched
// vertex with its heaviest unmatched neighbor (ties: lowest id).
std::vector<int> heavy_edge_matching(const WGraph& g, int max_vertex_weight) {
    std::vector<int> match(static_cast<size_t>(g.n()), -1);
    for (int v = 0; v < g.n(); ++v) {
        if (match[static_cast<size_t>(v)] != -1) continue;
        int best = -1;
        int best_w = -1;
        for (auto [u, w] : g.adj[static_cast<size_t>(v)]) {
            if (match[static_cast<size_t>(u)] != -1) continue;
            if (g.vw[static_cast<size_t>(v)] + g.vw[static_cast<size_t>(u)] > max_vertex_weight)
                continue;
            if (w > best_w || (w == best_w && u < best)) {
                best = u;
                best_w = w;
            }
        }
        if (best >= 0) {
            match[static_cast<size_t>(v)] = best;
            match[static_cast<size_t>(best)] = v;
        } else {
            match[static_cast<size_t>(v)] = v;
        }
    }
    return match;
}

WGraph contract(const WGraph& g, const std::vector<int>& match, std::vector<int>& coarse_of) {
    coarse_of.assign(static_cast<size_t>(g.n()), -1);
    int cn = 0;
    for (int v = 0; v < g.n(); ++v) {
        if (coarse_of[static_cast<size_t>(v)] != -1) continue;
        int m = match[static_cast<size_t>(v)];
        coarse_of[static_cast<size_t>(v)] = cn;
        if (m != v) coarse_of[static_cast<size_t>(m)] = cn;
        ++cn;
    }
    WGraph cg;
    cg.vw.assign(static_cast<size_t>(cn), 0);
    cg.adj.assign(static_cast<size_t>(cn), {});
    for (int v = 0; v < g.n(); ++v)
        cg.vw[static_cast<size_t>(coarse_of[static_cast<size_t>(v)])] +=
            g.vw[static_cast<size_t>(v)];
    // accumulate edges via a scratch map per coarse vertex
    std::vector<int> acc(static_cast<size_t>(cn), 0);
    std::vector<int> touched;
    for (int cv = 0; cv < cn; ++cv) touched.reserve(8);
    std::vector<std::vector<int>> members(static_cast<size_t>(cn));
    for (int v = 0; v < g.n(); ++v)
        members[static_cast<size_t>(coarse_of[static_cast<size_t>(v)])].push_back(v);
    for (int cv = 0; cv < cn; ++cv) {
        touched.clear();
        for (int v : members[static_cast<size_t>(cv)]) {
            for (auto [u, w] : g.adj[static_cast<size_t>(v)]) {
                int cu = coarse_of[static_cast<size_t>(u)];
                if (cu == cv) continue;
                if (acc[static_cast<size_t>(cu)] == 0) touched.push_back(cu);
                acc[static_cast<size_t>(cu)] += w;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int cu : touched) {
            cg.adj[static_cast<size_t>(cv)].emplace_back(cu, acc[static_cast<size_t>(cu)]);
            acc[static_cast<size_t>(cu)] = 0;
        }
    }
    return cg;
}

long long side_cut(const WGraph& g, const std::vector<int>& side) {
    long long cut = 0;
    for (int v = 0; v < g.n(); ++v)
        for (auto [u, w] : g.adj[static_cast<size_t>(v)])
            if (u > v && side[static_cast<size_t>(u)] != side[static_cast<size_t>(v)])
                cut += w;
    return cut;
}

// One FM pass: tentative best-gain moves with balance constraints, then roll
// back to the best prefix. Returns true when the cut strictly improved.
bool fm_pass(const WGraph& g, std::vector<int>& side, int cap_left, int cap_right,
             int min_left, int min_right) {
    int n = g.n();
    std::vector<long long> gain(static_cast<size_t>(n), 0);
    std::vector<bool> locked(static_cast<size_t>(n), false);
    long long w_side[2] = {0, 0};
    for (int v = 0; v < n; ++v) w_side[side[static_cast<size_t>(v)]] += g.vw[static_cast<size_t>(v)];

    auto recompute_gain = [&](int v) {
        long long ext = 0, internal = 0;
        for (auto [u, w] : g.adj[static_cast<size_t>(v)]) {
            if (side[static_cast<size_t>(u)] == side[static_cast<size_t>(v)])
                internal += w;
            else
                ext += w;
        }
        gain[static_cast<size_t>(v)] = ext - internal;
    };
    for (int v = 0; v < n; ++v) recompute_gain(v);

    std::vector<int> moved;
    long long cum = 0;
    long long best_cum = 0;
    int best_prefix = 0;
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (locked[static_cast<size_t>(v)]) continue;
            int from = side[static_cast<size_t>(v)];
            int to = 1 - from;
            long long w_to = w_side[to] + g.vw[static_cast<size_t>(v)];
            long long w_from = w_side[from] - g.vw[static_cast<size_t>(v)];
            if ((to == 0 && w_to > cap_left) || (to == 1 && w_to > cap_right)) continue;
            if ((from == 0 && w_from < min_left) || (from == 1 && w_from < min_right)) continue;
            if (pick < 0 || gain[static_cast<size_t>(v)] > gain[static_cast<size_t>(pick)] ||
                (gain[static_cast<size_t>(v)] == gain[static_cast<size_t>(pick)] && v < pick))
                pick = v;
        }
        if (pick < 0) break;
        int from = side[static_cast<size_t>(pick)];
        w_side[from] -= g.vw[static_cast<size_t>(pick)];
        w_side[1 - from] += g.vw[static_cast<size_t>(pick)];
        side[static_cast<size_t>(pick)] = 1 - from;
        locked[static_cast<size_t>(pick)] = true;
        cum += gain[static_cast<size_t>(pick)];
        moved.push_back(pick);
        for (auto [u, w] : g.adj[static_cast<size_t>(pick)])
            if (!locked[static_cast<size_t>(u)]) recompute_gain(u);
        if (cum > best_cum) {
            best_cum = cum;
            best_prefix = static_cast<int>(moved.size());
        }
    }
    // undo moves past the best prefix
    for (int i = static_cast<int>(moved.size()) - 1; i >= best_prefix; --i)
        side[static_cast<size_t>(moved[static_cast<size_t>(i)])] =
            1 - side[static_cast<size_t>(moved[static_cast<size_t>(i)])];
    return best_cum > 0;
}

void refine(const WGraph& g, std::vector<int>& side, int cap_left, int cap_right,
            int min_left, int min_right) {
    for (int pass = 0; pass < 16; ++pass)
        if (!fm_pass(g, side, cap_left, cap_right, min_left, min_right)) break;
}

// Greedy region growing from `start`: pull the unassigned vertex with the
// largest connectivity to the region until the left side reaches its target.
std::vector<int> grow_from(const WGraph& g, int start, int target_left, int cap_left) {
    int n = g.n();
    std::vector<int> side(static_cast<size_t>(n), 1);
    std::vector<long long> conn(static_cast<size_t>(n), 0);
    int left_w = 0;
    int cur = start;
    while (cur >= 0) {
        if (left_w + g.vw[static_cast<size_t>(cur)] > cap_left) break;
        side[static_cast<size_t>(cur)] = 0;
        left_w += g.vw[static_cast<size_t>(cur)];
        if (left_w >= target_left) break;
        for (auto [u, w] : g.adj[static_cast<size_t>(cur)])
            if (side[static_cast<size_t>(u)] == 1) conn[static_cast<size_t>(u)] += w;
        cur = -1;
        long long best_conn = -1;
        for (int v = 0; v < n; ++v) {
            if (side[static_cast<size_t>(v)] == 0) continue;
            if (left_w + g.vw[static_cast<size_t>(v)] > cap_left) continue;
            if (conn[static_cast<size_t>(v)] > best_conn ||
                (conn[static_cast<size_t>(v)] == best_conn && (cur < 0 || v < cur))) {
                best_conn = conn[static_cast<size_t>(v)];
                cur = v;
            }
        }
    }
    return side;
}

// Bisection of g into sides with weight caps. Multilevel when large.
std::vector<int> bisect(const WGraph& g, int cap_left, int cap_right, int min_left,
                        int min_right, int target_left, std::mt19937_64& rng) {
    int n = g.n();
    if (n <= 1) return std::vector<int>(static_cast<size_t>(n), 0);

    constexpr int kCoarsenThreshold = 24;
    if (n > kCoarsenThreshold) {
        int max_vw = std::max(1, g.total_weight() / kCoarsenThreshold * 2);
        std::vector<int> coarse_of;
        auto match = heavy_edge_matching(g, max_vw);
        WGraph cg = contract(g, match, coarse_of);
        if (cg.n() < n) {
            std::vector<int> cside =
                bisect(cg, cap_left, cap_right, min_left, min_right, target_left, rng);
            std::vector<int> side(static_cast<size_t>(n));
            for (int v = 0; v < n; ++v)
                side[static_cast<size_t>(v)] =
                    cside[static_cast<size_t>(coarse_of[static_cast<size_t>(v)])];
            refine(g, side, cap_left, cap_right, min_left, min_right);
            return side;
        }
        // no contraction possible; fall through to flat bisection
    }

    // flat bisection: try every vertex as a growth seed on small graphs,
    // a deterministic sample on larger ones
    std::vector<int> seeds;
    if (n <= 32) {
        seeds.resize(static_cast<size_t>(n));
        std::iota(seeds.begin(), seeds.end(), 0);
    } else {
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int i = 0; i < 8; ++i) seeds.push_back(pick(rng));
        seeds.push_back(0);
        std::sort(seeds.begin(), seeds.end());
        seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    }

    std::vector<int> best;
    long long best_cut = std::numeric_limits<long long>::max();
    for (int s : seeds) {
        auto side = grow_from(g, s, target_left, cap_left);
        // feasibility: both sides within their bounds
        long long right_w = 0, left_w = 0;
        for (int v = 0; v < n; ++v)
            if (side[static_cast<size_t>(v)] == 1)
                right_w += g.vw[static_cast<size_t>(v)];
            else
                left_w += g.vw[static_cast<size_t>(v)];
        if (right_w > cap_right || right_w < min_right || left_w < min_left) continue;
        refine(g, side, cap_left, cap_right, min_left, min_right);
        long long cut = side_cut(g, side);
        if (cut < best_cut) {
            best_cut = cut;
            best = side;
        }
    }
    if (best.empty())
        fail(ErrorCode::InfeasibleBalance, "no feasible bisection under balance caps");
    return best;
}

// Recursive bisection: distributes k parts over the two sides.
void partition_rec(const WGraph& g, const std::vector<int>& vertex_ids, int k, int part_cap,
                   int first_part, std::vector<int>& assignment, std::mt19937_64& rng) {
    if (k == 1) {
        for (int v : vertex_ids) assignment[static_cast<size_t>(v)] = first_part;
        return;
    }
    int k_left = (k + 1) / 2;
    int k_right = k - k_left;
    int total = g.total_weight();
    int cap_left = k_left * part_cap;
    int cap_right = k_right * part_cap;
    if (cap_left + cap_right < total)
        fail(ErrorCode::InfeasibleBalance, "balance caps cannot hold all vertices");
    // every part must stay non-empty, so each side needs at least one vertex
    // weight per part assigned to it
    int min_left = std::max(k_left, total - cap_right);
    int min_right = std::max(k_right, total - cap_left);
    int target_left = std::clamp((total * k_left + k / 2) / k, min_left, cap_left);

    std::vector<int> side =
        bisect(g, cap_left, cap_right, min_left, min_right, target_left, rng);

    // split into two subgraphs
    for (int s = 0; s <= 1; ++s) {
        std::vector<int> local(static_cast<size_t>(g.n()), -1);
        std::vector<int> ids;
        for (int v = 0; v < g.n(); ++v)
            if (side[static_cast<size_t>(v)] == s) {
                local[static_cast<size_t>(v)] = static_cast<int>(ids.size());
                ids.push_back(v);
            }
        WGraph sub;
        sub.vw.resize(ids.size());
        sub.adj.resize(ids.size());
        for (size_t i = 0; i < ids.size(); ++i) {
            int v = ids[i];
            sub.vw[i] = g.vw[static_cast<size_t>(v)];
            for (auto [u, w] : g.adj[static_cast<size_t>(v)])
                if (side[static_cast<size_t>(u)] == s)
                    sub.adj[i].emplace_back(local[static_cast<size_t>(u)], w);
        }
        std::vector<int> sub_ids(ids.size());
        for (size_t i = 0; i < ids.size(); ++i)
            sub_ids[i] = vertex_ids[static_cast<size_t>(ids[i])];
        partition_rec(sub, sub_ids, s == 0 ? k_left : k_right, part_cap,
                      s == 0 ? first_part : first_part + k_left, assignment, rng);
    }
}

}  // namespace

long long cut_weight_of(const InteractionGraph& g, const std::vector<int>& assignment) {
    long long cut = 0;
    for (const auto& [e, w] : g.weights)
        if (assignment[static_cast<size_t>(e.first)] != assignment[static_cast<size_t>(e.second)])
            cut += w;
    return cut;
}

PartitionResult graph_partition(const InteractionGraph& g, int k, double alpha,
                                std::uint64_t seed) {
    if (k < 1) fail(ErrorCode::BadParams, "k must be >= 1");
    if (alpha < 0.0) fail(ErrorCode::BadParams, "imbalance factor must be >= 0");
    if (k > g.n) fail(ErrorCode::InfeasibleBalance, "more parts than vertices");

    PartitionResult r;
    r.k = k;
    r.imbalance = alpha;
    r.assignment.assign(static_cast<size_t>(g.n), 0);

    int part_cap = static_cast<int>(std::ceil((1.0 + alpha) * g.n / k));
    if (part_cap < 1 || static_cast<long long>(part_cap) * k < g.n)
        fail(ErrorCode::InfeasibleBalance, "part capacity too small for vertex count");

    if (k > 1) {
        WGraph wg;
        wg.vw.assign(static_cast<size_t>(g.n), 1);
        wg.adj.resize(static_cast<size_t>(g.n));
        for (const auto& [e, w] : g.weights) {
            wg.adj[static_cast<size_t>(e.first)].emplace_back(e.second, w);
            wg.adj[static_cast<size_t>(e.second)].emplace_back(e.first, w);
        }
        std::vector<int> ids(static_cast<size_t>(g.n));
        std::iota(ids.begin(), ids.end(), 0);
        std::mt19937_64 rng(seed);
        partition_rec(wg, ids, k, part_cap, 0, r.assignment, rng);
    }

    r.part_sizes.assign(static_cast<size_t>(k), 0);
    for (int p : r.assignment) ++r.part_sizes[static_cast<size_t>(p)];
    r.cut_weight = cut_weight_of(g, r.assignment);
    if (!verify_partition(g, r))
        fail(ErrorCode::InvariantViolation, "partitioner produced an invalid result");
    return r;
}

bool verify_partition(const InteractionGraph& g, const PartitionResult& r) {
    if (static_cast<int>(r.assignment.size()) != g.n) return false;
    if (r.k < 1) return false;
    std::vector<int> sizes(static_cast<size_t>(r.k), 0);
    for (int p : r.assignment) {
        if (p < 0 || p >= r.k) return false;
        ++sizes[static_cast<size_t>(p)];
    }
    int cap = static_cast<int>(std::ceil((1.0 + r.imbalance) * g.n / r.k));
    for (int s : sizes)
        if (s > cap) return false;
    if (sizes != r.part_sizes) return false;
    return cut_weight_of(g, r.assignment) == r.cut_weight;
}

}  // namespace qcloud
