#include "brickplan/graphs.hpp"

#include <algorithm>
#include <cmath>

namespace brickplan {

namespace {

bool faces_meet(const Aabb& below, const Aabb& above, double eps) {
    return std::abs(double(below.hi.y) - double(above.lo.y)) <= eps &&
           footprint_overlap(below, above) > 0;
}

} // namespace

ContactGraph contact_graph(const AssemblyModel& model, double eps_contact) {
    const int n = model.part_count();
    ContactGraph g;
    g.part_count = n;
    g.adj.assign(n + 1, {});
    std::vector<Aabb> boxes(n);
    for (int i = 0; i < n; ++i) boxes[i] = model.parts[i].world_box();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!faces_meet(boxes[i], boxes[j], eps_contact) &&
                !faces_meet(boxes[j], boxes[i], eps_contact))
                continue;
            g.edges.emplace_back(i + 1, j + 1);
            g.adj[i + 1].push_back(j + 1);
            g.adj[j + 1].push_back(i + 1);
        }
    return g;
}

namespace {

// Every node left with indeg > 0 after Kahn's pass has a predecessor in the
// same stuck set, so walking stuck predecessors must repeat a node. The
// repeated segment, reversed, is a cycle in edge direction.
std::vector<int> extract_cycle(int start, const std::vector<std::vector<int>>& preds,
                               const std::vector<char>& stuck) {
    std::vector<int> path{start};
    std::vector<char> seen(preds.size(), 0);
    seen[start] = 1;
    int cur = start;
    for (;;) {
        int prev = 0;
        for (int p : preds[cur])
            if (stuck[p]) {
                prev = p;
                break;
            }
        cur = prev;
        path.push_back(cur);
        if (seen[cur]) break;
        seen[cur] = 1;
    }
    auto it = std::find(path.begin(), path.end() - 1, path.back());
    std::vector<int> cycle(it, path.end());
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
}

} // namespace

PrecedenceGraph precedence_graph(const AssemblyModel& model, double eps_contact) {
    const int n = model.part_count();
    PrecedenceGraph g;
    g.part_count = n;
    g.preds.assign(n + 1, {});
    std::vector<std::vector<int>> succ(n + 1);
    std::vector<Aabb> boxes(n);
    for (int i = 0; i < n; ++i) boxes[i] = model.parts[i].world_box();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!faces_meet(boxes[i], boxes[j], eps_contact)) continue;
            g.edges.emplace_back(i + 1, j + 1);
            succ[i + 1].push_back(j + 1);
            g.preds[j + 1].push_back(i + 1);
        }

    // Kahn's algorithm just for cycle detection; the planner orders parts
    // itself and only needs the preds lists.
    std::vector<int> indeg(n + 1, 0);
    for (int v = 1; v <= n; ++v) indeg[v] = (int)g.preds[v].size();
    std::vector<int> queue;
    for (int v = 1; v <= n; ++v)
        if (indeg[v] == 0) queue.push_back(v);
    int done = 0;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        ++done;
        for (int w : succ[v])
            if (--indeg[w] == 0) queue.push_back(w);
    }
    if (done != n) {
        std::vector<char> stuck(n + 1, 0);
        int first_stuck = 0;
        for (int v = 1; v <= n; ++v)
            if (indeg[v] > 0) {
                stuck[v] = 1;
                if (!first_stuck) first_stuck = v;
            }
        auto cyc = extract_cycle(first_stuck, g.preds, stuck);
        std::string msg = "precedence cycle:";
        for (int v : cyc) msg += " " + std::to_string(v);
        throw CycleError(std::move(cyc), msg);
    }
    return g;
}

} // namespace brickplan
