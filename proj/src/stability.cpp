#include "brickplan/stability.hpp"

#include <numeric>

namespace brickplan {

std::string to_string(StabilityViolation v) {
    switch (v) {
        case StabilityViolation::FloatingPart: return "floating part";
        case StabilityViolation::DisconnectedComponent: return "disconnected component";
    }
    return "?";
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n + 1) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
};

} // namespace

FeasibilityReport prefix_feasible(const AssemblyModel& model, const ContactGraph& contacts,
                                  const std::vector<int>& order) {
    const int n = model.part_count();
    {
        std::vector<char> seen(n + 1, 0);
        if ((int)order.size() != n) throw std::invalid_argument("order must cover every part");
        for (int p : order) {
            if (p < 1 || p > n || seen[p]) throw std::invalid_argument("order is not a permutation");
            seen[p] = 1;
        }
    }

    const int ground = model.ground_y();
    UnionFind uf(n);
    std::vector<char> placed(n + 1, 0);
    std::vector<char> root_grounded(n + 1, 0);
    int components = 0, ungrounded = 0;

    for (int k = 1; k <= n; ++k) {
        int p = order[k - 1];
        placed[p] = 1;
        root_grounded[p] = model.part(p).world_box().lo.y == ground;
        ++components;
        if (!root_grounded[p]) ++ungrounded;
        for (int q : contacts.neighbors(p)) {
            if (!placed[q]) continue;
            int a = uf.find(p), b = uf.find(q);
            if (a == b) continue;
            bool g = root_grounded[a] || root_grounded[b];
            ungrounded -= !root_grounded[a];
            ungrounded -= !root_grounded[b];
            uf.parent[a] = b;
            root_grounded[b] = g;
            if (!g) ++ungrounded;
            --components;
        }
        if (ungrounded > 0)
            return {false, FeasibilityIssue{k, StabilityViolation::FloatingPart}};
        if (components > 1)
            return {false, FeasibilityIssue{k, StabilityViolation::DisconnectedComponent}};
    }
    return {true, std::nullopt};
}

} // namespace brickplan
