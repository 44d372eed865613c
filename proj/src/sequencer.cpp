#include "brickplan/sequencer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>

#include "brickplan/errors.hpp"
#include "brickplan/stability.hpp"

namespace brickplan {

namespace {

void require_permutation(int n, const std::vector<int>& order) {
    if ((int)order.size() != n) throw std::invalid_argument("order must cover every part");
    std::vector<char> seen(n + 1, 0);
    for (int p : order) {
        if (p < 1 || p > n || seen[p]) throw std::invalid_argument("order is not a permutation");
        seen[p] = 1;
    }
}

double centroid_dist(const AssemblyModel& m, int a, int b) {
    return norm(m.part(a).centroid() - m.part(b).centroid());
}

} // namespace

double order_cost(const AssemblyModel& model, const std::vector<int>& order,
                  const SequencerConfig& cfg) {
    require_permutation(model.part_count(), order);
    double dist = 0;
    for (size_t k = 1; k < order.size(); ++k)
        dist += centroid_dist(model, order[k - 1], order[k]);
    double sym = 0;
    metrics::PartRefs prefix;
    prefix.reserve(order.size());
    for (int p : order) {
        prefix.push_back(&model.part(p));
        sym += metrics::symmetry_score(prefix, cfg.metric.tau_sym).score;
    }
    return cfg.w_local * dist + sym;
}

namespace {

struct OrderContext {
    const AssemblyModel& model;
    const PrecedenceGraph& prec;
    const ContactGraph& contacts;
    const SequencerConfig& cfg;
    std::vector<std::vector<int>> succ; // successor lists from precedence edges

    bool order_valid(const std::vector<int>& order) const {
        std::vector<int> pos(model.part_count() + 1, 0);
        for (int i = 0; i < (int)order.size(); ++i) pos[order[i]] = i + 1;
        for (auto [u, v] : prec.edges)
            if (pos[u] >= pos[v]) return false;
        return prefix_feasible(model, contacts, order).feasible;
    }
};

std::vector<int> greedy_order(const OrderContext& ctx) {
    const AssemblyModel& model = ctx.model;
    const int n = model.part_count();
    const int ground = model.ground_y();

    std::vector<char> placed(n + 1, 0), frontier(n + 1, 0);
    std::vector<int> preds_left(n + 1, 0);
    std::vector<char> grounded(n + 1, 0);
    for (int p = 1; p <= n; ++p) {
        preds_left[p] = (int)ctx.prec.preds[p].size();
        grounded[p] = model.part(p).world_box().lo.y == ground;
    }

    std::vector<int> order;
    metrics::PartRefs prefix;
    order.reserve(n);
    prefix.reserve(n);

    for (int k = 1; k <= n; ++k) {
        std::vector<int> cands;
        for (int p = 1; p <= n; ++p) {
            if (placed[p] || preds_left[p] > 0) continue;
            if (k == 1 ? !grounded[p] : !frontier[p]) continue;
            cands.push_back(p);
        }
        if (cands.empty())
            throw UnplannableError(
                k, "no part can be placed at step " + std::to_string(k) +
                       " (every remaining part is unsupported or out of reach)");

        std::vector<double> cost(cands.size());
#pragma omp parallel for schedule(dynamic)
        for (int ci = 0; ci < (int)cands.size(); ++ci) {
            metrics::PartRefs trial = prefix;
            trial.push_back(&model.part(cands[ci]));
            double c = metrics::symmetry_score(trial, ctx.cfg.metric.tau_sym).score;
            if (k > 1) c += ctx.cfg.w_local * centroid_dist(model, order.back(), cands[ci]);
            cost[ci] = c;
        }
        int best = 0;
        for (int ci = 1; ci < (int)cands.size(); ++ci) {
            if (cost[ci] < cost[best] || (cost[ci] == cost[best] && cands[ci] < cands[best]))
                best = ci;
        }
        int p = cands[best];
        placed[p] = 1;
        order.push_back(p);
        prefix.push_back(&model.part(p));
        for (int q : ctx.contacts.neighbors(p)) frontier[q] = 1;
        for (int q : ctx.succ[p]) --preds_left[q];
    }
    return order;
}

// Pairwise-swap descent. Candidates are drawn serially from the seeded RNG
// and scored in parallel; acceptance scans the batch in draw order, so the
// search path does not depend on the thread count.
void swap_descent(const OrderContext& ctx, std::vector<int>& order) {
    const AssemblyModel& model = ctx.model;
    const SequencerConfig& cfg = ctx.cfg;
    const int n = (int)order.size();
    if (n < 2 || cfg.iters <= 0) return;

    std::vector<double> sym_k(n);
    auto refresh = [&](int from, int to) { // prefix lengths [from, to], 1-based
        metrics::PartRefs prefix = metrics::prefix_refs(model, order, from - 1);
        for (int k = from; k <= to; ++k) {
            prefix.push_back(&model.part(order[k - 1]));
            sym_k[k - 1] = metrics::symmetry_score(prefix, cfg.metric.tau_sym).score;
        }
    };
    refresh(1, n);
    auto dist_total = [&] {
        double d = 0;
        for (int k = 1; k < n; ++k) d += centroid_dist(model, order[k - 1], order[k]);
        return d;
    };
    double dist_sum = dist_total();
    auto current_cost = [&] {
        double s = 0;
        for (double v : sym_k) s += v;
        return cfg.w_local * dist_sum + s;
    };
    double cost = current_cost();

    std::mt19937_64 rng(cfg.seed);
    const int kBatch = 64;
    int remaining = cfg.iters;

    struct Trial {
        int i, j; // 0-based positions, i < j
        bool valid = false;
        double cost = 0;
    };

    while (remaining > 0) {
        int batch = std::min(kBatch, remaining);
        remaining -= batch;
        std::vector<Trial> trials(batch);
        for (auto& t : trials) {
            int x = (int)(rng() % n);
            int y = (int)(rng() % (n - 1));
            if (y >= x) ++y;
            t.i = std::min(x, y);
            t.j = std::max(x, y);
        }

#pragma omp parallel for schedule(dynamic)
        for (int ti = 0; ti < batch; ++ti) {
            Trial& t = trials[ti];
            std::vector<int> trial = order;
            std::swap(trial[t.i], trial[t.j]);
            if (!ctx.order_valid(trial)) continue;
            // Only prefixes of length i+1..j change membership; distance
            // terms change only around the two swapped positions.
            double d_dist = 0;
            auto pair_d = [&](const std::vector<int>& o, int a, int b) {
                return (a < 0 || b >= n) ? 0.0 : centroid_dist(model, o[a], o[b]);
            };
            for (int at : {t.i, t.j}) {
                d_dist -= pair_d(order, at - 1, at) + pair_d(order, at, at + 1);
                d_dist += pair_d(trial, at - 1, at) + pair_d(trial, at, at + 1);
            }
            if (t.j == t.i + 1) { // shared middle pair was counted twice
                d_dist += pair_d(order, t.i, t.j) - pair_d(trial, t.i, t.j);
            }
            double d_sym = 0;
            metrics::PartRefs prefix = metrics::prefix_refs(model, trial, t.i);
            for (int k = t.i + 1; k <= t.j; ++k) {
                prefix.push_back(&model.part(trial[k - 1]));
                d_sym += metrics::symmetry_score(prefix, cfg.metric.tau_sym).score -
                         sym_k[k - 1];
            }
            t.valid = true;
            t.cost = cost + cfg.w_local * d_dist + d_sym;
        }

        for (const Trial& t : trials) {
            if (!t.valid || t.cost >= cost - 1e-12) continue;
            std::swap(order[t.i], order[t.j]);
            refresh(t.i + 1, t.j);
            dist_sum = dist_total();
            cost = current_cost();
            break; // later trials were scored against the old order
        }
    }
}

} // namespace

std::vector<int> order_steps(const AssemblyModel& model, const PrecedenceGraph& precedence,
                             const ContactGraph& contacts, const SequencerConfig& cfg) {
    OrderContext ctx{model, precedence, contacts, cfg, {}};
    ctx.succ.assign(model.part_count() + 1, {});
    for (auto [u, v] : precedence.edges) ctx.succ[u].push_back(v);
    std::vector<int> order = greedy_order(ctx);
    swap_descent(ctx, order);
    return order;
}

Partition partition_schedule(int part_count, int t_max, int b_min,
                             const BoundaryPredicate& admissible) {
    if (t_max < 1) throw std::invalid_argument("t_max must be positive");
    if (b_min < 1) throw std::invalid_argument("b_min must be positive");
    const int first_min = std::max(2, b_min + 1);
    int b1 = 0;
    for (int b = first_min; b <= part_count; ++b)
        if (admissible(b, 0)) {
            b1 = b;
            break;
        }
    if (!b1)
        throw UnplannableError(0, "no admissible first boundary in steps [" +
                                      std::to_string(first_min) + ", " +
                                      std::to_string(part_count) + "]");
    Partition out;
    out.bootstrap_end = b1 - 1;
    out.boundaries.push_back(b1);
    int prev = b1;
    while (part_count - prev + 1 > t_max) {
        int next = 0;
        for (int b = std::min(prev + t_max, part_count); b > prev; --b)
            if (admissible(b, prev)) {
                next = b;
                break;
            }
        if (!next)
            throw UnplannableError(prev, "no admissible boundary within " +
                                             std::to_string(t_max) + " steps after step " +
                                             std::to_string(prev));
        out.boundaries.push_back(next);
        prev = next;
    }
    return out;
}

PlanDraft partition_phases(const AssemblyModel& model, const std::vector<int>& order,
                           const SequencerConfig& cfg) {
    const int n = model.part_count();
    require_permutation(n, order);
    metrics::PartRefs all = metrics::prefix_refs(model, order, n);
    auto prefix = [&](int k) { return metrics::PartRefs(all.begin(), all.begin() + k); };

    std::vector<std::optional<double>> sym_cache(n + 1), dist_cache(n + 1);
    auto sym_at = [&](int k) {
        if (!sym_cache[k])
            sym_cache[k] = metrics::symmetry_score(prefix(k), cfg.metric.tau_sym).score;
        return *sym_cache[k];
    };
    auto dist_at = [&](int k) {
        if (!dist_cache[k]) dist_cache[k] = metrics::distinctness_score(prefix(k), cfg.metric);
        return *dist_cache[k];
    };
    std::map<std::pair<int, int>, double> conf_cache;
    auto conf_at = [&](int prev_b, int b) {
        auto key = std::make_pair(prev_b, b);
        auto it = conf_cache.find(key);
        if (it == conf_cache.end())
            it = conf_cache
                     .emplace(key, metrics::confusability_score(prefix(prev_b - 1), prefix(b - 1),
                                                                cfg.metric))
                     .first;
        return it->second;
    };

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };
    std::map<int, std::string> reject_reason;
    auto admissible = [&](int b, int prev) {
        double s = sym_at(b - 1);
        if (s > cfg.theta_sym) {
            reject_reason[b] = "prefix symmetry " + fmt(s) + " exceeds " + fmt(cfg.theta_sym);
            return false;
        }
        double d = dist_at(b - 1);
        if (d < cfg.theta_dist) {
            reject_reason[b] = "prefix distinctness " + fmt(d) + " below " + fmt(cfg.theta_dist);
            return false;
        }
        if (prev > 0) {
            double c = conf_at(prev, b);
            if (c > cfg.theta_conf) {
                reject_reason[b] = "confusability " + fmt(c) + " with the step-" +
                                   std::to_string(prev) + " prefix exceeds " + fmt(cfg.theta_conf);
                return false;
            }
        }
        return true;
    };

    Partition part;
    try {
        part = partition_schedule(n, cfg.t_max, cfg.b_min, admissible);
    } catch (const UnplannableError& e) {
        int farthest = e.stuck_step == 0 ? n : std::min(e.stuck_step + cfg.t_max, n);
        std::string msg = e.what();
        auto it = reject_reason.find(farthest);
        if (it != reject_reason.end())
            msg += "; at step " + std::to_string(farthest) + ": " + it->second;
        throw UnplannableError(e.stuck_step, msg);
    }

    PlanDraft draft;
    draft.order = order;
    draft.bootstrap_end = part.bootstrap_end;
    draft.boundaries = part.boundaries;
    int prev = 0;
    for (int b : part.boundaries) {
        BoundaryScores sc;
        sc.step = b;
        sc.symmetry = sym_at(b - 1);
        sc.distinctness = dist_at(b - 1);
        sc.confusability = prev ? conf_at(prev, b) : 0.0;
        draft.scores.push_back(sc);
        prev = b;
    }
    return draft;
}

std::vector<std::string> validate_schedule(int part_count, int bootstrap_end,
                                           const std::vector<int>& boundaries, int t_max) {
    std::vector<std::string> out;
    if (boundaries.empty()) {
        out.push_back("schedule has no model-target phases");
        return out;
    }
    if (bootstrap_end < 1) out.push_back("bootstrap must cover at least step 1");
    if (boundaries.front() != bootstrap_end + 1)
        out.push_back("first boundary must come right after the bootstrap segment");
    int prev = 1;
    for (int b : boundaries) {
        if (b < 2 || b > part_count)
            out.push_back("boundary " + std::to_string(b) + " is out of range");
        if (b <= prev)
            out.push_back("boundaries must be strictly ascending (saw " + std::to_string(b) +
                          " after " + std::to_string(prev) + ")");
        prev = b;
    }
    for (size_t i = 1; i < boundaries.size(); ++i) {
        int gap = boundaries[i] - boundaries[i - 1];
        if (gap > t_max)
            out.push_back("boundary gap " + std::to_string(boundaries[i - 1]) + " -> " +
                          std::to_string(boundaries[i]) + " is " + std::to_string(gap) +
                          " steps, more than the " + std::to_string(t_max) + " step tolerance");
    }
    return out;
}

InstructionPlan make_plan(const AssemblyModel& model, const SequencerConfig& cfg,
                          PlanDraft* draft_out) {
    ContactGraph contacts = contact_graph(model);
    PrecedenceGraph prec = precedence_graph(model);
    std::vector<int> order = order_steps(model, prec, contacts, cfg);
    PlanDraft draft = partition_phases(model, order, cfg);
    if (draft_out) *draft_out = draft;

    InstructionPlan plan;
    plan.version = 1;
    plan.model_hash = model.model_hash;
    plan.part_count = model.part_count();
    plan.bootstrap = {"ground_plane", 1, draft.bootstrap_end};
    for (size_t i = 0; i < draft.boundaries.size(); ++i) {
        PhaseSpan ph;
        ph.phase_id = 2 + (int)i;
        ph.start_step = draft.boundaries[i];
        ph.end_step = i + 1 < draft.boundaries.size() ? draft.boundaries[i + 1] - 1
                                                      : model.part_count();
        ph.target_prefix = ph.start_step - 1;
        ph.pre_activate_at = ph.start_step - 1;
        plan.phases.push_back(ph);
    }
    for (int k = 1; k <= model.part_count(); ++k) {
        const PartPlacement& p = model.part(draft.order[k - 1]);
        PlanStep st;
        st.step = k;
        st.part = p.index;
        st.shape_id = p.shape.shape_id;
        st.extent = {p.shape.width, p.shape.depth, p.shape.height};
        st.rot = p.rotation().name();
        st.pos = p.position;
        st.color_id = p.color_id;
        plan.steps.push_back(std::move(st));
    }
    auto problems = validate_plan(plan);
    if (!problems.empty())
        throw std::logic_error("generated plan failed validation: " + problems.front());
    return plan;
}

} // namespace brickplan
