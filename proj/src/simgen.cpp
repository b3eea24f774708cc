#include "tvgl/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "tvgl/rng.hpp"

namespace tvgl {

void EvolutionConfig::validate() const {
    if (p < 1) throw ConfigError("p must be >= 1");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (!(base_diag > 0.0)) throw ConfigError("base_diag must be positive");
    if (!(weight_min > 0.0) || !(weight_min <= weight_max))
        throw ConfigError("need 0 < weight_min <= weight_max");
    const long long pairs =
        static_cast<long long>(p) * (p - 1) / 2;
    if (initial_edges < 0 || initial_edges > pairs)
        throw ConfigError("initial_edges must lie in [0, p(p-1)/2]");
    if (churn_period < 1) throw ConfigError("churn_period must be >= 1");
    if (churn_count < 0 || churn_count > initial_edges)
        throw ConfigError("churn_count must lie in [0, initial_edges]");
    if (churn_count > 0 && 4 * churn_count > p)
        throw ConfigError(
            "churn needs 4 * churn_count <= p: the added and removed edges "
            "of one event must be vertex-disjoint");
}

GraphTrajectory::GraphTrajectory(EvolutionConfig config,
                                 std::vector<double> times,
                                 std::vector<SymmetricMatrix> thetas,
                                 std::vector<std::vector<EdgeWeight>> step_edges,
                                 std::vector<EdgeSet> edge_sets,
                                 std::vector<EdgeEvent> events)
    : config_(std::move(config)), times_(std::move(times)),
      thetas_(std::move(thetas)), step_edges_(std::move(step_edges)),
      edge_sets_(std::move(edge_sets)), events_(std::move(events)) {}

namespace {

Edge decode_pair(int p, std::size_t index) {
    // index into the i < j enumeration ordered by row
    std::size_t remaining = index;
    for (int i = 0; i < p - 1; ++i) {
        const std::size_t row = static_cast<std::size_t>(p - 1 - i);
        if (remaining < row) return Edge{i, i + 1 + static_cast<int>(remaining)};
        remaining -= row;
    }
    throw Error("pair index out of range");
}

struct Transition {
    Edge edge;
    int start = 0;
    double from = 0.0;
    double to = 0.0;

    double weight_at(int k, int period) const {
        return from + (to - from) * static_cast<double>(k - start) /
                          static_cast<double>(period);
    }
};

}  // namespace

GraphTrajectory generate_trajectory(const EvolutionConfig& config) {
    config.validate();
    const int p = config.p;
    const int steps = config.steps;
    const int period = config.churn_period;
    const std::size_t pair_count =
        static_cast<std::size_t>(p) * (p - 1) / 2;

    Rng rng = Rng::substream(config.seed, stream_tag("trajectory"));

    std::map<Edge, double> stable;         // full-weight edges
    std::vector<Transition> transitions;   // ongoing linear ramps
    std::vector<EdgeEvent> events;

    auto in_transition = [&](const Edge& e) {
        return std::any_of(transitions.begin(), transitions.end(),
                           [&](const Transition& t) { return t.edge == e; });
    };
    auto draw_free_pair = [&](const std::vector<char>* blocked_vertex) {
        for (std::size_t attempt = 0; attempt < 64 * pair_count + 64;
             ++attempt) {
            const Edge e = decode_pair(p, rng.uniform_index(pair_count));
            if (stable.count(e) || in_transition(e)) continue;
            if (blocked_vertex != nullptr &&
                ((*blocked_vertex)[static_cast<std::size_t>(e.i)] ||
                 (*blocked_vertex)[static_cast<std::size_t>(e.j)]))
                continue;
            return e;
        }
        throw ConfigError("no free vertex pair available for a new edge");
    };

    for (int n = 0; n < config.initial_edges; ++n) {
        const Edge e = draw_free_pair(nullptr);
        stable[e] = rng.uniform(config.weight_min, config.weight_max);
    }
    for (const auto& [e, w] : stable)
        events.push_back(EdgeEvent{e, 0, false, std::nullopt, std::nullopt});

    std::vector<double> times = TimeSeriesData::default_grid(steps);
    std::vector<SymmetricMatrix> thetas;
    std::vector<std::vector<EdgeWeight>> step_edges;
    std::vector<EdgeSet> edge_sets;
    thetas.reserve(static_cast<std::size_t>(steps));
    step_edges.reserve(static_cast<std::size_t>(steps));
    edge_sets.reserve(static_cast<std::size_t>(steps));

    auto set_death = [&](const Edge& e, int decay_start, int death) {
        for (auto it = events.rbegin(); it != events.rend(); ++it)
            if (it->edge == e && !it->death_step) {
                it->decay_start_step = decay_start;
                it->death_step = death;
                return;
            }
        throw Error("internal: decay scheduled for an edge with no open event");
    };

    int events_fired = 0;
    for (int k = 0; k < steps; ++k) {
        // Finished ramps: births join the stable set; deaths are emitted one
        // final time at weight zero so the record carries the completion step.
        std::vector<Edge> dying_now;
        for (auto it = transitions.begin(); it != transitions.end();) {
            if (it->start + period == k) {
                if (it->to > 0.0)
                    stable[it->edge] = it->to;
                else
                    dying_now.push_back(it->edge);
                it = transitions.erase(it);
            } else {
                ++it;
            }
        }

        const bool boundary = config.churn_count > 0 && k % period == 0 &&
                              k + period <= steps - 1;
        const bool allowed = config.max_churn_events < 0 ||
                             events_fired < config.max_churn_events;
        if (boundary && allowed) {
            ++events_fired;
            // Transitions of one event stay vertex-disjoint so every theta
            // entry, diagonals included, moves by at most one ramp slope
            // per step.
            std::vector<char> busy(static_cast<std::size_t>(p), 0);
            auto claim = [&](const Edge& e) {
                busy[static_cast<std::size_t>(e.i)] = 1;
                busy[static_cast<std::size_t>(e.j)] = 1;
            };
            // Deletions come from the full-weight pool only.
            for (int d = 0; d < config.churn_count; ++d) {
                std::vector<Edge> pool;
                pool.reserve(stable.size());
                for (const auto& [e, w] : stable)
                    if (!busy[static_cast<std::size_t>(e.i)] &&
                        !busy[static_cast<std::size_t>(e.j)])
                        pool.push_back(e);
                if (pool.empty())
                    throw ConfigError(
                        "no vertex-disjoint full-weight edge left to delete");
                const Edge victim = pool[rng.uniform_index(pool.size())];
                claim(victim);
                transitions.push_back(
                    Transition{victim, k, stable[victim], 0.0});
                stable.erase(victim);
                set_death(victim, k, k + period);
            }
            for (int a = 0; a < config.churn_count; ++a) {
                const Edge e = draw_free_pair(&busy);
                claim(e);
                const double target =
                    rng.uniform(config.weight_min, config.weight_max);
                transitions.push_back(Transition{e, k, 0.0, target});
                events.push_back(
                    EdgeEvent{e, k, true, std::nullopt, std::nullopt});
            }
        }

        // Emit the step.
        std::map<Edge, double> weights;
        for (const auto& [e, w] : stable) weights[e] = w;
        for (const Transition& t : transitions)
            weights[t.edge] = t.weight_at(k, period);
        for (const Edge& e : dying_now) weights.emplace(e, 0.0);

        SymmetricMatrix theta(p);
        for (int i = 0; i < p; ++i) theta.set(i, i, config.base_diag);
        std::vector<EdgeWeight> record;
        record.reserve(weights.size());
        EdgeSet active(p);
        for (const auto& [e, w] : weights) {
            record.push_back(EdgeWeight{e, w});
            if (w > 0.0) {
                active.insert(e.i, e.j);
                theta.add(e.i, e.j, -w);
                theta.add(e.i, e.i, w);
                theta.add(e.j, e.j, w);
            }
        }
        thetas.push_back(std::move(theta));
        step_edges.push_back(std::move(record));
        edge_sets.push_back(std::move(active));
    }

    return GraphTrajectory(config, std::move(times), std::move(thetas),
                           std::move(step_edges), std::move(edge_sets),
                           std::move(events));
}

TimeSeriesData sample_data(const GraphTrajectory& trajectory,
                           std::uint64_t seed) {
    const int n = trajectory.steps();
    const int p = trajectory.p();
    std::vector<double> obs(static_cast<std::size_t>(n) * p);
    std::optional<CholeskyFactor> factor;
    std::vector<double> z(static_cast<std::size_t>(p));
    for (int k = 0; k < n; ++k) {
        if (k == 0 || !(trajectory.theta(k) == trajectory.theta(k - 1)))
            factor = cholesky(trajectory.theta(k));
        Rng rng = Rng::substream(seed, stream_tag("sample"),
                                 static_cast<std::uint64_t>(k));
        for (int i = 0; i < p; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
        // Solve L^T z <- g: the result has covariance (L L^T)^{-1} = Sigma.
        for (int i = p - 1; i >= 0; --i) {
            double s = 0.0;
            for (int j = i + 1; j < p; ++j)
                s += (*factor)(j, i) * z[static_cast<std::size_t>(j)];
            z[static_cast<std::size_t>(i)] =
                (z[static_cast<std::size_t>(i)] - s) / (*factor)(i, i);
        }
        std::copy(z.begin(), z.end(),
                  obs.begin() + static_cast<std::size_t>(k) * p);
    }
    return TimeSeriesData(n, p, std::move(obs), trajectory.times());
}

const std::vector<EdgeEvent>& edge_events(const GraphTrajectory& trajectory) {
    return trajectory.events();
}

}  // namespace tvgl
