#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tvgl/edge_set.hpp"
#include "tvgl/matrix.hpp"
#include "tvgl/timeseries.hpp"

namespace tvgl {

// Configuration of the evolving sparse precision trajectory. The precision
// matrix is base_diag * I plus a weighted graph Laplacian: each active edge
// (i,j) with weight a contributes -a to theta_ij/theta_ji and +a to both
// diagonal entries, so lambda_min stays >= base_diag at every step.
//
// Churn events fire at step multiples of churn_period, but only when the
// full ramp fits inside the grid (k + churn_period <= steps - 1); at each
// event churn_count full-weight edges start a linear decay to zero and
// churn_count fresh pairs start a linear ramp to a new uniform weight over
// the same churn_period steps. max_churn_events caps the number of events
// (< 0 means unlimited), which expresses one-shot churn scenarios.
struct EvolutionConfig {
    int p = 50;
    int steps = 1000;
    double base_diag = 0.25;
    int initial_edges = 50;
    int churn_period = 200;
    int churn_count = 5;
    double weight_min = 0.1;
    double weight_max = 0.3;
    std::uint64_t seed = 0;
    int max_churn_events = -1;

    void validate() const;  // throws ConfigError
};

struct EdgeWeight {
    Edge edge;
    double weight = 0.0;
};

// One activation interval of an edge: the step its ramp starts (its weight
// is exactly zero there unless it is an initial edge) and, if it was ever
// scheduled for removal, the step its decay starts and the step it
// completes. ramped_in distinguishes churned-in edges (weight zero at
// birth) from edges present at full weight from step zero.
struct EdgeEvent {
    Edge edge;
    int birth_step = 0;
    bool ramped_in = false;
    std::optional<int> decay_start_step;
    std::optional<int> death_step;
};

class GraphTrajectory {
public:
    GraphTrajectory(EvolutionConfig config, std::vector<double> times,
                    std::vector<SymmetricMatrix> thetas,
                    std::vector<std::vector<EdgeWeight>> step_edges,
                    std::vector<EdgeSet> edge_sets,
                    std::vector<EdgeEvent> events);

    const EvolutionConfig& config() const { return config_; }
    int steps() const { return static_cast<int>(thetas_.size()); }
    int p() const { return config_.p; }
    double time(int k) const { return times_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& times() const { return times_; }

    const SymmetricMatrix& theta(int k) const {
        return thetas_[static_cast<std::size_t>(k)];
    }
    PrecisionMatrix precision(int k) const {
        return PrecisionMatrix(theta(k));
    }
    /// Edges with strictly positive weight at step k.
    const EdgeSet& edge_set(int k) const {
        return edge_sets_[static_cast<std::size_t>(k)];
    }
    /// All edges active or in transition at step k, including the exact-zero
    /// endpoints of ramps (birth step of an added edge, completion step of a
    /// dying one).
    const std::vector<EdgeWeight>& step_edges(int k) const {
        return step_edges_[static_cast<std::size_t>(k)];
    }
    const std::vector<EdgeEvent>& events() const { return events_; }

private:
    EvolutionConfig config_;
    std::vector<double> times_;
    std::vector<SymmetricMatrix> thetas_;
    std::vector<std::vector<EdgeWeight>> step_edges_;
    std::vector<EdgeSet> edge_sets_;
    std::vector<EdgeEvent> events_;
};

GraphTrajectory generate_trajectory(const EvolutionConfig& config);

/// One independent draw from N(0, theta(k)^{-1}) per step, deterministic in
/// the seed. Step k uses its own random substream, so the draws do not
/// depend on worker scheduling or on the number of steps.
TimeSeriesData sample_data(const GraphTrajectory& trajectory,
                           std::uint64_t seed);

/// Activation intervals of every edge that was ever scheduled.
const std::vector<EdgeEvent>& edge_events(const GraphTrajectory& trajectory);

}  // namespace tvgl
