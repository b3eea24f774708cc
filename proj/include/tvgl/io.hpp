#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tvgl/edge_set.hpp"
#include "tvgl/matrix.hpp"
#include "tvgl/simgen.hpp"
#include "tvgl/timeseries.hpp"

namespace tvgl {

/// Shortest round-trip decimal formatting of a double.
std::string format_double(double v);

/// Strict double parse; throws IoError on trailing garbage.
double parse_double(const std::string& s);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// Data CSV: header "t,z1,...,zp", one observation per row, shortest
// round-trip formatting so simulate -> estimate is lossless.
void write_data_csv(const std::filesystem::path& path,
                    const TimeSeriesData& data);
TimeSeriesData read_data_csv(const std::filesystem::path& path);

// Trajectory JSONL: a leading meta record {"type":"meta", "p":..,
// "base_diag":.., "steps":..} followed by one record per step
// {"step":k, "t":t_k, "edges":[[i,j,weight],...]}. Edges in transition are
// listed through the exact-zero endpoints of their ramps, so birth and
// death steps are recoverable from the file alone.
void write_trajectory_jsonl(const std::filesystem::path& path,
                            const GraphTrajectory& trajectory);

// Trajectory reconstructed from a JSONL file: enough to rebuild Theta(t_k),
// the active edge sets and the edge events.
class TruthTrajectory {
public:
    TruthTrajectory(int p, double base_diag,
                    std::vector<std::vector<EdgeWeight>> step_edges);

    int p() const { return p_; }
    int steps() const { return static_cast<int>(step_edges_.size()); }
    double base_diag() const { return base_diag_; }
    double time(int k) const;
    /// Step whose grid time is nearest to t.
    int nearest_step(double t) const;

    SymmetricMatrix theta_at(int k) const;
    EdgeSet edge_set_at(int k) const;
    const std::vector<EdgeWeight>& step_edges(int k) const {
        return step_edges_[static_cast<std::size_t>(k)];
    }
    std::vector<EdgeEvent> events() const;

private:
    int p_ = 0;
    double base_diag_ = 0.0;
    std::vector<std::vector<EdgeWeight>> step_edges_;
};

TruthTrajectory read_trajectory_jsonl(const std::filesystem::path& path);

/// Dense precision matrix as JSON {"p":.., "entries":[row-major],
/// "meta":{...}}; meta carries the estimation context.
std::string precision_matrix_json(const SymmetricMatrix& theta,
                                  const std::string& meta_json);

}  // namespace tvgl
