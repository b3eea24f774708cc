#include "tvgl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tvgl {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    if (s.empty()) throw IoError("empty numeric field");
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size())
        throw IoError("invalid numeric field: '" + s + "'");
    return v;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

void write_data_csv(const std::filesystem::path& path,
                    const TimeSeriesData& data) {
    std::ostringstream out;
    out << 't';
    for (int j = 1; j <= data.p(); ++j) out << ",z" << j;
    out << '\n';
    for (int k = 0; k < data.n(); ++k) {
        out << format_double(data.time(k));
        for (double v : data.row(k)) out << ',' << format_double(v);
        out << '\n';
    }
    write_text_file(path, out.str());
}

TimeSeriesData read_data_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty data file");
    const std::vector<std::string> header = split_line(line, ',');
    if (header.empty() || header[0] != "t")
        throw IoError("data CSV must start with header t,z1,...,zp");
    const int p = static_cast<int>(header.size()) - 1;
    if (p < 1) throw IoError("data CSV has no observation columns");

    std::vector<double> times;
    std::vector<double> obs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line, ',');
        if (static_cast<int>(fields.size()) != p + 1)
            throw IoError("data CSV row has wrong field count");
        times.push_back(parse_double(fields[0]));
        for (int j = 1; j <= p; ++j)
            obs.push_back(parse_double(fields[static_cast<std::size_t>(j)]));
    }
    const int n = static_cast<int>(times.size());
    return TimeSeriesData(n, p, std::move(obs), std::move(times));
}

void write_trajectory_jsonl(const std::filesystem::path& path,
                            const GraphTrajectory& trajectory) {
    std::ostringstream out;
    nlohmann::json meta{{"type", "meta"},
                        {"p", trajectory.p()},
                        {"base_diag", trajectory.config().base_diag},
                        {"steps", trajectory.steps()}};
    out << meta.dump() << '\n';
    for (int k = 0; k < trajectory.steps(); ++k) {
        nlohmann::json edges = nlohmann::json::array();
        for (const EdgeWeight& ew : trajectory.step_edges(k))
            edges.push_back({ew.edge.i, ew.edge.j, ew.weight});
        nlohmann::json record{
            {"step", k}, {"t", trajectory.time(k)}, {"edges", edges}};
        out << record.dump() << '\n';
    }
    write_text_file(path, out.str());
}

TruthTrajectory::TruthTrajectory(int p, double base_diag,
                                 std::vector<std::vector<EdgeWeight>> step_edges)
    : p_(p), base_diag_(base_diag), step_edges_(std::move(step_edges)) {
    if (p_ < 1) throw IoError("trajectory: p must be >= 1");
    if (step_edges_.empty()) throw IoError("trajectory has no steps");
}

double TruthTrajectory::time(int k) const {
    const int n = steps();
    return n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
}

int TruthTrajectory::nearest_step(double t) const {
    const int n = steps();
    if (n == 1) return 0;
    const double raw = t * static_cast<double>(n - 1);
    const int k = static_cast<int>(std::lround(raw));
    return std::clamp(k, 0, n - 1);
}

SymmetricMatrix TruthTrajectory::theta_at(int k) const {
    SymmetricMatrix theta(p_);
    for (int i = 0; i < p_; ++i) theta.set(i, i, base_diag_);
    for (const EdgeWeight& ew : step_edges(k)) {
        if (ew.weight <= 0.0) continue;
        theta.add(ew.edge.i, ew.edge.j, -ew.weight);
        theta.add(ew.edge.i, ew.edge.i, ew.weight);
        theta.add(ew.edge.j, ew.edge.j, ew.weight);
    }
    return theta;
}

EdgeSet TruthTrajectory::edge_set_at(int k) const {
    EdgeSet edges(p_);
    for (const EdgeWeight& ew : step_edges(k))
        if (ew.weight > 0.0) edges.insert(ew.edge.i, ew.edge.j);
    return edges;
}

std::vector<EdgeEvent> TruthTrajectory::events() const {
    // An edge is "listed" from its ramp start through its decay completion,
    // including the exact-zero endpoints. Gaps in the listing separate
    // activation intervals.
    std::vector<EdgeEvent> events;
    struct State {
        bool open = false;
        int birth = 0;
        bool ramped_in = false;
        bool saw_positive = false;
        double last_weight = 0.0;
        std::optional<int> decay_start;
        std::optional<int> death;
    };
    std::vector<State> state(static_cast<std::size_t>(p_) *
                             static_cast<std::size_t>(p_));
    auto index = [this](const Edge& e) {
        return static_cast<std::size_t>(e.i) * p_ + e.j;
    };
    auto emit = [&](std::size_t idx, const State& st) {
        const int i = static_cast<int>(idx) / p_;
        const int j = static_cast<int>(idx) % p_;
        events.push_back(EdgeEvent{Edge{i, j}, st.birth, st.ramped_in,
                                   st.decay_start, st.death});
    };
    std::vector<char> listed_now(state.size(), 0);
    for (int k = 0; k < steps(); ++k) {
        std::fill(listed_now.begin(), listed_now.end(), 0);
        for (const EdgeWeight& ew : step_edges(k)) {
            const std::size_t idx = index(ew.edge);
            listed_now[idx] = 1;
            State& st = state[idx];
            if (!st.open) {
                st.open = true;
                st.birth = k;
                st.ramped_in = ew.weight == 0.0;
                st.saw_positive = false;
                st.last_weight = ew.weight;
                st.decay_start.reset();
                st.death.reset();
            }
            if (ew.weight > 0.0) {
                st.saw_positive = true;
            } else if (st.saw_positive && !st.death) {
                st.death = k;
            }
            if (ew.weight < st.last_weight && !st.decay_start)
                st.decay_start = k - 1;
            st.last_weight = ew.weight;
        }
        for (std::size_t idx = 0; idx < state.size(); ++idx) {
            State& st = state[idx];
            if (st.open && !listed_now[idx]) {
                emit(idx, st);
                st = State{};
            }
        }
    }
    for (std::size_t idx = 0; idx < state.size(); ++idx)
        if (state[idx].open) emit(idx, state[idx]);
    std::sort(events.begin(), events.end(), [](const EdgeEvent& a,
                                               const EdgeEvent& b) {
        if (a.birth_step != b.birth_step) return a.birth_step < b.birth_step;
        return a.edge < b.edge;
    });
    return events;
}

TruthTrajectory read_trajectory_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trajectory file");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("bad trajectory meta record: ") + e.what());
    }
    if (!meta.contains("type") || meta["type"] != "meta")
        throw IoError("trajectory file must start with a meta record");
    const int p = meta.at("p").get<int>();
    const double base_diag = meta.at("base_diag").get<double>();

    std::vector<std::vector<EdgeWeight>> step_edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("bad trajectory record: ") + e.what());
        }
        std::vector<EdgeWeight> edges;
        for (const auto& e : record.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw IoError("trajectory edge must be [i, j, weight]");
            edges.push_back(EdgeWeight{
                make_edge(e[0].get<int>(), e[1].get<int>()),
                e[2].get<double>()});
        }
        step_edges.push_back(std::move(edges));
    }
    return TruthTrajectory(p, base_diag, std::move(step_edges));
}

std::string precision_matrix_json(const SymmetricMatrix& theta,
                                  const std::string& meta_json) {
    nlohmann::json meta = nlohmann::json::parse(meta_json);
    nlohmann::json j{{"p", theta.dim()},
                     {"entries", theta.entries()},
                     {"meta", meta}};
    return j.dump(2) + "\n";
}

}  // namespace tvgl
