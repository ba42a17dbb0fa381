#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "juliaspec/circle.hpp"

namespace juliaspec {

enum class GraphKind { family, mating };

std::string to_string(GraphKind kind);

// Arc from points[i] to points[i+1] (cyclically). Length is len_num/denominator.
struct Edge {
    int left = 0;   // class ids
    int right = 0;
    int type = 0;   // family: 0..k-1, mating: 1..3
    i64 len_num = 0;
    bool loop = false;
};

struct LevelGraph {
    int level = 0;
    GraphKind kind = GraphKind::family;
    int p = 2;
    int k = 2;               // mating: 3 (the rabbit period)
    i64 denominator = 1;     // family p^m (p^k - 1), mating 7 * 2^m

    std::vector<i64> points;                 // sorted numerators
    std::vector<int> point_class;            // class id per point index
    std::vector<std::vector<i64>> classes;   // sorted numerators; ordered by smallest member
    std::vector<Edge> edges;                 // edges[i] starts at points[i]
    std::vector<int> index_of;               // numerator -> point index, -1 if absent

    int num_classes() const { return int(classes.size()); }
    int num_points() const { return int(points.size()); }
    int class_of(i64 numerator) const;
    bool has_point(i64 numerator) const;
    int min_type() const { return kind == GraphKind::family ? 0 : 1; }
    int max_type() const { return kind == GraphKind::family ? k - 1 : 3; }
    // type whose edges are split by subdivision
    int splitting_type() const { return max_type(); }
    i64 type_length(int type) const;
    double edge_length(const Edge& e) const { return double(e.len_num) / double(denominator); }
};

struct GraphLimits {
    i64 max_points = 200000;
};

LevelGraph build_family_graph(int p, int k, int m, const GraphLimits& limits = {});
LevelGraph build_mating_graph(int m, const GraphLimits& limits = {});
LevelGraph subdivide(const LevelGraph& g, const GraphLimits& limits = {});

// a_m: new sextuplets appearing at level m of the mating.
i64 sextuplet_count(int m);

// Child types of a parent edge type under subdivision, with loop flags.
std::vector<std::pair<int, bool>> subdivision_children(GraphKind kind, int p, int k, int type);

struct Census {
    int classes = 0;
    int points = 0;
    int edges = 0;
    int loops = 0;
    std::map<int, int> nonloop_by_type;
    std::map<int, int> loop_by_type;
    std::map<int, int> class_sizes;   // size -> count
    int sextuplets = 0;
    int new_sextuplets = 0;           // sextuplets made only of points new at this level
};

Census census(const LevelGraph& g);

// Structural invariants; returns human-readable failures (empty when valid).
std::vector<std::string> validate(const LevelGraph& g);

bool same_graph(const LevelGraph& a, const LevelGraph& b);

// Family graphs only: the classes are exactly the kneading classes of the points.
bool kneading_agrees(const LevelGraph& g);

nlohmann::json graph_to_json(const LevelGraph& g);

}  // namespace juliaspec
