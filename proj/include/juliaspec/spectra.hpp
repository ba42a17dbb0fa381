#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "juliaspec/graphs.hpp"
#include "juliaspec/laplacian.hpp"

namespace juliaspec {

constexpr int kUnclassified = -1;

struct MultiplicityCluster {
    double value = 0.0;        // first member
    Eigen::Index first = 0;    // indices into the sorted spectrum, inclusive
    Eigen::Index last = 0;
    int multiplicity = 1;
    bool zero = false;
    int order = 0;             // kUnclassified when the match is ambiguous
    int parent = -1;           // matching cluster one level down (tower) or in the same spectrum
};

// Adjacent eigenvalues whose gap was within 10 rtol but above rtol.
struct NearMiss {
    Eigen::Index index = 0;    // between index and index + 1
    double relative_gap = 0.0;
};

struct ClusterSet {
    std::vector<MultiplicityCluster> clusters;
    std::vector<NearMiss> near_misses;
    double rtol = 1e-8;
    Eigen::Index total = 0;    // spectrum size

    // cluster whose value is within rtol of x (relative), or -1; -2 if ambiguous
    int find(double x, double rtol) const;
    int nearest(double x) const;
};

// Greedy consecutive clustering: a gap <= rtol * representative joins the cluster.
ClusterSet cluster_multiplicities(const Eigen::VectorXd& eigenvalues, double rtol);

// p^{(k+1)/k}
double family_scale(int p, int k);

// Order tags using a tower of spectra, levels[0] = level 1. A cluster is
// derived when lambda/scale matches a cluster of the level below; its order
// is one more than that cluster's.
void classify_orders(std::vector<ClusterSet>& levels, double scale, double rtol);

// Same rule inside a single spectrum.
ClusterSet classify_orders(const ClusterSet& clusters, double scale, double rtol);

struct LevelData {
    LevelGraph graph;
    SpectralResult spectrum;
    ClusterSet clusters;
};

enum class TowerVectors { none, top, all };

struct SpectralTower {
    std::vector<LevelData> levels;   // levels[i] is level i + 1
    double scale = 1.0;
    double rtol = 1e-8;

    const LevelData& top() const { return levels.back(); }
    const LevelData& at(int level) const { return levels.at(size_t(level - 1)); }
};

SpectralTower build_tower(GraphKind kind, int p, int k, int m, double rtol, TowerVectors vectors);

// #{lambda_j <= t}, counting multiplicity and lambda_0.
Eigen::Index counting_function(const Eigen::VectorXd& eigenvalues, double t);

struct WeylSample {
    double t = 0.0;
    Eigen::Index count = 0;
    double ratio = 0.0;
};

// N(t)/t^alpha on a log-spaced grid from lambda_1 to lambda_max.
std::vector<WeylSample> weyl_ratio(const Eigen::VectorXd& eigenvalues, double alpha, int samples = 200);

struct WeylFit {
    double slope = 0.0;
    double t_low = 0.0;
    double t_high = 0.0;
    int samples = 0;
};

// Least squares slope of log N against log t on a log grid covering the
// middle half (in log t) of [lambda_1, lambda_max].
WeylFit weyl_exponent(const Eigen::VectorXd& eigenvalues, int samples = 400);

struct ReportEntry {
    double value = 0.0;
    Eigen::Index index = 0;    // last index of the cluster
    int multiplicity = 0;
    int order = 0;
    long expected = 0;
    long observed = 0;
    std::string status;        // match, excess, deficit, odd, missing, unclassified, info
    std::string note;
};

struct ConjectureReport {
    std::string statement;
    bool pass = true;
    std::string summary;
    std::vector<ReportEntry> entries;
    nlohmann::json tolerances = nlohmann::json::object();
    nlohmann::json extra = nlohmann::json::object();

    nlohmann::json to_json() const;
    std::string table() const;
    int count(const std::string& status) const;
};

// m_0 = 2, then 3(m-1)+1 or, when j is a multiple of k, 3(m-2)+2.
long conjectured_multiplicity(int k, int order);

// Reliable range: clusters ending below reliable_fraction * spectrum size.
ConjectureReport check_multiplicity_conjecture(const ClusterSet& clusters, int k, double reliable_fraction = 0.25);

// For the lowest primitive clusters, locate scale^j * lambda and compare the
// last index with p^j times the last index of lambda.
ConjectureReport check_counting_identity(const SpectralTower& tower, int p, int j_max, int primitives = 3,
                                         double rtol = 1e-6);

struct GapRow {
    int n = 0;
    Eigen::Index index = 0;      // p^n
    double below = 0.0;          // lambda_{p^n - 1}
    double above = 0.0;          // lambda_{p^n}
    double ratio_up = 0.0;       // above / below
    double ratio_down = 0.0;     // below / above
};

std::vector<GapRow> spectral_gaps(const Eigen::VectorXd& eigenvalues, int p);

}  // namespace juliaspec
