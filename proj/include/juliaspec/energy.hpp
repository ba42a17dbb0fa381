#pragma once

#include <Eigen/Dense>

#include "juliaspec/graphs.hpp"

namespace juliaspec {

// Energy transfer between edge types under harmonic extension.
// Row/column i corresponds to edge type first_type + i.
struct SubdivisionMatrix {
    Eigen::MatrixXd M;
    int first_type = 0;
};

SubdivisionMatrix family_subdivision_matrix(int p, int k);
SubdivisionMatrix mating_subdivision_matrix();
SubdivisionMatrix subdivision_matrix(const LevelGraph& g);

struct EnergyWeights {
    double r = 1.0;
    Eigen::VectorXd b;   // b(0) = 1
    int first_type = 0;

    double weight(int type) const { return b(type - first_type); }
};

// Positive left eigenvector r b = b M with b_0 = 1.
EnergyWeights renormalization_weights(const SubdivisionMatrix& M);
EnergyWeights weights_for(const LevelGraph& g);

// Sum over type-n edges of |u(x) - u(y)|^2 / |x - y|.
double typed_energy(const Eigen::VectorXd& u, const LevelGraph& g, int type);

// Sum of b_n times the typed energies, times r^{-m} when renormalized.
double total_energy(const Eigen::VectorXd& u, const LevelGraph& g, const EnergyWeights& w, bool renormalized);

// Extend u from g_prev to g_next = subdivide(g_prev) by linear interpolation
// along every split edge.
Eigen::VectorXd harmonic_extension(const Eigen::VectorXd& u, const LevelGraph& g_prev, const LevelGraph& g_next);

// For each class of g_next, the class of g_prev containing P(t) = p t mod 1
// of its points.
std::vector<int> level_map(const LevelGraph& g_prev, const LevelGraph& g_next);

// u o P as a function on the classes of g_next.
Eigen::VectorXd compose_with_map(const Eigen::VectorXd& u, const LevelGraph& g_prev, const LevelGraph& g_next);

// Factor p^2 / r by which u -> u o P scales eigenvalues.
double eigenvalue_scale(const LevelGraph& g);

}  // namespace juliaspec
