#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "juliaspec/graphs.hpp"
#include "juliaspec/laplacian.hpp"
#include "juliaspec/spectra.hpp"

namespace juliaspec {

// Class permutation induced by a map of the circle: class c goes to perm[c].
// Acting on functions: (P u)(c) = u(perm[c]).
struct SymmetryAction {
    std::string name;
    std::vector<int> perm;

    Eigen::VectorXd act(const Eigen::VectorXd& u) const;
};

SymmetryAction identity_action(const LevelGraph& g);
// a after b
SymmetryAction compose(const SymmetryAction& a, const SymmetryAction& b);

// t -> t + shift, as a class permutation.
SymmetryAction translation_action(const LevelGraph& g, const Rational& shift, const std::string& name);
SymmetryAction rotation_action(const LevelGraph& g);   // t -> t + 1/p

// Family: three maps fixing one class each; true reflections t -> c - t for
// k = 2, edge-level constructions that keep loop order for k >= 3.
// Mating: rho_H and rho_V.
std::vector<SymmetryAction> reflection_actions(const LevelGraph& g);

// Edge i goes to edge target[i].first, orientation reversed when .second.
struct EdgeMap {
    std::vector<std::pair<int, bool>> target;
};

EdgeMap propagate(const EdgeMap& map, const LevelGraph& g_prev, const LevelGraph& g_next);
SymmetryAction class_permutation(const EdgeMap& map, const LevelGraph& g, const std::string& name);

// Exact check: classes are permuted and typed edges (with lengths) go to edges.
bool is_automorphism(const LevelGraph& g, const SymmetryAction& a);

// max |P L - L P| / max |L| for the operator -Delta.
double commutator_error(const LaplacianMatrix& L, const SymmetryAction& a);

// e, R, R^2, S, S R, S R^2
std::vector<SymmetryAction> dihedral_group(const SymmetryAction& rotation, const SymmetryAction& reflection);

// Dimension of the character-chi isotypic part of span(B), B measure-orthonormal:
// (d/|G|) sum_g chi(g) tr(B^T M P_g B).
double isotypic_dimension(const Eigen::MatrixXd& B, const Eigen::VectorXd& measure,
                          const std::vector<SymmetryAction>& group, const std::vector<double>& characters,
                          int irrep_dimension);

// Measure-orthonormal basis of the projection of span(B) onto that part.
Eigen::MatrixXd isotypic_basis(const Eigen::MatrixXd& B, const Eigen::VectorXd& measure,
                               const std::vector<SymmetryAction>& group, const std::vector<double>& characters,
                               int irrep_dimension, double tol = 1e-6);

struct IrrepDecomposition {
    int trivial = 0;
    int alternating = 0;
    int standard = 0;            // number of 2-dimensional copies times 2
    double rounding = 0.0;       // largest distance of a raw dimension from an integer
    int total() const { return trivial + alternating + standard; }
};

IrrepDecomposition irrep_decompose(const Eigen::MatrixXd& B, const Eigen::VectorXd& measure,
                                   const std::vector<SymmetryAction>& d3);

// Rotation-invariant vectors of a cluster factor through the level map to
// eigenvectors of the level below with eigenvalue lambda / scale.
struct FactorizationReport {
    int invariant_dimension = 0;
    int one_dimensional_content = 0;
    double fibre_violation = 0.0;    // relative
    double pullback_residual = 0.0;  // relative
    bool pass = false;
};

FactorizationReport check_rotation_factorization(const Eigen::MatrixXd& B, double lambda, const LevelGraph& g,
                                                 const LevelGraph& g_prev, const LaplacianMatrix& L_prev,
                                                 const std::vector<SymmetryAction>& d3, double scale,
                                                 double tol = 1e-6);

struct Interval {
    Rational lo;
    Rational hi;   // closed
};

struct SupportReport {
    double region_max = 0.0;    // max |v| at points inside the regions
    double outside_max = 0.0;   // max |v| at points outside
    double overall_max = 0.0;
    double ratio = 0.0;         // the quantity compared with tol
    bool pass = false;
};

// v is supported in the regions: outside values <= tol * max |v|.
SupportReport check_support(const LevelGraph& g, const Eigen::VectorXd& v, const std::vector<Interval>& regions,
                            double tol);
// v vanishes on the regions: inside values <= tol * max |v|.
SupportReport check_vanishes_on(const LevelGraph& g, const Eigen::VectorXd& v, const std::vector<Interval>& regions,
                                double tol);

std::vector<Interval> vertical_support_region();     // [11,15]/112 and [67,71]/112
std::vector<Interval> horizontal_zero_region();      // [9,15]/112 and [65,71]/112

// Irrep decomposition of every reliable cluster at the top of a family tower
// (eigenvectors needed at the top), the no-one-dimensional-content property
// of primitive clusters, and the factorization of rotation-invariant vectors.
ConjectureReport check_family_symmetry(const SpectralTower& tower, double reliable_fraction = 0.25,
                                       double tol = 1e-6);

// b_0 = 1, b_1 = 2, b_j = 2 b_{j-1} (+ j/2 for even j).
long mating_multiplicity(int j);

// Sector dimensions of a cluster under {e, rho_H, rho_V, rho_H rho_V}.
struct SectorDims {
    int horizontal = 0;   // skew under rho_H, symmetric under rho_V
    int vertical = 0;     // symmetric under rho_H, skew under rho_V
    int even = 0;         // symmetric under both
    int odd = 0;          // skew under both
};

std::vector<SymmetryAction> mating_group(const LevelGraph& g);
SectorDims mating_sectors(const Eigen::MatrixXd& B, const Eigen::VectorXd& measure,
                          const std::vector<SymmetryAction>& group);

// Needs eigenvectors at every level of the tower.
ConjectureReport check_mating_multiplicities(const SpectralTower& tower, double reliable_fraction = 0.25);

// Support and vanishing checks for primitive clusters in the reliable range of the top level.
ConjectureReport check_mating_supports(const SpectralTower& tower, double tol, double reliable_fraction = 0.25);

}  // namespace juliaspec
