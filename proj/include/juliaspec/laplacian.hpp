#pragma once

#include <string>

#include <Eigen/Dense>

#include "juliaspec/energy.hpp"
#include "juliaspec/graphs.hpp"

namespace juliaspec {

// -Delta = diag(measure)^{-1} * form, where form is the symmetric stiffness
// matrix of the renormalized energy.
struct LaplacianMatrix {
    Eigen::MatrixXd form;
    Eigen::VectorXd measure;   // sums to 1
    int level = 0;

    Eigen::Index dimension() const { return form.rows(); }
    Eigen::MatrixXd operator_matrix() const;          // -Delta
    Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
};

// Class measure: share of the level's circle points in the class.
Eigen::VectorXd class_measure(const LevelGraph& g);

// Conductance r^{-m} b_n / |e| of a non-loop edge.
double conductance(const LevelGraph& g, const EnergyWeights& w, const Edge& e);

LaplacianMatrix assemble(const LevelGraph& g, const EnergyWeights& w);

struct SpectralResult {
    Eigen::VectorXd eigenvalues;    // ascending, of -Delta
    Eigen::MatrixXd eigenvectors;   // columns, orthonormal in the measure; empty if not requested
    Eigen::VectorXd measure;
    int level = 0;
    GraphKind kind = GraphKind::family;
    int p = 0;
    int k = 0;
    double r = 0.0;

    bool has_vectors() const { return eigenvectors.cols() > 0; }
    Eigen::Index size() const { return eigenvalues.size(); }
};

struct SolveOptions {
    bool vectors = true;
    Eigen::Index max_dimension = 8000;
};

SpectralResult eigensolve(const LaplacianMatrix& L, const SolveOptions& opts = {});

// Graph, weights, assembly and solve in one call.
SpectralResult level_spectrum(const LevelGraph& g, const SolveOptions& opts = {});

// max over pairs of ||(-Delta)v - lambda v||_mu / max(1, lambda)
double max_residual(const LaplacianMatrix& L, const SpectralResult& s, Eigen::Index count = -1);

// <u, v>_mu
double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& measure);

std::string spectrum_csv(const SpectralResult& s, Eigen::Index count);
// rows: class id, class points as fractions, value
std::string eigenvector_csv(const LevelGraph& g, const Eigen::VectorXd& v);
// rows: circle point as a fraction, value; in circle order
std::string eigenvector_trace_csv(const LevelGraph& g, const Eigen::VectorXd& v);

// shortest round-trip form, at most 15 significant digits
std::string format_double(double x);

}  // namespace juliaspec
