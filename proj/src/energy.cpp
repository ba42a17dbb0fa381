#include "juliaspec/energy.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "juliaspec/errors.hpp"

namespace juliaspec {

namespace {

void check_size(const Eigen::VectorXd& u, const LevelGraph& g) {
    if (u.size() != g.num_classes())
        throw std::invalid_argument("function has " + std::to_string(u.size()) + " values, graph has " +
                                    std::to_string(g.num_classes()) + " classes");
}

}  // namespace

SubdivisionMatrix family_subdivision_matrix(int p, int k) {
    SubdivisionMatrix s;
    s.M = Eigen::MatrixXd::Zero(k, k);
    s.M(0, k - 1) = double(ipow(p, k - 1));
    for (int n = 0; n + 1 < k; ++n) s.M(n + 1, n) = 1.0;
    s.first_type = 0;
    return s;
}

SubdivisionMatrix mating_subdivision_matrix() {
    SubdivisionMatrix s = family_subdivision_matrix(4, 3);
    s.M(0, 2) = 4.0;
    s.first_type = 1;
    return s;
}

SubdivisionMatrix subdivision_matrix(const LevelGraph& g) {
    return g.kind == GraphKind::family ? family_subdivision_matrix(g.p, g.k) : mating_subdivision_matrix();
}

EnergyWeights renormalization_weights(const SubdivisionMatrix& s) {
    // all eigenvalues of the companion matrix share one modulus, so power
    // iteration does not converge; take the real positive one directly
    Eigen::EigenSolver<Eigen::MatrixXd> es(s.M.transpose());
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solve for weights failed");
    int best = -1;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        auto z = es.eigenvalues()(i);
        if (std::abs(z.imag()) < 1e-12 * std::abs(z) && z.real() > 0 &&
            (best < 0 || z.real() > es.eigenvalues()(best).real()))
            best = i;
    }
    if (best < 0) throw NumericalError("no positive real eigenvalue for weights");
    EnergyWeights w;
    w.r = es.eigenvalues()(best).real();
    Eigen::VectorXd b = es.eigenvectors().col(best).real();
    b /= b(0);
    w.b = b;
    w.first_type = s.first_type;
    if ((b.array() <= 0).any()) throw NumericalError("weight vector not positive");
    double resid = (w.r * b.transpose() - b.transpose() * s.M).cwiseAbs().maxCoeff();
    if (resid > 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff() * w.r))
        throw NumericalError("weight eigenvector residual too large");
    return w;
}

EnergyWeights weights_for(const LevelGraph& g) { return renormalization_weights(subdivision_matrix(g)); }

double typed_energy(const Eigen::VectorXd& u, const LevelGraph& g, int type) {
    check_size(u, g);
    double e = 0.0;
    for (const Edge& ed : g.edges) {
        if (ed.type != type || ed.loop) continue;
        double d = u(ed.left) - u(ed.right);
        e += d * d / g.edge_length(ed);
    }
    return e;
}

double total_energy(const Eigen::VectorXd& u, const LevelGraph& g, const EnergyWeights& w, bool renormalized) {
    double e = 0.0;
    for (int t = g.min_type(); t <= g.max_type(); ++t) e += w.weight(t) * typed_energy(u, g, t);
    return renormalized ? e * std::pow(w.r, -g.level) : e;
}

Eigen::VectorXd harmonic_extension(const Eigen::VectorXd& u, const LevelGraph& g_prev, const LevelGraph& g_next) {
    check_size(u, g_prev);
    if (g_next.level != g_prev.level + 1 || g_next.kind != g_prev.kind)
        throw std::invalid_argument("harmonic_extension needs consecutive levels");
    const int p = g_prev.p;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(g_next.num_classes());
    Eigen::VectorXi hits = Eigen::VectorXi::Zero(g_next.num_classes());

    for (size_t i = 0; i < g_prev.edges.size(); ++i) {
        const Edge& e = g_prev.edges[i];
        const double ua = u(e.left), ub = u(e.right);
        auto kids = subdivision_children(g_prev.kind, p, g_prev.k, e.type);
        int nonloop = 0;
        for (auto& kd : kids) nonloop += kd.second ? 0 : 1;
        int before = 0;
        size_t idx = size_t(g_next.index_of[size_t(g_prev.points[i] * p)]);
        for (size_t c = 0; c < kids.size(); ++c) {
            int cls = g_next.point_class[idx];
            // the class at the start of each child; old endpoints get u itself
            double v = c == 0 ? ua : ua + (ub - ua) * double(before) / double(nonloop);
            sum(cls) += v;
            hits(cls) += 1;
            if (!kids[c].second) ++before;
            idx = (idx + 1) % g_next.points.size();
        }
    }
    // a class reached through several arcs gets the mean of its interpolants;
    // for a sextuplet the two paired arcs give the same value
    Eigen::VectorXd out(g_next.num_classes());
    for (int c = 0; c < g_next.num_classes(); ++c) {
        if (hits(c) == 0) throw ConstructionError("class not reached by extension");
        out(c) = sum(c) / hits(c);
    }
    // old classes must keep their values exactly
    for (size_t i = 0; i < g_prev.points.size(); ++i)
        out(g_next.class_of(g_prev.points[i] * p)) = u(g_prev.point_class[i]);
    return out;
}

std::vector<int> level_map(const LevelGraph& g_prev, const LevelGraph& g_next) {
    if (g_next.level != g_prev.level + 1 || g_next.kind != g_prev.kind)
        throw std::invalid_argument("level_map needs consecutive levels");
    std::vector<int> to(size_t(g_next.num_classes()), -1);
    for (size_t i = 0; i < g_next.points.size(); ++i) {
        int c = g_next.point_class[i];
        int d = g_prev.class_of(g_next.points[i] % g_prev.denominator);
        if (to[size_t(c)] >= 0 && to[size_t(c)] != d)
            throw ConstructionError("identifications are not compatible with t -> p t");
        to[size_t(c)] = d;
    }
    return to;
}

Eigen::VectorXd compose_with_map(const Eigen::VectorXd& u, const LevelGraph& g_prev, const LevelGraph& g_next) {
    check_size(u, g_prev);
    auto to = level_map(g_prev, g_next);
    Eigen::VectorXd out(g_next.num_classes());
    for (size_t c = 0; c < to.size(); ++c) out(Eigen::Index(c)) = u(to[c]);
    return out;
}

double eigenvalue_scale(const LevelGraph& g) {
    EnergyWeights w = weights_for(g);
    return double(g.p) * g.p / w.r;
}

}  // namespace juliaspec
