#include "juliaspec/laplacian.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "juliaspec/errors.hpp"

namespace juliaspec {

Eigen::MatrixXd LaplacianMatrix::operator_matrix() const { return measure.cwiseInverse().asDiagonal() * form; }

Eigen::VectorXd LaplacianMatrix::apply(const Eigen::VectorXd& u) const {
    return (form * u).cwiseQuotient(measure);
}

Eigen::VectorXd class_measure(const LevelGraph& g) {
    Eigen::VectorXd mu(g.num_classes());
    for (int c = 0; c < g.num_classes(); ++c) mu(c) = double(g.classes[size_t(c)].size()) / double(g.num_points());
    return mu;
}

double conductance(const LevelGraph& g, const EnergyWeights& w, const Edge& e) {
    return std::pow(w.r, -g.level) * w.weight(e.type) / g.edge_length(e);
}

LaplacianMatrix assemble(const LevelGraph& g, const EnergyWeights& w) {
    const int n = g.num_classes();
    LaplacianMatrix L;
    L.level = g.level;
    L.form = Eigen::MatrixXd::Zero(n, n);
    L.measure = class_measure(g);
    for (const Edge& e : g.edges) {
        if (e.loop) continue;
        double c = conductance(g, w, e);
        L.form(e.left, e.left) += c;
        L.form(e.right, e.right) += c;
        L.form(e.left, e.right) -= c;
        L.form(e.right, e.left) -= c;
    }
    return L;
}

SpectralResult eigensolve(const LaplacianMatrix& L, const SolveOptions& opts) {
    const Eigen::Index n = L.dimension();
    if (n > opts.max_dimension)
        throw ResourceError("dense eigensolve of dimension " + std::to_string(n) + " exceeds the limit " +
                            std::to_string(opts.max_dimension));
    SpectralResult s;
    s.level = L.level;
    s.measure = L.measure;
    if (n == 0) return s;

    Eigen::VectorXd isq = L.measure.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = isq.asDiagonal() * L.form * isq.asDiagonal();
    S = (0.5 * (S + S.transpose())).eval();

    // Constants lie in the kernel of every energy form. When they do here, reflect sqrt(mu) onto the
    // first axis and solve the complement, so lambda_0 is exactly 0 instead of a rounding residue.
    const Eigen::VectorXd q = L.measure.cwiseSqrt() / L.measure.cwiseSqrt().norm();
    const double kmax = std::max(L.form.cwiseAbs().maxCoeff(), 1e-300);
    const bool deflate = n > 1 && (L.form.rowwise().sum()).cwiseAbs().maxCoeff() <= 1e-12 * kmax * double(n);
    Eigen::VectorXd h;
    if (deflate) {
        h = q;
        h(0) += 1.0;   // q(0) > 0, so H q = -e_0 with H = I - 2 h h^T
        h.normalize();
        Eigen::VectorXd Sh = S * h;
        const double hSh = h.dot(Sh);
        S -= 2.0 * (h * Sh.transpose() + Sh * h.transpose());
        S += 4.0 * hSh * (h * h.transpose());
    }
    const Eigen::Index off = deflate ? 1 : 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        S.bottomRightCorner(n - off, n - off), opts.vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
    Eigen::MatrixXd Y;   // eigenvectors of S, columns in eigenvalue order
    if (deflate) {
        // position of the exact zero among the complement's eigenvalues
        Eigen::Index z = 0;
        while (z < n - 1 && es.eigenvalues()(z) < 0.0) ++z;
        s.eigenvalues.resize(n);
        s.eigenvalues << es.eigenvalues().head(z), 0.0, es.eigenvalues().tail(n - 1 - z);
        if (opts.vectors) {
            Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, n);
            Z.bottomRightCorner(n - 1, n - 1) = es.eigenvectors();
            Z -= 2.0 * h * (h.transpose() * Z);
            Y.resize(n, n);
            Y << Z.block(0, 1, n, z), q, Z.rightCols(n - 1 - z);
        }
    } else {
        s.eigenvalues = es.eigenvalues();
        if (opts.vectors) Y = es.eigenvectors();
    }
    for (Eigen::Index i = 0; i < n; ++i)
        if (!std::isfinite(s.eigenvalues(i))) throw NumericalError("non-finite eigenvalue", long(i));
    if (opts.vectors) {
        s.eigenvectors = isq.asDiagonal() * Y;
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::Index arg;
            s.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
            if (s.eigenvectors(arg, j) < 0) s.eigenvectors.col(j) *= -1.0;
        }
    }
    return s;
}

SpectralResult level_spectrum(const LevelGraph& g, const SolveOptions& opts) {
    EnergyWeights w = weights_for(g);
    SpectralResult s = eigensolve(assemble(g, w), opts);
    s.kind = g.kind;
    s.p = g.p;
    s.k = g.k;
    s.r = w.r;
    return s;
}

double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Eigen::VectorXd& measure) {
    return (u.array() * v.array() * measure.array()).sum();
}

double max_residual(const LaplacianMatrix& L, const SpectralResult& s, Eigen::Index count) {
    if (!s.has_vectors()) return 0.0;
    if (count < 0 || count > s.size()) count = s.size();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        Eigen::VectorXd v = s.eigenvectors.col(i);
        Eigen::VectorXd r = L.apply(v) - s.eigenvalues(i) * v;
        double res = std::sqrt(inner(r, r, L.measure)) / std::max(1.0, std::abs(s.eigenvalues(i)));
        worst = std::max(worst, res);
    }
    return worst;
}

std::string format_double(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    std::string shortest(buf, res.ptr);
    // count significant digits of the shortest form
    int digits = 0;
    bool leading = true;
    for (char c : shortest) {
        if (c == 'e' || c == 'E') break;
        if (c < '0' || c > '9') continue;
        if (leading && c == '0') continue;
        leading = false;
        ++digits;
    }
    if (digits <= 15) return shortest;
    res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

std::string spectrum_csv(const SpectralResult& s, Eigen::Index count) {
    std::ostringstream os;
    os << "index,eigenvalue\n";
    if (count < 0 || count > s.size()) count = s.size();
    for (Eigen::Index i = 0; i < count; ++i) os << i << ',' << format_double(s.eigenvalues(i)) << '\n';
    return os.str();
}

std::string eigenvector_csv(const LevelGraph& g, const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "class,points,value\n";
    for (int c = 0; c < g.num_classes(); ++c) {
        os << c << ',';
        const auto& cl = g.classes[size_t(c)];
        for (size_t i = 0; i < cl.size(); ++i) os << (i ? " " : "") << cl[i] << '/' << g.denominator;
        os << ',' << format_double(v(c)) << '\n';
    }
    return os.str();
}

std::string eigenvector_trace_csv(const LevelGraph& g, const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "point,value\n";
    for (size_t i = 0; i < g.points.size(); ++i)
        os << g.points[i] << '/' << g.denominator << ',' << format_double(v(g.point_class[i])) << '\n';
    return os.str();
}

}  // namespace juliaspec
