#include "juliaspec/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <Eigen/Eigenvalues>

#include "juliaspec/energy.hpp"
#include "juliaspec/errors.hpp"

namespace juliaspec {

namespace {

SymmetryAction point_map_action(const LevelGraph& g, const std::function<i64(i64)>& f, const std::string& name) {
    SymmetryAction a;
    a.name = name;
    a.perm.assign(size_t(g.num_classes()), -1);
    for (size_t i = 0; i < g.points.size(); ++i) {
        i64 y = f(g.points[i]);
        if (!g.has_point(y)) throw ConstructionError(name + " does not map level points to level points");
        int c = g.point_class[i], d = g.class_of(y);
        if (a.perm[size_t(c)] >= 0 && a.perm[size_t(c)] != d)
            throw ConstructionError(name + " does not respect identifications");
        a.perm[size_t(c)] = d;
    }
    return a;
}

size_t child_start(const LevelGraph& g_prev, const LevelGraph& g_next, size_t edge) {
    return size_t(g_next.index_of[size_t(g_prev.points[edge] * g_prev.p)]);
}

// Level-1 maps for the family: blocks of loops between consecutive type-0
// edges; block b goes to block 2f - b and loop order is kept.
EdgeMap family_block_reflection(const LevelGraph& g, int f) {
    std::vector<int> z;
    for (size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].type == 0) z.push_back(int(i));
    const int p = g.p, n = int(g.edges.size());
    if (int(z.size()) != p) throw ConstructionError("level one should have p type-0 edges");
    EdgeMap m;
    m.target.assign(size_t(n), {-1, false});
    for (int b = 0; b < p; ++b) {
        int img = ((2 * f - b) % p + p) % p;
        for (int q = 1; q < g.k; ++q) m.target[size_t((z[size_t(b)] + q) % n)] = {(z[size_t(img)] + q) % n, false};
        m.target[size_t(z[size_t(b)])] = {z[size_t((img + 1) % p)], true};
    }
    return m;
}

EdgeMap mating_base(const LevelGraph& g, bool horizontal) {
    if (g.level != 1 || g.points != std::vector<i64>{1, 2, 4, 8, 9, 11})
        throw ConstructionError("unexpected level-one mating graph");
    EdgeMap m;
    if (horizontal)
        m.target = {{0, true}, {4, false}, {5, false}, {3, true}, {1, false}, {2, false}};
    else
        m.target = {{3, true}, {1, false}, {2, false}, {0, true}, {4, false}, {5, false}};
    return m;
}

std::vector<LevelGraph> levels_up_to(const LevelGraph& g) {
    std::vector<LevelGraph> gs;
    gs.push_back(g.kind == GraphKind::family ? build_family_graph(g.p, g.k, 1) : build_mating_graph(1));
    while (gs.back().level < g.level) gs.push_back(subdivide(gs.back()));
    return gs;
}

SymmetryAction lift(EdgeMap base, const std::vector<LevelGraph>& gs, const std::string& name) {
    for (size_t i = 1; i < gs.size(); ++i) base = propagate(base, gs[i - 1], gs[i]);
    SymmetryAction a = class_permutation(base, gs.back(), name);
    if (!is_automorphism(gs.back(), a)) throw ConstructionError(name + " is not a graph automorphism");
    return a;
}

}  // namespace

Eigen::VectorXd SymmetryAction::act(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(u.size());
    for (size_t c = 0; c < perm.size(); ++c) out(Eigen::Index(c)) = u(perm[c]);
    return out;
}

SymmetryAction identity_action(const LevelGraph& g) {
    SymmetryAction a;
    a.name = "identity";
    a.perm.resize(size_t(g.num_classes()));
    for (size_t c = 0; c < a.perm.size(); ++c) a.perm[c] = int(c);
    return a;
}

SymmetryAction compose(const SymmetryAction& a, const SymmetryAction& b) {
    SymmetryAction c;
    c.name = a.name + "*" + b.name;
    c.perm.resize(b.perm.size());
    for (size_t i = 0; i < b.perm.size(); ++i) c.perm[i] = a.perm[size_t(b.perm[i])];
    return c;
}

SymmetryAction translation_action(const LevelGraph& g, const Rational& shift, const std::string& name) {
    if ((g.denominator * shift.num) % shift.den != 0) throw std::invalid_argument("shift not on the level grid");
    const i64 s = ((g.denominator * shift.num / shift.den) % g.denominator + g.denominator) % g.denominator;
    SymmetryAction a = point_map_action(g, [&](i64 x) { return (x + s) % g.denominator; }, name);
    if (!is_automorphism(g, a)) throw ConstructionError(name + " is not a graph automorphism");
    return a;
}

SymmetryAction rotation_action(const LevelGraph& g) {
    return translation_action(g, Rational(1, g.p), "rotation 1/" + std::to_string(g.p));
}

EdgeMap propagate(const EdgeMap& map, const LevelGraph& g_prev, const LevelGraph& g_next) {
    EdgeMap out;
    out.target.assign(g_next.edges.size(), {-1, false});
    const size_t n = g_next.edges.size();
    const int p = g_prev.p, k = g_prev.k;
    for (size_t i = 0; i < g_prev.edges.size(); ++i) {
        auto [t, rev] = map.target[i];
        auto kids = subdivision_children(g_prev.kind, p, k, g_prev.edges[i].type);
        auto kt = subdivision_children(g_prev.kind, p, k, g_prev.edges[size_t(t)].type);
        if (kids.size() != kt.size()) throw ConstructionError("edge map pairs edges of different types");
        size_t a = child_start(g_prev, g_next, i), b = child_start(g_prev, g_next, size_t(t));
        if (kids.size() == 1) {
            out.target[a] = {int(b), rev};
            continue;
        }
        for (size_t c = 0; c < kids.size(); ++c) {
            size_t img;
            bool r;
            if (!rev) {
                img = c;
                r = false;
            } else if (c % size_t(k) == 0) {
                img = (size_t(p) - 1 - c / size_t(k)) * size_t(k);
                r = true;
            } else {
                img = (size_t(p) - 2 - c / size_t(k)) * size_t(k) + c % size_t(k);
                r = false;
            }
            out.target[(a + c) % n] = {int((b + img) % n), r};
        }
    }
    for (auto& t : out.target)
        if (t.first < 0) throw ConstructionError("edge map does not cover the next level");
    return out;
}

SymmetryAction class_permutation(const EdgeMap& map, const LevelGraph& g, const std::string& name) {
    SymmetryAction a;
    a.name = name;
    a.perm.assign(size_t(g.num_classes()), -1);
    auto set = [&](int c, int d) {
        if (a.perm[size_t(c)] >= 0 && a.perm[size_t(c)] != d)
            throw ConstructionError(name + ": edge map sends one class to two classes");
        a.perm[size_t(c)] = d;
    };
    for (size_t i = 0; i < g.edges.size(); ++i) {
        auto [t, rev] = map.target[i];
        const Edge &e = g.edges[i], &f = g.edges[size_t(t)];
        if (e.type != f.type) throw ConstructionError(name + ": edge map changes an edge type");
        set(e.left, rev ? f.right : f.left);
        set(e.right, rev ? f.left : f.right);
    }
    std::vector<int> sorted = a.perm;
    std::sort(sorted.begin(), sorted.end());
    for (size_t c = 0; c < sorted.size(); ++c)
        if (sorted[c] != int(c)) throw ConstructionError(name + " is not a permutation of classes");
    return a;
}

std::vector<SymmetryAction> reflection_actions(const LevelGraph& g) {
    std::vector<SymmetryAction> out;
    if (g.kind == GraphKind::mating) {
        auto gs = levels_up_to(g);
        out.push_back(lift(mating_base(gs[0], true), gs, "rho_H"));
        out.push_back(lift(mating_base(gs[0], false), gs, "rho_V"));
        return out;
    }
    if (g.k == 2 && g.p == 3) {
        // reflections in the diameters through 1/4, 1/12 and 5/12
        const std::vector<std::pair<Rational, std::string>> axes = {
            {Rational(1, 2), "reflection 1/4-3/4"}, {Rational(1, 6), "reflection 1/12-7/12"},
            {Rational(5, 6), "reflection 5/12-11/12"}};
        for (const auto& [c, name] : axes) {
            const i64 s = g.denominator * c.num / c.den;
            auto a = point_map_action(g, [&](i64 x) { return ((s - x) % g.denominator + g.denominator) % g.denominator; },
                                      name);
            if (!is_automorphism(g, a)) throw ConstructionError(name + " is not a graph automorphism");
            out.push_back(std::move(a));
        }
        return out;
    }
    auto gs = levels_up_to(g);
    for (int f = 0; f < g.p; ++f)
        out.push_back(lift(family_block_reflection(gs[0], f), gs, "reflection fixing block " + std::to_string(f)));
    return out;
}

bool is_automorphism(const LevelGraph& g, const SymmetryAction& a) {
    if (a.perm.size() != size_t(g.num_classes())) return false;
    std::vector<char> hit(a.perm.size(), 0);
    for (int d : a.perm) {
        if (d < 0 || d >= g.num_classes() || hit[size_t(d)]) return false;
        hit[size_t(d)] = 1;
    }
    for (int c = 0; c < g.num_classes(); ++c)
        if (g.classes[size_t(c)].size() != g.classes[size_t(a.perm[size_t(c)])].size()) return false;
    using Key = std::tuple<int, int, int, i64>;
    auto key = [](int x, int y, const Edge& e) { return Key{std::min(x, y), std::max(x, y), e.type, e.len_num}; };
    std::map<Key, int> before, after;
    for (const Edge& e : g.edges) {
        ++before[key(e.left, e.right, e)];
        ++after[key(a.perm[size_t(e.left)], a.perm[size_t(e.right)], e)];
    }
    return before == after;
}

double commutator_error(const LaplacianMatrix& L, const SymmetryAction& a) {
    const Eigen::MatrixXd O = L.operator_matrix();
    const Eigen::Index n = O.rows();
    std::vector<int> inv(static_cast<size_t>(n));
    for (size_t c = 0; c < a.perm.size(); ++c) inv[size_t(a.perm[c])] = int(c);
    double worst = 0.0;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index d = 0; d < n; ++d)
            worst = std::max(worst, std::abs(O(a.perm[size_t(c)], d) - O(c, inv[size_t(d)])));
    return worst / O.cwiseAbs().maxCoeff();
}

std::vector<SymmetryAction> dihedral_group(const SymmetryAction& R, const SymmetryAction& S) {
    SymmetryAction e;
    e.name = "identity";
    e.perm.resize(R.perm.size());
    for (size_t i = 0; i < e.perm.size(); ++i) e.perm[i] = int(i);
    auto R2 = compose(R, R);
    return {e, R, R2, S, compose(S, R), compose(S, R2)};
}

namespace {

Eigen::MatrixXd projected_gram(const Eigen::MatrixXd& B, const Eigen::VectorXd& mu,
                               const std::vector<SymmetryAction>& group, const std::vector<double>& chi, int d) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(B.cols(), B.cols());
    Eigen::MatrixXd MB = mu.asDiagonal() * B;
    for (size_t g = 0; g < group.size(); ++g) {
        if (chi[g] == 0.0) continue;
        Eigen::MatrixXd PB(B.rows(), B.cols());
        for (Eigen::Index c = 0; c < B.rows(); ++c) PB.row(c) = B.row(group[g].perm[size_t(c)]);
        T += chi[g] * (MB.transpose() * PB);
    }
    T *= double(d) / double(group.size());
    return 0.5 * (T + T.transpose());
}

}  // namespace

double isotypic_dimension(const Eigen::MatrixXd& B, const Eigen::VectorXd& mu, const std::vector<SymmetryAction>& group,
                          const std::vector<double>& chi, int d) {
    return projected_gram(B, mu, group, chi, d).trace();
}

Eigen::MatrixXd isotypic_basis(const Eigen::MatrixXd& B, const Eigen::VectorXd& mu,
                               const std::vector<SymmetryAction>& group, const std::vector<double>& chi, int d,
                               double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected_gram(B, mu, group, chi, d));
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1 - tol) keep.push_back(i);
    // Apply the exact projector to the selected combinations: span(B) may carry a small admixture
    // of a nearby cluster, and the projector removes whatever lies outside the isotypic part.
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(B.rows(), Eigen::Index(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) {
        Eigen::VectorXd x = B * es.eigenvectors().col(keep[j]);
        auto col = out.col(Eigen::Index(j));
        for (size_t g = 0; g < group.size(); ++g) {
            if (chi[g] == 0.0) continue;
            for (Eigen::Index c = 0; c < B.rows(); ++c) col(c) += chi[g] * x(group[g].perm[size_t(c)]);
        }
        col *= double(d) / double(group.size());
        for (Eigen::Index i = 0; i < Eigen::Index(j); ++i) col -= inner(out.col(i), col, mu) * out.col(i);
        col /= std::sqrt(inner(col, col, mu));
    }
    return out;
}

IrrepDecomposition irrep_decompose(const Eigen::MatrixXd& B, const Eigen::VectorXd& mu,
                                   const std::vector<SymmetryAction>& d3) {
    const double t = isotypic_dimension(B, mu, d3, {1, 1, 1, 1, 1, 1}, 1);
    const double a = isotypic_dimension(B, mu, d3, {1, 1, 1, -1, -1, -1}, 1);
    const double s = isotypic_dimension(B, mu, d3, {2, -1, -1, 0, 0, 0}, 2);
    IrrepDecomposition r;
    r.trivial = int(std::lround(t));
    r.alternating = int(std::lround(a));
    r.standard = int(std::lround(s));
    r.rounding = std::max({std::abs(t - r.trivial), std::abs(a - r.alternating), std::abs(s - r.standard)});
    return r;
}

FactorizationReport check_rotation_factorization(const Eigen::MatrixXd& B, double lambda, const LevelGraph& g,
                                                 const LevelGraph& g_prev, const LaplacianMatrix& L_prev,
                                                 const std::vector<SymmetryAction>& d3, double scale, double tol) {
    FactorizationReport rep;
    const Eigen::VectorXd mu = class_measure(g);
    std::vector<SymmetryAction> rot = {d3[0], d3[1], d3[2]};
    Eigen::MatrixXd inv = isotypic_basis(B, mu, rot, {1, 1, 1}, 1, tol);
    rep.invariant_dimension = int(inv.cols());
    auto ir = irrep_decompose(B, mu, d3);
    rep.one_dimensional_content = ir.trivial + ir.alternating;
    auto to = level_map(g_prev, g);
    for (Eigen::Index j = 0; j < inv.cols(); ++j) {
        Eigen::VectorXd v = inv.col(j);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(g_prev.num_classes());
        std::vector<char> seen(size_t(g_prev.num_classes()), 0);
        for (size_t c = 0; c < to.size(); ++c)
            if (!seen[size_t(to[c])]) {
                w(to[c]) = v(Eigen::Index(c));
                seen[size_t(to[c])] = 1;
            }
        const double vmax = v.cwiseAbs().maxCoeff();
        for (size_t c = 0; c < to.size(); ++c)
            rep.fibre_violation = std::max(rep.fibre_violation, std::abs(v(Eigen::Index(c)) - w(to[c])) / vmax);
        const double target = lambda / scale;
        Eigen::VectorXd r = L_prev.apply(w) - target * w;
        double res = std::sqrt(inner(r, r, L_prev.measure) / inner(w, w, L_prev.measure)) / std::max(target, 1.0);
        rep.pullback_residual = std::max(rep.pullback_residual, res);
    }
    rep.pass = rep.invariant_dimension == rep.one_dimensional_content && rep.fibre_violation <= tol &&
               rep.pullback_residual <= tol && ir.rounding <= tol;
    return rep;
}

namespace {

Eigen::MatrixXd cluster_basis(const SpectralResult& s, const MultiplicityCluster& c) {
    return s.eigenvectors.middleCols(c.first, c.multiplicity);
}

bool inside(i64 x, i64 D, const std::vector<Interval>& regions) {
    for (const auto& iv : regions) {
        Rational t(x, D);
        if (iv.lo <= t && t <= iv.hi) return true;
    }
    return false;
}

SupportReport scan(const LevelGraph& g, const Eigen::VectorXd& v, const std::vector<Interval>& regions) {
    SupportReport r;
    for (size_t i = 0; i < g.points.size(); ++i) {
        double a = std::abs(v(g.point_class[i]));
        r.overall_max = std::max(r.overall_max, a);
        if (inside(g.points[i], g.denominator, regions))
            r.region_max = std::max(r.region_max, a);
        else
            r.outside_max = std::max(r.outside_max, a);
    }
    return r;
}

}  // namespace

SupportReport check_support(const LevelGraph& g, const Eigen::VectorXd& v, const std::vector<Interval>& regions,
                            double tol) {
    SupportReport r = scan(g, v, regions);
    r.ratio = r.overall_max > 0 ? r.outside_max / r.overall_max : 0.0;
    r.pass = r.ratio <= tol;
    return r;
}

SupportReport check_vanishes_on(const LevelGraph& g, const Eigen::VectorXd& v, const std::vector<Interval>& regions,
                                double tol) {
    SupportReport r = scan(g, v, regions);
    r.ratio = r.overall_max > 0 ? r.region_max / r.overall_max : 0.0;
    r.pass = r.ratio <= tol;
    return r;
}

std::vector<Interval> vertical_support_region() {
    return {{Rational(11, 112), Rational(15, 112)}, {Rational(67, 112), Rational(71, 112)}};
}

std::vector<Interval> horizontal_zero_region() {
    return {{Rational(9, 112), Rational(15, 112)}, {Rational(65, 112), Rational(71, 112)}};
}

ConjectureReport check_family_symmetry(const SpectralTower& tower, double reliable_fraction, double tol) {
    ConjectureReport rep;
    rep.statement = "dihedral symmetry";
    rep.tolerances["commutator_rtol"] = 1e-10;
    rep.tolerances["projection_tol"] = tol;
    rep.tolerances["reliable_fraction"] = reliable_fraction;
    const LevelData& top = tower.top();
    if (!top.spectrum.has_vectors()) throw std::invalid_argument("symmetry check needs eigenvectors");
    const LevelGraph& g = top.graph;
    if (g.kind != GraphKind::family || g.p != 3 || g.level < 2)
        throw std::invalid_argument("dihedral symmetry check needs a p = 3 family tower of level >= 2");
    const LevelGraph& gp = tower.at(g.level - 1).graph;
    const LaplacianMatrix L = assemble(g, weights_for(g));
    const LaplacianMatrix Lp = assemble(gp, weights_for(gp));
    auto R = rotation_action(g);
    auto refl = reflection_actions(g);
    double comm = commutator_error(L, R);
    rep.extra["commutator"][R.name] = comm;
    for (const auto& a : refl) {
        double e = commutator_error(L, a);
        rep.extra["commutator"][a.name] = e;
        comm = std::max(comm, e);
    }
    auto G = dihedral_group(R, refl.front());
    const double cutoff = reliable_fraction * double(top.clusters.total);
    for (const auto& c : top.clusters.clusters) {
        if (double(c.last) >= cutoff) break;
        Eigen::MatrixXd B = cluster_basis(top.spectrum, c);
        auto d = irrep_decompose(B, top.spectrum.measure, G);
        ReportEntry e;
        e.value = c.value;
        e.index = c.last;
        e.multiplicity = c.multiplicity;
        e.order = c.order;
        e.expected = c.multiplicity;
        e.observed = d.total();
        e.note = "trivial " + std::to_string(d.trivial) + ", alternating " + std::to_string(d.alternating) +
                 ", standard " + std::to_string(d.standard);
        bool ok = d.total() == c.multiplicity && d.rounding <= tol;
        if (!c.zero && c.order == 0 && d.trivial + d.alternating != 0) {
            ok = false;
            e.note += "; primitive with one-dimensional content";
        }
        if (!c.zero) {
            auto f = check_rotation_factorization(B, c.value, g, gp, Lp, G, tower.scale, tol);
            if (!f.pass) {
                ok = false;
                e.note += "; rotation-invariant part does not factor (residual " + format_double(f.pullback_residual) + ")";
            }
        }
        e.status = ok ? "match" : "mismatch";
        rep.entries.push_back(e);
    }
    rep.pass = comm <= 1e-10 && !rep.entries.empty() && rep.count("match") == int(rep.entries.size());
    rep.summary = std::to_string(rep.count("match")) + "/" + std::to_string(rep.entries.size()) +
                  " clusters consistent; max relative commutator " + format_double(comm);
    return rep;
}

long mating_multiplicity(int j) {
    if (j <= 0) return 1;
    long b = 2;
    for (int i = 2; i <= j; ++i) b = (i % 2) ? 2 * b : 2 * b + i / 2;
    return b;
}

std::vector<SymmetryAction> mating_group(const LevelGraph& g) {
    auto hv = reflection_actions(g);
    return {identity_action(g), hv[0], hv[1], compose(hv[0], hv[1])};
}

SectorDims mating_sectors(const Eigen::MatrixXd& B, const Eigen::VectorXd& mu, const std::vector<SymmetryAction>& G) {
    SectorDims s;
    auto dim = [&](double sh, double sv) {
        return int(std::lround(isotypic_dimension(B, mu, G, {1, sh, sv, sh * sv}, 1)));
    };
    s.horizontal = dim(-1, 1);
    s.vertical = dim(1, -1);
    s.even = dim(1, 1);
    s.odd = dim(-1, -1);
    return s;
}

ConjectureReport check_mating_multiplicities(const SpectralTower& tower, double reliable_fraction) {
    ConjectureReport rep;
    rep.statement = "mating multiplicities";
    rep.tolerances["cluster_rtol"] = tower.rtol;
    rep.tolerances["reliable_fraction"] = reliable_fraction;
    const int m = tower.top().graph.level;
    std::map<std::pair<int, int>, SectorDims> memo;
    std::map<int, std::vector<SymmetryAction>> groups;
    auto sectors = [&](int level, int ci) {
        auto key = std::make_pair(level, ci);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        const LevelData& d = tower.at(level);
        if (!d.spectrum.has_vectors()) throw std::invalid_argument("mating multiplicity check needs eigenvectors");
        if (!groups.count(level)) groups[level] = mating_group(d.graph);
        SectorDims s = mating_sectors(cluster_basis(d.spectrum, d.clusters.clusters[size_t(ci)]), d.spectrum.measure,
                                      groups[level]);
        memo[key] = s;
        return s;
    };
    const auto& top = tower.top();
    const double cutoff = reliable_fraction * double(top.clusters.total);
    long first_five = -1;
    double five_value = 0.0;
    for (size_t ci = 0; ci < top.clusters.clusters.size(); ++ci) {
        const auto& c = top.clusters.clusters[ci];
        if (c.zero) continue;
        if (double(c.last) >= cutoff) break;
        if (c.multiplicity == 5 && first_five < 0) {
            first_five = long(c.first);
            five_value = c.value;
        }
        ReportEntry e;
        e.value = c.value;
        e.index = c.last;
        e.multiplicity = c.multiplicity;
        e.order = c.order;
        e.observed = c.multiplicity;
        if (c.order == kUnclassified) {
            e.status = "unclassified";
            rep.entries.push_back(e);
            continue;
        }
        int level = m, idx = int(ci);
        while (tower.at(level).clusters.clusters[size_t(idx)].order > 0) {
            idx = tower.at(level).clusters.clusters[size_t(idx)].parent;
            --level;
        }
        SectorDims s = sectors(level, idx);
        if (s.even || s.odd) {
            e.status = "unclassified";
            e.note = "ancestor outside the horizontal and vertical sectors";
        } else {
            e.expected = s.vertical * mating_multiplicity(c.order) + s.horizontal;
            e.note = s.vertical ? (s.horizontal ? "mixed ancestor" : "vertical lineage") : "horizontal lineage";
            e.status = c.multiplicity == e.expected ? "match" : (c.multiplicity > e.expected ? "excess" : "deficit");
            if (e.status == "excess") e.note += ", possible coincidence";
        }
        rep.entries.push_back(e);
    }
    rep.extra["first_multiplicity_five_index"] = first_five;
    rep.extra["first_multiplicity_five_value"] = five_value;
    rep.pass = first_five >= 0 && rep.count("deficit") == 0 && rep.count("unclassified") == 0;
    rep.summary = std::to_string(rep.entries.size()) + " clusters: " + std::to_string(rep.count("match")) +
                  " match, " + std::to_string(rep.count("excess")) + " excess, " +
                  std::to_string(rep.count("deficit")) + " deficit; multiplicity 5 at index " +
                  std::to_string(first_five);
    return rep;
}

ConjectureReport check_mating_supports(const SpectralTower& tower, double tol, double reliable_fraction) {
    ConjectureReport rep;
    rep.statement = "mating supports";
    rep.tolerances["support_tol"] = tol;
    rep.tolerances["reliable_fraction"] = reliable_fraction;
    const auto& top = tower.top();
    if (!top.spectrum.has_vectors()) throw std::invalid_argument("support check needs eigenvectors");
    auto G = mating_group(top.graph);
    const double cutoff = reliable_fraction * double(top.clusters.total);
    int vertical = 0, horizontal = 0;
    for (const auto& c : top.clusters.clusters) {
        if (c.zero || c.order != 0) continue;
        if (double(c.last) >= cutoff) break;
        Eigen::MatrixXd B = cluster_basis(top.spectrum, c);
        Eigen::MatrixXd V = isotypic_basis(B, top.spectrum.measure, G, {1, 1, -1, -1}, 1);
        Eigen::MatrixXd H = isotypic_basis(B, top.spectrum.measure, G, {1, -1, 1, -1}, 1);
        for (Eigen::Index j = 0; j < V.cols(); ++j) {
            auto s = check_support(top.graph, V.col(j), vertical_support_region(), tol);
            ReportEntry e;
            e.value = c.value;
            e.index = c.last;
            e.multiplicity = c.multiplicity;
            e.status = s.pass ? "match" : "outside support";
            e.note = "vertical, relative max outside " + format_double(s.ratio);
            rep.entries.push_back(e);
            ++vertical;
        }
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            auto s = check_vanishes_on(top.graph, H.col(j), horizontal_zero_region(), tol);
            ReportEntry e;
            e.value = c.value;
            e.index = c.last;
            e.multiplicity = c.multiplicity;
            e.status = s.pass ? "match" : "nonzero on region";
            e.note = "horizontal, relative max on region " + format_double(s.ratio);
            rep.entries.push_back(e);
            ++horizontal;
        }
        if (V.cols() + H.cols() != c.multiplicity) {
            ReportEntry e;
            e.value = c.value;
            e.index = c.last;
            e.multiplicity = c.multiplicity;
            e.status = "unclassified";
            e.note = "primitive cluster not spanned by horizontal and vertical vectors";
            rep.entries.push_back(e);
        }
    }
    rep.extra["vertical"] = vertical;
    rep.extra["horizontal"] = horizontal;
    rep.pass = vertical > 0 && horizontal > 0 && rep.count("match") == int(rep.entries.size());
    rep.summary = std::to_string(vertical) + " vertical and " + std::to_string(horizontal) +
                  " horizontal primitive eigenfunctions; " + std::to_string(rep.count("match")) + "/" +
                  std::to_string(rep.entries.size()) + " pass";
    return rep;
}

}  // namespace juliaspec
