#include "juliaspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace juliaspec {

int ClusterSet::find(double x, double tol) const {
    // clusters are sorted by value
    auto it = std::lower_bound(clusters.begin(), clusters.end(), x * (1 - tol),
                               [](const MultiplicityCluster& c, double v) { return c.value < v; });
    int hit = -1;
    for (; it != clusters.end() && it->value <= x * (1 + tol); ++it) {
        if (std::abs(it->value - x) > tol * std::abs(x)) continue;
        if (hit >= 0) return -2;
        hit = int(it - clusters.begin());
    }
    return hit;
}

int ClusterSet::nearest(double x) const {
    int best = -1;
    double gap = 0.0;
    for (size_t i = 0; i < clusters.size(); ++i) {
        double d = std::abs(clusters[i].value - x);
        if (best < 0 || d < gap) {
            best = int(i);
            gap = d;
        }
    }
    return best;
}

ClusterSet cluster_multiplicities(const Eigen::VectorXd& ev, double rtol) {
    ClusterSet out;
    out.rtol = rtol;
    out.total = ev.size();
    if (ev.size() == 0) return out;
    const double zero_floor = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    MultiplicityCluster cur;
    cur.value = ev(0);
    cur.first = cur.last = 0;
    for (Eigen::Index i = 1; i <= ev.size(); ++i) {
        bool joins = false;
        if (i < ev.size()) {
            double gap = ev(i) - ev(i - 1);
            double rep = std::abs(cur.value);
            joins = gap <= rtol * rep;
            if (!joins && gap <= 10 * rtol * rep) out.near_misses.push_back({i - 1, gap / rep});
        }
        if (joins) {
            cur.last = i;
            continue;
        }
        cur.multiplicity = int(cur.last - cur.first + 1);
        cur.zero = std::abs(cur.value) <= zero_floor;
        out.clusters.push_back(cur);
        if (i < ev.size()) {
            cur = MultiplicityCluster{};
            cur.value = ev(i);
            cur.first = cur.last = i;
        }
    }
    return out;
}

double family_scale(int p, int k) { return std::pow(double(p), double(k + 1) / k); }

namespace {

void tag_against(ClusterSet& cur, const ClusterSet& below, double scale, double rtol) {
    for (auto& c : cur.clusters) {
        c.order = 0;
        c.parent = -1;
        if (c.zero) continue;
        int hit = below.find(c.value / scale, rtol);
        if (hit == -2) {
            c.order = kUnclassified;
        } else if (hit >= 0) {
            const auto& par = below.clusters[size_t(hit)];
            if (par.zero) continue;
            c.parent = hit;
            c.order = par.order == kUnclassified ? kUnclassified : par.order + 1;
        }
    }
}

}  // namespace

void classify_orders(std::vector<ClusterSet>& levels, double scale, double rtol) {
    for (size_t L = 0; L < levels.size(); ++L) {
        if (L == 0) {
            for (auto& c : levels[0].clusters) {
                c.order = 0;
                c.parent = -1;
            }
            continue;
        }
        tag_against(levels[L], levels[L - 1], scale, rtol);
    }
}

ClusterSet classify_orders(const ClusterSet& clusters, double scale, double rtol) {
    // parents have smaller values, so ascending order sees them first
    ClusterSet out = clusters;
    for (auto& c : out.clusters) {
        c.order = 0;
        c.parent = -1;
        if (c.zero) continue;
        int hit = out.find(c.value / scale, rtol);
        if (hit == -2) {
            c.order = kUnclassified;
        } else if (hit >= 0 && !out.clusters[size_t(hit)].zero) {
            const auto& par = out.clusters[size_t(hit)];
            c.parent = hit;
            c.order = par.order == kUnclassified ? kUnclassified : par.order + 1;
        }
    }
    return out;
}

SpectralTower build_tower(GraphKind kind, int p, int k, int m, double rtol, TowerVectors vectors) {
    SpectralTower t;
    t.rtol = rtol;
    std::vector<ClusterSet> sets;
    for (int level = 1; level <= m; ++level) {
        LevelData d;
        d.graph = level == 1 ? (kind == GraphKind::family ? build_family_graph(p, k, 1) : build_mating_graph(1))
                             : subdivide(t.levels.back().graph);
        SolveOptions opts;
        opts.vectors = vectors == TowerVectors::all || (vectors == TowerVectors::top && level == m);
        d.spectrum = level_spectrum(d.graph, opts);
        d.clusters = cluster_multiplicities(d.spectrum.eigenvalues, rtol);
        sets.push_back(d.clusters);
        t.levels.push_back(std::move(d));
    }
    t.scale = eigenvalue_scale(t.levels.front().graph);
    classify_orders(sets, t.scale, rtol);
    for (size_t i = 0; i < sets.size(); ++i) t.levels[i].clusters = std::move(sets[i]);
    return t;
}

Eigen::Index counting_function(const Eigen::VectorXd& ev, double t) {
    return Eigen::Index(std::upper_bound(ev.data(), ev.data() + ev.size(), t) - ev.data());
}

std::vector<WeylSample> weyl_ratio(const Eigen::VectorXd& ev, double alpha, int samples) {
    std::vector<WeylSample> out;
    if (ev.size() < 2 || samples < 2) return out;
    const double a = std::log(ev(1)), b = std::log(ev(ev.size() - 1));
    for (int i = 0; i < samples; ++i) {
        double t = std::exp(a + (b - a) * i / (samples - 1));
        if (i == samples - 1) t = ev(ev.size() - 1);
        WeylSample s;
        s.t = t;
        s.count = counting_function(ev, t);
        s.ratio = double(s.count) / std::pow(t, alpha);
        out.push_back(s);
    }
    return out;
}

WeylFit weyl_exponent(const Eigen::VectorXd& ev, int samples) {
    WeylFit f;
    if (ev.size() < 3) return f;
    const double a = std::log(ev(1)), b = std::log(ev(ev.size() - 1));
    const double lo = a + 0.25 * (b - a), hi = a + 0.75 * (b - a);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < samples; ++i) {
        double x = lo + (hi - lo) * i / (samples - 1);
        double y = std::log(double(counting_function(ev, std::exp(x))));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = samples;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.t_low = std::exp(lo);
    f.t_high = std::exp(hi);
    f.samples = samples;
    return f;
}

nlohmann::json ConjectureReport::to_json() const {
    nlohmann::json j;
    j["statement"] = statement;
    j["pass"] = pass;
    j["summary"] = summary;
    j["tolerances"] = tolerances;
    if (!extra.empty()) j["details"] = extra;
    auto arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json x;
        x["value"] = e.value;
        x["index"] = e.index;
        x["multiplicity"] = e.multiplicity;
        x["order"] = e.order;
        x["expected"] = e.expected;
        x["observed"] = e.observed;
        x["status"] = e.status;
        if (!e.note.empty()) x["note"] = e.note;
        arr.push_back(std::move(x));
    }
    j["entries"] = std::move(arr);
    return j;
}

std::string ConjectureReport::table() const {
    std::ostringstream os;
    os << statement << ": " << (pass ? "PASS" : "FAIL") << "  " << summary << '\n';
    os << std::setw(18) << "value" << std::setw(8) << "index" << std::setw(6) << "mult" << std::setw(7) << "order"
       << std::setw(10) << "expected" << std::setw(10) << "observed" << "  status\n";
    for (const auto& e : entries) {
        os << std::setw(18) << format_double(e.value) << std::setw(8) << e.index << std::setw(6) << e.multiplicity
           << std::setw(7) << e.order << std::setw(10) << e.expected << std::setw(10) << e.observed << "  "
           << e.status;
        if (!e.note.empty()) os << " (" << e.note << ")";
        os << '\n';
    }
    return os.str();
}

int ConjectureReport::count(const std::string& status) const {
    return int(std::count_if(entries.begin(), entries.end(), [&](const ReportEntry& e) { return e.status == status; }));
}

long conjectured_multiplicity(int k, int order) {
    long m = 2;
    for (int j = 1; j <= order; ++j) m = (j % k) ? 3 * (m - 1) + 1 : 3 * (m - 2) + 2;
    return m;
}

ConjectureReport check_multiplicity_conjecture(const ClusterSet& cs, int k, double reliable_fraction) {
    ConjectureReport rep;
    rep.statement = "multiplicity recursion";
    rep.tolerances["cluster_rtol"] = cs.rtol;
    rep.tolerances["reliable_fraction"] = reliable_fraction;
    const double cutoff = reliable_fraction * double(cs.total);
    std::map<int, std::map<int, int>> by_order;
    for (const auto& c : cs.clusters) {
        if (c.zero) continue;
        if (double(c.last) >= cutoff) break;
        ReportEntry e;
        e.value = c.value;
        e.index = c.last;
        e.multiplicity = c.multiplicity;
        e.order = c.order;
        e.observed = c.multiplicity;
        if (c.order == kUnclassified) {
            e.status = "unclassified";
        } else {
            e.expected = conjectured_multiplicity(k, c.order);
            if (c.multiplicity % 2) {
                e.status = "odd";
            } else if (c.multiplicity == e.expected) {
                e.status = "match";
            } else if (c.multiplicity > e.expected) {
                e.status = "excess";
                e.note = "possible coincidence";
            } else {
                e.status = "deficit";
            }
            ++by_order[c.order][c.multiplicity];
        }
        rep.entries.push_back(e);
    }
    for (const auto& nm : cs.near_misses)
        if (double(nm.index) < cutoff) rep.extra["near_misses"].push_back({{"index", nm.index}, {"relative_gap", nm.relative_gap}});
    for (auto& [order, hist] : by_order)
        for (auto [mult, count] : hist) rep.extra["histogram"][std::to_string(order)][std::to_string(mult)] = count;
    rep.pass = !rep.entries.empty() && rep.count("odd") == 0 && rep.count("deficit") == 0 &&
               rep.count("unclassified") == 0;
    std::ostringstream s;
    s << rep.entries.size() << " clusters below index " << long(cutoff) << ": " << rep.count("match")
      << " match, " << rep.count("excess") << " excess, " << rep.count("deficit") << " deficit, "
      << rep.count("odd") << " odd, " << rep.count("unclassified") << " unclassified";
    rep.summary = s.str();
    return rep;
}

ConjectureReport check_counting_identity(const SpectralTower& tower, int p, int j_max, int primitives, double rtol) {
    ConjectureReport rep;
    rep.statement = "counting identity";
    rep.tolerances["locate_rtol"] = rtol;
    rep.tolerances["counterpart_rtol"] = 0.01;
    const LevelData& top = tower.top();
    const int m = top.graph.level;
    int used = 0;
    for (const auto& c : top.clusters.clusters) {
        if (used >= primitives) break;
        if (c.zero || c.order != 0) continue;
        ++used;
        for (int j = 0; j <= j_max; ++j) {
            ReportEntry e;
            e.value = c.value;
            e.index = c.last;
            e.multiplicity = c.multiplicity;
            e.order = j;
            e.expected = long(c.last) * long(ipow(p, j));
            if (m - j < 1) {
                e.status = "missing";
                e.note = "level too shallow";
                rep.entries.push_back(e);
                continue;
            }
            const ClusterSet& low = tower.at(m - j).clusters;
            int near = low.nearest(c.value);
            if (near < 0 || std::abs(low.clusters[size_t(near)].value - c.value) > 0.01 * c.value) {
                e.status = "missing";
                e.note = "no counterpart at level " + std::to_string(m - j);
                rep.entries.push_back(e);
                continue;
            }
            double target = std::pow(tower.scale, j) * low.clusters[size_t(near)].value;
            int hit = top.clusters.find(target, rtol);
            if (hit < 0) {
                e.status = "missing";
                e.note = "no cluster near " + format_double(target);
            } else {
                e.observed = long(top.clusters.clusters[size_t(hit)].last);
                e.status = e.observed == e.expected ? "match" : "mismatch";
            }
            rep.entries.push_back(e);
        }
    }
    rep.pass = used == primitives && rep.count("match") == int(rep.entries.size());
    rep.summary = std::to_string(rep.count("match")) + "/" + std::to_string(rep.entries.size()) +
                  " identities hold for " + std::to_string(used) + " primitive clusters";
    return rep;
}

std::vector<GapRow> spectral_gaps(const Eigen::VectorXd& ev, int p) {
    std::vector<GapRow> rows;
    for (int n = 1; ipow(p, n) < ev.size(); ++n) {
        GapRow r;
        r.n = n;
        r.index = ipow(p, n);
        r.below = ev(r.index - 1);
        r.above = ev(r.index);
        r.ratio_up = r.above / r.below;
        r.ratio_down = r.below / r.above;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace juliaspec
