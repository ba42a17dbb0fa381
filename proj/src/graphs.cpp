#include "juliaspec/graphs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "juliaspec/errors.hpp"

namespace juliaspec {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

void check_budget(i64 points, i64 denominator, const GraphLimits& limits) {
    if (points > limits.max_points)
        throw ResourceError("level needs " + std::to_string(points) + " circle points; budget is " +
                            std::to_string(limits.max_points));
    if (denominator > (i64(1) << 40)) throw ResourceError("denominator too large for exact arithmetic");
}

int type_from_length(GraphKind kind, int p, int k, i64 len) {
    for (int t = (kind == GraphKind::family ? 0 : 1); t <= (kind == GraphKind::family ? k - 1 : 3); ++t) {
        i64 want = kind == GraphKind::family ? ipow(p, t) * (p - 1) : ipow(2, t - 1);
        if (want == len) return t;
    }
    throw ConstructionError("arc length " + std::to_string(len) + " matches no edge type");
}

// Given labelled points (label per numerator; equal labels = identified),
// fill in sorted points, classes ordered by smallest member, and typed edges.
void finalize(LevelGraph& g, const std::vector<std::pair<i64, i64>>& labelled) {
    std::vector<std::pair<i64, i64>> pts = labelled;
    std::sort(pts.begin(), pts.end());
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].first == pts[i - 1].first) throw ConstructionError("duplicate circle point");

    g.points.clear();
    g.point_class.assign(pts.size(), -1);
    g.classes.clear();
    g.index_of.assign(size_t(g.denominator), -1);
    std::map<i64, int> class_id;
    for (size_t i = 0; i < pts.size(); ++i) {
        g.points.push_back(pts[i].first);
        g.index_of[size_t(pts[i].first)] = int(i);
        auto [it, fresh] = class_id.emplace(pts[i].second, int(g.classes.size()));
        if (fresh) g.classes.emplace_back();
        g.classes[it->second].push_back(pts[i].first);
        g.point_class[i] = it->second;
    }

    const size_t n = g.points.size();
    g.edges.clear();
    g.edges.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        i64 len = (g.points[j] - g.points[i] + g.denominator) % g.denominator;
        if (n == 1) len = g.denominator;
        Edge e;
        e.left = g.point_class[i];
        e.right = g.point_class[j];
        e.type = type_from_length(g.kind, g.p, g.k, len);
        e.len_num = len;
        e.loop = e.left == e.right;
        g.edges.push_back(e);
    }
}

// Level-m labels of the (p,k) family: new points of level m are grouped by l
// (l not divisible by p); points already present keep their class.
std::vector<std::pair<i64, i64>> family_labels(int p, int k, int m, const GraphLimits& limits) {
    const i64 q = ipow(p, k) - 1;
    check_budget(ipow(p, m) * k, ipow(p, m) * q, limits);
    std::vector<std::pair<i64, i64>> cur;
    i64 next_label = 0;
    for (int level = 1; level <= m; ++level) {
        const i64 D = ipow(p, level) * q;
        for (auto& [x, c] : cur) x *= p;
        std::vector<char> taken(size_t(D), 0);
        for (auto& pc : cur) taken[size_t(pc.first)] = 1;
        for (i64 l = 0; l < ipow(p, level); ++l) {
            if (level > 1 && l % p == 0) continue;
            i64 label = next_label++;
            for (int n = 1; n <= k; ++n) {
                i64 x = (ipow(p, n) + l * q) % D;
                if (taken[size_t(x)]) throw ConstructionError("family point assigned twice");
                taken[size_t(x)] = 1;
                cur.emplace_back(x, label);
            }
        }
    }
    return cur;
}

std::vector<std::pair<i64, i64>> relabel(const std::vector<i64>& nums, UnionFind& uf) {
    std::vector<std::pair<i64, i64>> out;
    out.reserve(nums.size());
    for (size_t i = 0; i < nums.size(); ++i) out.emplace_back(nums[i], uf.find(int(i)));
    return out;
}

// Merge points of the listed indices whose Dendrite kneading sequences agree.
void merge_dendrite(const std::vector<i64>& nums, const std::vector<int>& which, i64 D, UnionFind& uf) {
    const CircleParams dendrite = CircleParams::dendrite();
    std::map<KneadingSequence, int> first;
    for (int i : which) {
        auto ks = kneading_sequence(CirclePoint(nums[size_t(i)], D), dendrite);
        auto [it, fresh] = first.emplace(std::move(ks), i);
        if (!fresh) uf.unite(i, it->second);
    }
}

}  // namespace

std::string to_string(GraphKind kind) { return kind == GraphKind::family ? "family" : "mating"; }

int LevelGraph::class_of(i64 numerator) const {
    if (!has_point(numerator)) throw std::out_of_range("not a point of this level");
    return point_class[size_t(index_of[size_t(numerator)])];
}

bool LevelGraph::has_point(i64 numerator) const {
    return numerator >= 0 && numerator < denominator && index_of[size_t(numerator)] >= 0;
}

i64 LevelGraph::type_length(int type) const {
    return kind == GraphKind::family ? ipow(p, type) * (p - 1) : ipow(2, type - 1);
}

LevelGraph build_family_graph(int p, int k, int m, const GraphLimits& limits) {
    if (p < 2 || k < 2 || m < 1) throw std::invalid_argument("family graph needs p >= 2, k >= 2, m >= 1");
    LevelGraph g;
    g.level = m;
    g.kind = GraphKind::family;
    g.p = p;
    g.k = k;
    g.denominator = ipow(p, m) * (ipow(p, k) - 1);
    finalize(g, family_labels(p, k, m, limits));
    return g;
}

LevelGraph build_mating_graph(int m, const GraphLimits& limits) {
    if (m < 1) throw std::invalid_argument("mating graph needs m >= 1");
    // the rabbit triplets are the (2,3) family identifications
    auto labelled = family_labels(2, 3, m, limits);
    const i64 D = 7 * ipow(2, m);
    std::vector<i64> nums;
    UnionFind uf(labelled.size());
    std::map<i64, int> first_of_label;
    for (size_t i = 0; i < labelled.size(); ++i) {
        nums.push_back(labelled[i].first);
        auto [it, fresh] = first_of_label.emplace(labelled[i].second, int(i));
        if (!fresh) uf.unite(int(i), it->second);
    }
    std::vector<int> all(nums.size());
    std::iota(all.begin(), all.end(), 0);
    merge_dendrite(nums, all, D, uf);

    LevelGraph g;
    g.level = m;
    g.kind = GraphKind::mating;
    g.p = 2;
    g.k = 3;
    g.denominator = D;
    finalize(g, relabel(nums, uf));
    return g;
}

std::vector<std::pair<int, bool>> subdivision_children(GraphKind kind, int p, int k, int type) {
    std::vector<std::pair<int, bool>> out;
    if (kind == GraphKind::family) {
        if (type < k - 1) return {{type + 1, false}};
        for (int b = 0; b < p - 1; ++b) {
            out.emplace_back(0, false);
            for (int n = 1; n < k; ++n) out.emplace_back(n, true);
        }
        out.emplace_back(0, false);
        return out;
    }
    if (type < 3) return {{type + 1, false}};
    return {{1, false}, {2, true}, {3, true}, {1, false}};
}

LevelGraph subdivide(const LevelGraph& g, const GraphLimits& limits) {
    LevelGraph h;
    h.level = g.level + 1;
    h.kind = g.kind;
    h.p = g.p;
    h.k = g.k;
    h.denominator = g.denominator * g.p;

    std::vector<i64> nums;
    std::vector<i64> labels;
    std::vector<int> fresh_points;
    std::vector<char> expect_loop;
    i64 next_label = g.num_classes();
    i64 total = 0;
    for (const Edge& e : g.edges) total += i64(subdivision_children(g.kind, g.p, g.k, e.type).size());
    check_budget(total, h.denominator, limits);

    for (size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        auto kids = subdivision_children(g.kind, g.p, g.k, e.type);
        i64 pos = g.points[i] * g.p;
        for (size_t c = 0; c < kids.size(); ++c) {
            if (c == 0) {
                nums.push_back(pos);
                labels.push_back(g.point_class[i]);
            } else {
                // starts of loop blocks: block b holds the k endpoints of its loops
                nums.push_back(pos);
                labels.push_back(next_label + i64((c - 1) / size_t(g.k)));
                fresh_points.push_back(int(nums.size() - 1));
            }
            bool loop = kids.size() == 1 ? e.loop : kids[c].second;
            expect_loop.push_back(char(loop));
            pos = (pos + (h.kind == GraphKind::family ? ipow(h.p, kids[c].first) * (h.p - 1)
                                                      : ipow(2, kids[c].first - 1))) %
                  h.denominator;
        }
        if (kids.size() > 1) next_label += i64((kids.size() - 1) / size_t(g.k));
    }

    UnionFind uf(nums.size());
    std::map<i64, int> first_of_label;
    for (size_t i = 0; i < nums.size(); ++i) {
        auto [it, fresh] = first_of_label.emplace(labels[i], int(i));
        if (!fresh) uf.unite(int(i), it->second);
    }
    if (h.kind == GraphKind::mating) merge_dendrite(nums, fresh_points, h.denominator, uf);

    // remember the expected loop flag per starting numerator before re-sorting
    std::map<i64, bool> loop_at;
    for (size_t i = 0; i < nums.size(); ++i) loop_at[nums[i]] = expect_loop[i];
    finalize(h, relabel(nums, uf));
    for (size_t i = 0; i < h.points.size(); ++i)
        if (h.edges[i].loop != loop_at[h.points[i]])
            throw ConstructionError("subdivision loop flag disagrees with identifications");
    return h;
}

i64 sextuplet_count(int m) {
    if (m < 4) return 0;
    i64 a = 1;
    for (int j = 4; j < m; ++j) a = (j % 2 == 0) ? 2 * a : 2 * a + 1;
    return a;
}

Census census(const LevelGraph& g) {
    Census c;
    c.classes = g.num_classes();
    c.points = g.num_points();
    c.edges = int(g.edges.size());
    for (const Edge& e : g.edges) {
        if (e.loop) {
            ++c.loops;
            ++c.loop_by_type[e.type];
        } else {
            ++c.nonloop_by_type[e.type];
        }
    }
    for (const auto& cl : g.classes) {
        ++c.class_sizes[int(cl.size())];
        if (cl.size() == 6) {
            ++c.sextuplets;
            bool fresh = std::all_of(cl.begin(), cl.end(), [&](i64 x) { return x % g.p != 0; });
            if (fresh) ++c.new_sextuplets;
        }
    }
    return c;
}

std::vector<std::string> validate(const LevelGraph& g) {
    std::vector<std::string> bad;
    const size_t n = g.points.size();
    i64 sum = 0;
    for (size_t i = 0; i < n; ++i) {
        const Edge& e = g.edges[i];
        sum += e.len_num;
        if (e.left != g.point_class[i] || e.right != g.point_class[(i + 1) % n])
            bad.push_back("edge " + std::to_string(i) + " endpoints disagree with point classes");
        if (e.loop != (e.left == e.right)) bad.push_back("edge " + std::to_string(i) + " loop flag wrong");
        if (e.len_num != g.type_length(e.type)) bad.push_back("edge " + std::to_string(i) + " length/type mismatch");
    }
    if (sum != g.denominator) bad.push_back("edge lengths do not sum to 1");

    if (g.kind == GraphKind::family) {
        if (g.num_classes() != ipow(g.p, g.level))
            bad.push_back("family class count " + std::to_string(g.num_classes()) + " != p^m");
        for (const auto& cl : g.classes)
            if (int(cl.size()) != g.k) {
                bad.push_back("family class of size " + std::to_string(cl.size()));
                break;
            }
    } else {
        Census c = census(g);
        for (auto [size, count] : c.class_sizes)
            if (size != 3 && size != 6) bad.push_back("mating class of size " + std::to_string(size));
        if (c.new_sextuplets != sextuplet_count(g.level))
            bad.push_back("new sextuplets " + std::to_string(c.new_sextuplets) + " != a_m = " +
                          std::to_string(sextuplet_count(g.level)));
        std::map<std::pair<int, int>, int> pairs;
        for (const Edge& e : g.edges)
            if (!e.loop) ++pairs[{std::min(e.left, e.right), std::max(e.left, e.right)}];
        for (auto [key, count] : pairs)
            if (count < 2) {
                bad.push_back("unpaired non-loop edge between classes " + std::to_string(key.first) + " and " +
                              std::to_string(key.second));
                break;
            }
    }
    return bad;
}

bool same_graph(const LevelGraph& a, const LevelGraph& b) {
    if (a.level != b.level || a.kind != b.kind || a.p != b.p || a.k != b.k || a.denominator != b.denominator)
        return false;
    if (a.points != b.points || a.point_class != b.point_class || a.classes != b.classes) return false;
    if (a.edges.size() != b.edges.size()) return false;
    for (size_t i = 0; i < a.edges.size(); ++i) {
        const Edge &x = a.edges[i], &y = b.edges[i];
        if (x.left != y.left || x.right != y.right || x.type != y.type || x.len_num != y.len_num || x.loop != y.loop)
            return false;
    }
    return true;
}

nlohmann::json graph_to_json(const LevelGraph& g) {
    nlohmann::json j;
    j["level"] = g.level;
    j["kind"] = to_string(g.kind);
    j["p"] = g.p;
    j["k"] = g.k;
    j["denominator"] = g.denominator;
    j["classes"] = g.classes;
    auto edges = nlohmann::json::array();
    for (const Edge& e : g.edges)
        edges.push_back({e.left, e.right, e.type, e.len_num, g.denominator, e.loop});
    j["edges"] = std::move(edges);
    return j;
}

bool kneading_agrees(const LevelGraph& g) {
    if (g.kind != GraphKind::family) throw std::invalid_argument("kneading_agrees: family graphs only");
    auto cp = CircleParams::family(g.p, g.k);
    std::map<KneadingSequence, int> seen;
    for (size_t i = 0; i < g.points.size(); ++i) {
        auto [it, fresh] = seen.emplace(kneading_sequence(CirclePoint(g.points[i], g.denominator), cp), g.point_class[i]);
        if (it->second != g.point_class[i]) return false;
    }
    return int(seen.size()) == g.num_classes();
}

}  // namespace juliaspec
