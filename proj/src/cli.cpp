#include "juliaspec/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "juliaspec/errors.hpp"
#include "juliaspec/symmetry.hpp"

namespace juliaspec {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

GraphKind parse_kind(const std::string& s) {
    if (s == "family") return GraphKind::family;
    if (s == "mating") return GraphKind::mating;
    throw std::invalid_argument("unknown kind '" + s + "' (family or mating)");
}

LevelGraph build(const RunConfig& cfg) {
    return parse_kind(cfg.kind) == GraphKind::family ? build_family_graph(cfg.p, cfg.k, cfg.level())
                                                     : build_mating_graph(cfg.level());
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void write_json(const fs::path& path, nlohmann::json j) {
    round_floats(j);
    write_file(path, j.dump(2) + "\n");
}

void write_manifest(const RunConfig& cfg, const nlohmann::json& checks, const std::vector<std::string>& outputs) {
    nlohmann::json j;
    j["tool"] = "juliaspec";
    j["version"] = kVersion;
    j["command"] = cfg.command;
    j["config"] = cfg.to_json();
    j["libraries"]["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION);
    j["libraries"]["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    j["libraries"]["cli11"] = CLI11_VERSION;
    j["checks"] = checks;
    j["outputs"] = outputs;
    write_json(fs::path(cfg.out) / "manifest.json", j);
}

bool all_ok(const nlohmann::json& checks) {
    for (auto& [key, val] : checks.items())
        if (val.is_object() && val.contains("ok") && !val["ok"].get<bool>()) return false;
    return true;
}

nlohmann::json census_json(const Census& c) {
    nlohmann::json j;
    j["classes"] = c.classes;
    j["points"] = c.points;
    j["edges"] = c.edges;
    j["loops"] = c.loops;
    for (auto [t, n] : c.nonloop_by_type) j["nonloop_by_type"][std::to_string(t)] = n;
    for (auto [t, n] : c.loop_by_type) j["loop_by_type"][std::to_string(t)] = n;
    for (auto [s, n] : c.class_sizes) j["class_sizes"][std::to_string(s)] = n;
    j["sextuplets"] = c.sextuplets;
    j["new_sextuplets"] = c.new_sextuplets;
    return j;
}

nlohmann::json gaps_json(const Eigen::VectorXd& ev, int p) {
    auto arr = nlohmann::json::array();
    for (const auto& r : spectral_gaps(ev, p))
        arr.push_back({{"n", r.n}, {"index", r.index}, {"below", r.below}, {"above", r.above},
                       {"ratio_up", r.ratio_up}, {"ratio_down", r.ratio_down}});
    return arr;
}

}  // namespace

int RunConfig::level() const {
    if (m > 0) return m;
    return kind == "mating" ? 10 : 7;
}

double RunConfig::weyl_alpha() const {
    if (alpha > 0) return alpha;
    return kind == "mating" ? 0.7 : double(k) / (k + 1);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    if (kind == "family") {
        j["p"] = p;
        j["k"] = k;
    }
    j["m"] = level();
    j["rtol"] = rtol;
    j["residual_tol"] = residual_tol;
    j["support_tol"] = support_tol;
    j["out"] = out;
    j["eigvec"] = eigvec;
    j["weyl"] = weyl;
    j["alpha"] = weyl_alpha();
    j["count"] = count;
    j["jmax"] = j_max;
    return j;
}

void round_floats(nlohmann::json& j) {
    if (j.is_number_float()) {
        double x = j.get<double>();
        if (std::isfinite(x)) j = std::stod(format_double(x));
        return;
    }
    if (j.is_structured())
        for (auto& x : j) round_floats(x);
}

int cmd_graph(const RunConfig& cfg, std::ostream& out) {
    fs::create_directories(cfg.out);
    LevelGraph g = build(cfg);
    Census c = census(g);
    auto problems = validate(g);
    const bool family = g.kind == GraphKind::family;
    const bool kn = !family || kneading_agrees(g);

    out << "graph " << to_string(g.kind);
    if (g.kind == GraphKind::family) out << " p=" << g.p << " k=" << g.k;
    out << " level " << g.level << " (denominator " << g.denominator << ")\n";
    out << "census: " << c.classes << " classes, " << c.points << " points, " << c.edges << " edges, " << c.loops
        << " loops\n";
    for (int t = g.min_type(); t <= g.max_type(); ++t)
        out << "  type " << t << ": " << c.nonloop_by_type[t] << " edges, " << c.loop_by_type[t] << " loops\n";
    if (g.kind == GraphKind::mating) {
        out << "sextuplets: " << c.new_sextuplets << " new (a_m = " << sextuplet_count(g.level) << "), "
            << c.sextuplets << " in total\n";
    } else {
        out << "kneading agreement: " << (kn ? "yes" : "no") << "\n";
    }
    for (const auto& p : problems) out << "invariant violated: " << p << "\n";

    write_json(fs::path(cfg.out) / "graph.json", graph_to_json(g));
    nlohmann::json checks;
    checks["structure"] = {{"ok", problems.empty()}, {"problems", problems}};
    if (family) checks["kneading_agreement"] = {{"ok", kn}};
    checks["census"] = census_json(c);
    write_manifest(cfg, checks, {"graph.json", "manifest.json"});
    return all_ok(checks) ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    fs::create_directories(cfg.out);
    LevelGraph g = build(cfg);
    auto problems = validate(g);
    auto w = weights_for(g);
    auto L = assemble(g, w);
    SolveOptions opts;
    opts.vectors = !cfg.eigvec.empty();
    SpectralResult s = eigensolve(L, opts);
    const auto& ev = s.eigenvalues;
    const Eigen::Index n = ev.size();
    std::vector<std::string> outputs = {"spectrum.csv"};
    nlohmann::json checks;
    checks["structure"] = {{"ok", problems.empty()}, {"problems", problems}};
    const double floor = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    checks["zero_simple"] = {{"ok", n == 1 || (std::abs(ev(0)) <= floor && ev(1) > floor)}, {"lambda_0", ev(0)}};
    checks["nonnegative"] = {{"ok", ev.minCoeff() >= -1e-9}, {"min", ev.minCoeff()}};
    write_file(fs::path(cfg.out) / "spectrum.csv", spectrum_csv(s, cfg.count));
    if (s.has_vectors()) {
        double res = max_residual(L, s);
        checks["residual"] = {{"ok", res <= cfg.residual_tol}, {"max", res}, {"tol", cfg.residual_tol}};
        for (int i : cfg.eigvec) {
            if (i < 0 || i >= n) throw std::invalid_argument("eigenvector index " + std::to_string(i) + " out of range");
            Eigen::VectorXd v = s.eigenvectors.col(i);
            std::string base = "eigvec_" + std::to_string(i);
            write_file(fs::path(cfg.out) / (base + ".csv"), eigenvector_csv(g, v));
            write_file(fs::path(cfg.out) / (base + "_trace.csv"), eigenvector_trace_csv(g, v));
            outputs.push_back(base + ".csv");
            outputs.push_back(base + "_trace.csv");
        }
    }
    if (cfg.weyl) {
        std::ostringstream os;
        os << "t,N,W\n";
        for (const auto& x : weyl_ratio(ev, cfg.weyl_alpha()))
            os << format_double(x.t) << ',' << x.count << ',' << format_double(x.ratio) << '\n';
        write_file(fs::path(cfg.out) / "weyl.csv", os.str());
        outputs.push_back("weyl.csv");
        auto fit = weyl_exponent(ev);
        checks["weyl_fit"] = {{"slope", fit.slope}, {"alpha", cfg.weyl_alpha()}};
    }
    outputs.push_back("manifest.json");
    write_manifest(cfg, checks, outputs);

    out << "spectrum of " << to_string(g.kind) << " level " << g.level << ": " << n << " eigenvalues\n";
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(n, 10); ++i)
        out << "  lambda_" << i << " = " << format_double(ev(i)) << "\n";
    for (auto& [key, val] : checks.items())
        if (val.contains("ok")) out << key << ": " << (val["ok"].get<bool>() ? "ok" : "FAILED") << "\n";
    return all_ok(checks) ? 0 : 1;
}

int cmd_conjectures(const RunConfig& cfg, std::ostream& out) {
    fs::create_directories(cfg.out);
    GraphKind kind = parse_kind(cfg.kind);
    nlohmann::json report;
    report["kind"] = cfg.kind;
    report["level"] = cfg.level();
    nlohmann::json checks;

    if (kind == GraphKind::family && cfg.p != 3) {
        const std::string why =
            "the multiplicity recursion and the counting identity are stated for p = 3 only; they are not valid "
            "for p = " + std::to_string(cfg.p);
        report["refused"] = true;
        report["reason"] = why;
        out << "refused: " << why << "\n";
        write_json(fs::path(cfg.out) / "report.json", report);
        write_manifest(cfg, checks, {"report.json", "manifest.json"});
        return 0;
    }

    if (kind == GraphKind::family) {
        auto tower = build_tower(kind, 3, cfg.k, cfg.level(), cfg.rtol, TowerVectors::top);
        const auto& ev = tower.top().spectrum.eigenvalues;
        auto mult = check_multiplicity_conjecture(tower.top().clusters, cfg.k);
        auto count = check_counting_identity(tower, 3, cfg.j_max);
        auto sym = check_family_symmetry(tower);
        auto fit = weyl_exponent(ev);
        for (const auto* r : {&mult, &count, &sym}) {
            out << r->table() << "\n";
            report["reports"][r->statement] = r->to_json();
        }
        report["gaps"] = gaps_json(ev, 3);
        report["weyl"] = {{"slope", fit.slope}, {"expected", cfg.weyl_alpha()}};
        report["scale"] = tower.scale;
        out << "Weyl exponent fit: " << format_double(fit.slope) << " (k/(k+1) = " << format_double(cfg.weyl_alpha())
            << ")\n";
        out << "spectral gaps (n, lambda_{3^n}/lambda_{3^n-1}):";
        for (const auto& r : spectral_gaps(ev, 3)) out << " " << r.n << ":" << format_double(r.ratio_up);
        out << "\n";
    } else {
        auto tower = build_tower(kind, 2, 3, cfg.level(), cfg.rtol, TowerVectors::all);
        const auto& ev = tower.top().spectrum.eigenvalues;
        auto mult = check_mating_multiplicities(tower);
        auto sup = check_mating_supports(tower, cfg.support_tol);
        auto fit = weyl_exponent(ev);
        for (const auto* r : {&mult, &sup}) {
            out << r->table() << "\n";
            report["reports"][r->statement] = r->to_json();
        }
        const auto& g = tower.top().graph;
        auto L = assemble(g, weights_for(g));
        for (const auto& a : reflection_actions(g)) {
            double e = commutator_error(L, a);
            report["commutator"][a.name] = e;
            checks["commutator_" + a.name] = {{"ok", e <= 1e-10}, {"relative", e}};
        }
        report["gaps"] = gaps_json(ev, 2);
        report["weyl"] = {{"slope", fit.slope}, {"expected", cfg.weyl_alpha()}};
        report["scale"] = tower.scale;
        out << "Weyl exponent fit: " << format_double(fit.slope) << " (experimental 0.7)\n";
    }
    write_json(fs::path(cfg.out) / "report.json", report);
    write_manifest(cfg, checks, {"report.json", "manifest.json"});
    return all_ok(checks) ? 0 : 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energies, Laplacians and spectra on Julia sets realized as circles with identifications"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
    app.add_option("--kind", cfg.kind, "family or mating")->check(CLI::IsMember({"family", "mating"}));
    app.add_option("--p", cfg.p, "degree")->check(CLI::Range(2, 9));
    app.add_option("--k", cfg.k, "period of the critical orbit")->check(CLI::Range(2, 9));
    app.add_option("--m", cfg.m, "level (default 7 for the family, 10 for the mating)")->check(CLI::Range(0, 20));
    app.add_option("--rtol", cfg.rtol, "cluster tolerance")->check(CLI::PositiveNumber);
    app.add_option("--residual-tol", cfg.residual_tol, "eigenpair residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--support-tol", cfg.support_tol, "support test tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--eigvec", cfg.eigvec, "eigenvector indices to export");
    app.add_flag("--weyl", cfg.weyl, "write weyl.csv");
    app.add_option("--alpha", cfg.alpha, "Weyl exponent (default k/(k+1), 0.7 for the mating)");
    app.add_option("--count", cfg.count, "eigenvalues written to spectrum.csv")->check(CLI::NonNegativeNumber);
    app.add_option("--jmax", cfg.j_max, "largest j in the counting identity")->check(CLI::Range(0, 6));
    auto* graph = app.add_subcommand("graph", "build a level graph and print its census");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and eigenfunctions");
    auto* conj = app.add_subcommand("conjectures", "multiplicity, counting, symmetry and support checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    try {
        if (graph->parsed()) {
            cfg.command = "graph";
            return cmd_graph(cfg, out);
        }
        if (spectrum->parsed()) {
            cfg.command = "spectrum";
            return cmd_spectrum(cfg, out);
        }
        cfg.command = "conjectures";
        (void)conj;
        return cmd_conjectures(cfg, out);
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace juliaspec
