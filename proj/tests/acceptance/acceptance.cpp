// One PASS/FAIL line per acceptance criterion; detail lines are indented.
// Usage: dfh_acceptance [criterion ...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dfh/adaptivity.hpp"
#include "dfh/config.hpp"
#include "dfh/estimator.hpp"
#include "properties.hpp"

using namespace dfh;

namespace {

constexpr double kSlopeLo = -0.65, kSlopeHi = -0.35;
constexpr int kSlopeTail = 10;

struct Run {
    std::string name;
    std::vector<RunRow> rows;
    std::vector<std::vector<double>> increments;
    Mesh final_mesh;
    std::string error;  // non-empty if the loop stopped early
    double seconds{0.0};
};

Run run_experiment(const std::string& name, const Mesh& initial, const ProblemData& data, int rounds) {
    Run run;
    run.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    AdaptiveOptions opt;
    opt.n_iterations = rounds;
    try {
        const AdaptiveResult res = adaptive_loop(initial, data, opt);
        run.rows = res.record.rows;
        run.increments = res.record.picard_increments;
        run.final_mesh = res.mesh;
    } catch (const AdaptiveLoopError& e) {
        run.error = e.what();
        // rerun up to the failing round to keep the completed rows
        if (e.iteration() > 0) {
            opt.n_iterations = e.iteration() - 1;
            const AdaptiveResult res = adaptive_loop(initial, data, opt);
            run.rows = res.record.rows;
            run.increments = res.record.picard_increments;
            run.final_mesh = res.mesh;
        }
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("    [%s] %zu rounds, %zu vertices, %.1f s%s%s\n", name.c_str(), run.rows.size(),
                run.final_mesh.num_vertices(), run.seconds, run.error.empty() ? "" : ", stopped: ",
                run.error.c_str());
    std::fflush(stdout);
    return run;
}

double tail_slope(const Run& run, const std::function<double(const RunRow&)>& x) {
    if (run.rows.size() < kSlopeTail + 1) return std::nan("");
    std::vector<double> xs, ys;
    for (std::size_t i = run.rows.size() - kSlopeTail; i < run.rows.size(); ++i) {
        xs.push_back(x(run.rows[i]));
        ys.push_back(run.rows[i].est_total);
    }
    return fit_loglog_slope(xs, ys);
}

struct Verdict {
    bool pass{true};
    std::vector<std::string> details;
    void note(const std::string& s) { details.push_back(s); }
    void require(bool ok, const std::string& s) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok:   " : "FAIL: ") + s);
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// ---- runs shared between criteria, computed lazily ----

std::map<std::string, Run> g_runs;

const Run& example1(double p) {
    const std::string key = "example1 p=" + fmt("%.1f", p);
    if (!g_runs.count(key)) g_runs[key] = run_experiment(key, criss_cross_square(), example1_problem(p), 40);
    return g_runs[key];
}

const Run& example2(double p) {
    const int rounds = p == 1.0 ? 30 : 50;
    const std::string key = "example2 p=" + fmt("%.1f", p);
    if (!g_runs.count(key)) g_runs[key] = run_experiment(key, l_shape(), example2_problem(p), rounds);
    return g_runs[key];
}

const Run& fivespot() {
    const std::string key = "fivespot p=1.0";
    if (!g_runs.count(key)) g_runs[key] = run_experiment(key, criss_cross_square(), fivespot_problem(1.0), 30);
    return g_runs[key];
}

const std::vector<double> kExample1P{1.0, 1.2, 1.4, 1.6, 1.8};
const std::vector<double> kExample2P{1.0, 1.6};

void check_slope(Verdict& v, const Run& run) {
    if (!run.error.empty()) v.require(false, run.name + ": loop stopped early (" + run.error + ")");
    const double s = tail_slope(run, [](const RunRow& r) { return static_cast<double>(r.ndof); });
    std::ostringstream msg;
    msg << run.name << ": slope " << fmt("%.3f", s) << " over last " << kSlopeTail << " rows (window ["
        << kSlopeLo << ", " << kSlopeHi << "])";
    v.require(s >= kSlopeLo && s <= kSlopeHi, msg.str());
    // Ndof convention sensitivity: vertices-only abscissa, scaled to the same dimension
    const double sv = tail_slope(run, [](const RunRow& r) { return static_cast<double>(r.nv); });
    v.note("info: " + run.name + ": slope against vertex count " + fmt("%.3f", sv) + " (shift " +
           fmt("%.3f", std::abs(sv - s)) + ")");
}

// ---- criteria ----

Verdict criterion1() {
    Verdict v;
    ProblemData d;
    d.viscosity = [](Point) { return 1.0; };
    d.force0 = [](Point) { return Vec2{1.0, 1.0}; };
    d.force1 = [](double) { return Vec2{0.0, 0.0}; };
    d.dirac_sources = {{0.5, 0.5}};
    d.p = 1.5;
    Mesh refined = criss_cross_square();
    for (int r = 0; r < 8; ++r) {
        std::vector<Index> marked;
        for (std::size_t k = r % 3; k < refined.num_elements(); k += 3) marked.push_back(static_cast<Index>(k));
        refined = longest_edge_bisect(refined, marked);
    }
    for (const Mesh& m : {criss_cross_square(), refined}) {
        const CoupledState s = picard_solve(m, d);
        double umax = 0.0, pdev = 0.0, e2 = 0.0;
        for (double u : s.velocity.coefficients) umax = std::max(umax, std::abs(u));
        for (std::size_t i = 0; i < m.num_vertices(); ++i) {
            const Point x = m.vertex(static_cast<Index>(i));
            pdev = std::max(pdev, std::abs(s.pressure.coefficients[i] - (x.x + x.y - 1.0)));
        }
        for (double e : darcy_indicators(m, s, d)) e2 += e * e;
        const std::string tag = std::to_string(m.num_elements()) + " elements: ";
        v.require(umax <= 1e-10, tag + "max |u_h| = " + fmt("%.2e", umax));
        v.require(pdev <= 1e-10, tag + "max |p_h - (x+y-1)| = " + fmt("%.2e", pdev));
        v.require(std::sqrt(e2) <= 1e-9, tag + "Darcy estimator = " + fmt("%.2e", std::sqrt(e2)));
    }
    return v;
}

Verdict criterion2() {
    Verdict v;
    for (double p : kExample1P) check_slope(v, example1(p));
    return v;
}

Verdict criterion3() {
    Verdict v;
    for (double p : kExample2P) check_slope(v, example2(p));
    return v;
}

void check_localized(Verdict& v, const Run& run, const std::vector<Point>& points) {
    const Mesh& m = run.final_mesh;
    std::vector<double> h(m.num_elements());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = m.diameter(static_cast<Index>(k));
    std::vector<double> sorted = h;
    const std::size_t decile = std::max<std::size_t>(1, sorted.size() / 10) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(decile), sorted.end());
    const double h10 = sorted[decile];
    for (const Point& z : points) {
        const PointLocation loc = locate_point(m, z);
        double worst = 0.0;
        for (Index k : loc.containing_elements) worst = std::max(worst, h[static_cast<std::size_t>(k)]);
        std::ostringstream msg;
        msg << run.name << ": (" << z.x << ", " << z.y << ") max h_K " << fmt("%.2e", worst) << " vs decile "
            << fmt("%.2e", h10);
        v.require(worst <= h10, msg.str());
    }
}

Verdict criterion4() {
    Verdict v;
    for (double p : kExample1P) check_localized(v, example1(p), example1_problem(p).dirac_sources);
    for (double p : kExample2P) check_localized(v, example2(p), {{-0.25, 0.5}, {0.0, 0.0}});
    return v;
}

void check_picard(Verdict& v, const Run& run) {
    v.require(run.error.empty(), run.name + ": every round converged" + (run.error.empty() ? "" : " (" + run.error + ")"));
    int max_iters = 0;
    std::size_t non_monotone = 0;
    for (const auto& inc : run.increments) {
        max_iters = std::max(max_iters, static_cast<int>(inc.size()));
        // tail: the last three increments
        const std::size_t from = inc.size() > 3 ? inc.size() - 3 : 0;
        for (std::size_t i = from + 1; i < inc.size(); ++i)
            if (!(inc[i] < inc[i - 1])) {
                ++non_monotone;
                break;
            }
    }
    v.require(max_iters <= 200, run.name + ": at most " + std::to_string(max_iters) + " Picard iterations per round");
    v.require(non_monotone == 0, run.name + ": " + std::to_string(non_monotone) +
                                     " rounds with a non-decreasing increment tail");
}

Verdict criterion5() {
    Verdict v;
    for (double p : kExample1P) check_picard(v, example1(p));
    for (double p : kExample2P) check_picard(v, example2(p));
    check_picard(v, fivespot());
    return v;
}

Verdict criterion6() {
    using namespace dfh::props;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const std::pair<const char*, std::function<PropertyResult()>> suites[] = {
        {"quadrature exactness, degrees 1..20", [] { return quadrature_exactness(); }},
        {"1000 random bisection rounds: conformity, area, angles, Dirac partition of unity", [] { return bisection_random_rounds(1000, 20261016); }},
        {"monotonicity on 10^4 random pairs", [] { return forchheimer_monotonicity(10000, 11); }},
        {"indicator quadrature vs subdivision, 1e-6", [] { return indicator_quadrature_vs_subdivision(1e-6); }},
        {"mark_max cases", [] { return mark_max_cases(); }},
    };
    for (const auto& [name, fn] : suites) {
        const PropertyResult r = fn();
        v.require(r.ok, std::string(name) + (r.ok ? "" : ": " + r.detail));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < 60.0, "total " + fmt("%.1f", secs) + " s (limit 60 s)");
    return v;
}

Verdict criterion7() {
    Verdict v;
    const Run& run = example2(1.0);
    const std::size_t nv = run.final_mesh.num_vertices();
    std::ostringstream msg;
    msg << run.name << ", " << run.rows.size() - 1 << " rounds: " << nv << " vertices, "
        << run.final_mesh.num_elements() << " elements (window 222..1995 around 665)";
    v.require(run.rows.size() == 31 && nv >= 222 && nv <= 1995, msg.str());
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
        {"analytic fixed point", criterion1},
        {"estimator decay rate, Example 1", criterion2},
        {"estimator decay rate, Example 2", criterion3},
        {"refinement localization", criterion4},
        {"Picard convergence on every round", criterion5},
        {"property suites", criterion6},
        {"mesh growth vs reference vertex count", criterion7},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    std::vector<std::string> summary;
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        std::printf("criterion %d: %s\n", id, criteria[i].first);
        std::fflush(stdout);
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        for (const auto& d : v.details) std::printf("    %s\n", d.c_str());
        const std::string line =
            std::string(v.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + criteria[i].first;
        std::printf("%s\n", line.c_str());
        std::fflush(stdout);
        summary.push_back(line);
        all = all && v.pass;
    }
    std::printf("\nsummary\n");
    for (const auto& s : summary) std::printf("%s\n", s.c_str());
    return all ? 0 : 1;
}
