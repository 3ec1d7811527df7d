#include "dfh/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dfh {

std::size_t count_dofs(const Mesh& mesh) {
    const std::size_t nv = mesh.num_vertices();
    return 2 * mesh.num_elements() + nv + (nv - mesh.num_boundary_vertices()) + 1;
}

std::vector<Index> mark_max(std::span<const double> indicators) {
    if (indicators.empty()) throw std::invalid_argument("mark_max: empty indicator field");
    const auto it = std::max_element(indicators.begin(), indicators.end());
    const double top = *it;
    if (!(top > 0.0)) return {};
    const double threshold = 0.5 * top;
    std::vector<Index> marked;
    for (std::size_t k = 0; k < indicators.size(); ++k) {
        if (indicators[k] > threshold || k == static_cast<std::size_t>(it - indicators.begin()))
            marked.push_back(static_cast<Index>(k));
    }
    return marked;
}

AdaptiveResult adaptive_loop(const Mesh& initial, const ProblemData& data, const AdaptiveOptions& options,
                             const RoundObserver& observer) {
    if (options.n_iterations < 0) throw std::invalid_argument("adaptive_loop: n_iterations must be >= 0");
    validate(data);

    AdaptiveResult res;
    res.mesh = initial;
    for (int iter = 0;; ++iter) {
        try {
            res.state = picard_solve(res.mesh, data, options.picard);
        } catch (const PicardNonConvergence& e) {
            throw AdaptiveLoopError(iter, e.what());
        } catch (const SingularMatrixError& e) {
            throw AdaptiveLoopError(iter, e.what());
        }
        res.indicators = estimate(res.mesh, res.state, data);
        if (observer) observer(iter, res.mesh, res.state, res.indicators);

        RunRow row;
        row.iter = iter;
        row.nv = res.mesh.num_vertices();
        row.nt = res.mesh.num_elements();
        row.ndof = count_dofs(res.mesh);
        row.est_heat = res.indicators.heat_global;
        row.est_darcy = res.indicators.darcy_global;
        row.est_total = res.indicators.total_global;
        row.picard_iters = res.state.picard_iters;
        res.record.picard_increments.push_back(res.state.increments);

        if (iter == options.n_iterations) {
            res.record.rows.push_back(row);
            break;
        }
        const std::vector<Index> marked = mark_max(res.indicators.total_local);
        row.marked = marked.size();
        res.record.rows.push_back(row);
        if (marked.empty()) {
            res.record.notices.push_back("round " + std::to_string(iter) +
                                         ": all indicators vanish, nothing to refine");
            break;
        }
        res.mesh = longest_edge_bisect(res.mesh, marked);
    }
    return res;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_loglog_slope: need >= 2 points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_loglog_slope: values must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

double fit_rate(const RunRecord& record, int tail) {
    if (tail < 2) throw std::invalid_argument("fit_rate: tail must be >= 2");
    if (record.rows.size() < static_cast<std::size_t>(tail) + 1)
        throw std::invalid_argument("fit_rate: insufficient rows (" + std::to_string(record.rows.size()) +
                                    " rows, tail " + std::to_string(tail) + ")");
    std::vector<double> x, y;
    for (std::size_t i = record.rows.size() - static_cast<std::size_t>(tail); i < record.rows.size(); ++i) {
        x.push_back(static_cast<double>(record.rows[i].ndof));
        y.push_back(record.rows[i].est_total);
    }
    return fit_loglog_slope(x, y);
}

void write_csv(std::ostream& out, const RunRecord& record) {
    out << kRunRecordHeader << '\n' << std::setprecision(17);
    for (const RunRow& r : record.rows) {
        out << r.iter << ',' << r.nv << ',' << r.nt << ',' << r.ndof << ',' << r.est_heat << ',' << r.est_darcy
            << ',' << r.est_total << ',' << r.picard_iters << ',' << r.marked << '\n';
    }
}

RunRecord read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("record csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kRunRecordHeader) throw std::runtime_error("record csv: unexpected header '" + line + "'");
    RunRecord rec;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        RunRow r;
        if (!(ss >> r.iter >> r.nv >> r.nt >> r.ndof >> r.est_heat >> r.est_darcy >> r.est_total >> r.picard_iters >>
              r.marked))
            throw std::runtime_error("record csv: malformed line " + std::to_string(lineno));
        rec.rows.push_back(r);
    }
    return rec;
}

void write_csv_file(const std::string& path, const RunRecord& record) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(out, record);
}

RunRecord read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

}  // namespace dfh
