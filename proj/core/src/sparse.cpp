#include "dfh/sparse.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace dfh {

namespace {
std::size_t at(std::int64_t i) { return static_cast<std::size_t>(i); }
}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> row_offsets,
                           std::vector<std::int32_t> col_indices, std::vector<double> values)
    : rows_(rows), cols_(cols), offsets_(std::move(row_offsets)), cols_idx_(std::move(col_indices)),
      values_(std::move(values)) {
    if (offsets_.size() != rows_ + 1 || cols_idx_.size() != values_.size() ||
        at(offsets_.back()) != values_.size() || offsets_.front() != 0)
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    for (std::size_t i = 0; i < rows_; ++i) {
        if (offsets_[i + 1] < offsets_[i]) throw std::invalid_argument("SparseMatrix: offsets not monotone");
        for (auto p = offsets_[i]; p < offsets_[i + 1]; ++p) {
            const auto c = cols_idx_[at(p)];
            if (c < 0 || static_cast<std::size_t>(c) >= cols_)
                throw std::invalid_argument("SparseMatrix: column index out of range");
            if (p > offsets_[i] && cols_idx_[at(p - 1)] >= c)
                throw std::invalid_argument("SparseMatrix: columns unsorted or duplicated");
        }
    }
}

double SparseMatrix::coeff(std::size_t i, std::size_t j) const {
    const auto begin = cols_idx_.begin() + offsets_[i];
    const auto end = cols_idx_.begin() + offsets_[i + 1];
    const auto it = std::lower_bound(begin, end, static_cast<std::int32_t>(j));
    if (it == end || *it != static_cast<std::int32_t>(j)) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (auto p = offsets_[i]; p < offsets_[i + 1]; ++p)
            s += values_[at(p)] * x[static_cast<std::size_t>(cols_idx_[at(p)])];
        y[i] = s;
    }
    return y;
}

double SparseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double SparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::int64_t> off(cols_ + 1, 0);
    for (auto c : cols_idx_) ++off[static_cast<std::size_t>(c) + 1];
    std::partial_sum(off.begin(), off.end(), off.begin());
    std::vector<std::int32_t> idx(nnz());
    std::vector<double> val(nnz());
    std::vector<std::int64_t> next(off.begin(), off.end() - 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (auto p = offsets_[i]; p < offsets_[i + 1]; ++p) {
            const auto dst = at(next[static_cast<std::size_t>(cols_idx_[at(p)])]++);
            idx[dst] = static_cast<std::int32_t>(i);
            val[dst] = values_[at(p)];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(off), std::move(idx), std::move(val));
}

void TripletBuilder::add(std::size_t i, std::size_t j, double v) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("TripletBuilder::add: index out of range");
    entries_.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), v});
}

SparseMatrix TripletBuilder::build() const {
    std::vector<Entry> e = entries_;
    std::stable_sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::int64_t> off(rows_ + 1, 0);
    std::vector<std::int32_t> idx;
    std::vector<double> val;
    idx.reserve(e.size());
    val.reserve(e.size());
    for (std::size_t p = 0; p < e.size(); ++p) {
        if (!idx.empty() && p > 0 && e[p].row == e[p - 1].row && e[p].col == e[p - 1].col) {
            val.back() += e[p].value;
            continue;
        }
        idx.push_back(e[p].col);
        val.push_back(e[p].value);
        ++off[static_cast<std::size_t>(e[p].row) + 1];
    }
    std::partial_sum(off.begin(), off.end(), off.begin());
    return SparseMatrix(rows_, cols_, std::move(off), std::move(idx), std::move(val));
}

std::vector<std::int32_t> reverse_cuthill_mckee(const SparseMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::int32_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(a.col_indices()[at(p)]);
            if (j == i) continue;
            adj[i].push_back(static_cast<std::int32_t>(j));
            adj[j].push_back(static_cast<std::int32_t>(i));
        }
    }
    std::vector<std::size_t> degree(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& nb = adj[i];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        degree[i] = nb.size();
    }
    // Dense rows (e.g. a mean-value constraint) are ordered last and kept out
    // of the graph; otherwise they collapse every BFS to two levels.
    const auto dense_cut = static_cast<std::size_t>(std::max(16.0, 10.0 * std::sqrt(double(n))));
    std::vector<char> dense(n, 0);
    std::vector<std::int32_t> dense_nodes;
    for (std::size_t i = 0; i < n; ++i) {
        if (degree[i] > dense_cut) {
            dense[i] = 1;
            dense_nodes.push_back(static_cast<std::int32_t>(i));
        }
    }
    if (!dense_nodes.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            auto& nb = adj[i];
            if (dense[i]) {
                nb.clear();
                continue;
            }
            std::erase_if(nb, [&](std::int32_t j) { return dense[static_cast<std::size_t>(j)] != 0; });
        }
        for (std::size_t i = 0; i < n; ++i) degree[i] = adj[i].size();
    }
    for (auto& nb : adj) {
        std::stable_sort(nb.begin(), nb.end(), [&](std::int32_t x, std::int32_t y) {
            return degree[static_cast<std::size_t>(x)] < degree[static_cast<std::size_t>(y)];
        });
    }

    std::vector<std::int32_t> order;
    order.reserve(n);
    std::vector<char> visited(n, 0);
    std::vector<std::int32_t> level(n, -1);

    auto bfs = [&](std::int32_t start, std::vector<std::int32_t>* out) {
        // returns the last node reached (a far node)
        std::queue<std::int32_t> q;
        std::vector<std::int32_t> touched{start};
        q.push(start);
        level[static_cast<std::size_t>(start)] = 0;
        std::int32_t last = start;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            last = v;
            if (out) out->push_back(v);
            for (auto w : adj[static_cast<std::size_t>(v)]) {
                if (level[static_cast<std::size_t>(w)] >= 0 || visited[static_cast<std::size_t>(w)]) continue;
                level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
                touched.push_back(w);
                q.push(w);
            }
        }
        for (auto v : touched) level[static_cast<std::size_t>(v)] = -1;
        return last;
    };

    std::vector<std::int32_t> by_degree(n);
    std::iota(by_degree.begin(), by_degree.end(), 0);
    std::stable_sort(by_degree.begin(), by_degree.end(), [&](std::int32_t x, std::int32_t y) {
        return degree[static_cast<std::size_t>(x)] < degree[static_cast<std::size_t>(y)];
    });
    for (auto seed : by_degree) {
        if (visited[static_cast<std::size_t>(seed)] || dense[static_cast<std::size_t>(seed)]) continue;
        // two sweeps towards a pseudo-peripheral start node
        std::int32_t start = bfs(seed, nullptr);
        start = bfs(start, nullptr);
        std::vector<std::int32_t> component;
        bfs(start, &component);
        for (auto v : component) visited[static_cast<std::size_t>(v)] = 1;
        order.insert(order.end(), component.begin(), component.end());
    }
    std::reverse(order.begin(), order.end());
    order.insert(order.end(), dense_nodes.begin(), dense_nodes.end());
    return order;
}

std::vector<std::int32_t> approximate_minimum_degree(const SparseMatrix& a) {
    using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, std::int32_t>;
    std::vector<Eigen::Triplet<double, std::int32_t>> trips;
    trips.reserve(a.nnz());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (auto p = a.row_offsets()[i]; p < a.row_offsets()[i + 1]; ++p)
            trips.emplace_back(static_cast<std::int32_t>(i), a.col_indices()[at(p)], 1.0);
    EigenCsc m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    m.setFromTriplets(trips.begin(), trips.end());
    Eigen::AMDOrdering<std::int32_t> amd;
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, std::int32_t> perm;
    amd(m, perm);
    return {perm.indices().data(), perm.indices().data() + perm.indices().size()};
}

SparseLU::SparseLU(const SparseMatrix& a, double pivot_threshold, ColumnOrdering ordering) : n_(a.rows()) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SparseLU: matrix must be square");
    col_perm_ = ordering == ColumnOrdering::MinimumDegree ? approximate_minimum_degree(a) : reverse_cuthill_mckee(a);
    factorize(a, pivot_threshold);
}

SparseLU::SparseLU(const SparseMatrix& a, std::vector<std::int32_t> col_perm, double pivot_threshold)
    : n_(a.rows()), col_perm_(std::move(col_perm)) {
    if (a.rows() != a.cols()) throw std::invalid_argument("SparseLU: matrix must be square");
    if (col_perm_.size() != n_) throw std::invalid_argument("SparseLU: ordering has the wrong length");
    std::vector<char> seen(n_, 0);
    for (auto c : col_perm_) {
        if (c < 0 || static_cast<std::size_t>(c) >= n_ || seen[static_cast<std::size_t>(c)])
            throw std::invalid_argument("SparseLU: ordering is not a permutation");
        seen[static_cast<std::size_t>(c)] = 1;
    }
    factorize(a, pivot_threshold);
}

void SparseLU::factorize(const SparseMatrix& a, double pivot_threshold) {
    const std::size_t n = n_;
    const double singular_tol = 1e-14 * a.max_abs();
    const SparseMatrix at_csc = a.transpose();  // rows of A^T are columns of A
    const auto ap = at_csc.row_offsets();
    const auto ai = at_csc.col_indices();
    const auto ax = at_csc.values();

    row_perm_.assign(n, -1);
    lp_.assign(n + 1, 0);
    up_.assign(n + 1, 0);
    li_.reserve(4 * a.nnz() + n);
    lx_.reserve(4 * a.nnz() + n);
    ui_.reserve(4 * a.nnz() + n);
    ux_.reserve(4 * a.nnz() + n);

    std::vector<double> x(n, 0.0);
    std::vector<std::int32_t> xi(n), stack(n);
    std::vector<std::int64_t> pstack(n);
    std::vector<std::int64_t> mark(n, -1);
    min_pivot_ = std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        lp_[k] = static_cast<std::int64_t>(li_.size());
        up_[k] = static_cast<std::int64_t>(ui_.size());
        const auto col = static_cast<std::size_t>(col_perm_[k]);
        const auto stamp = static_cast<std::int64_t>(k);

        // Reach of A(:, col) in the graph of L, in topological order xi[top..n).
        std::size_t top = n;
        for (auto p = ap[col]; p < ap[col + 1]; ++p) {
            const auto start = ai[at(p)];
            if (mark[static_cast<std::size_t>(start)] == stamp) continue;
            std::int64_t head = 0;
            stack[0] = start;
            while (head >= 0) {
                const auto j = static_cast<std::size_t>(stack[at(head)]);
                const auto jnew = row_perm_[j];
                if (mark[j] != stamp) {
                    mark[j] = stamp;
                    pstack[at(head)] = jnew < 0 ? 0 : lp_[static_cast<std::size_t>(jnew)];
                }
                bool done = true;
                const std::int64_t p2 = jnew < 0 ? 0 : lp_[static_cast<std::size_t>(jnew) + 1];
                for (auto q = pstack[at(head)]; q < p2; ++q) {
                    const auto i = li_[at(q)];
                    if (mark[static_cast<std::size_t>(i)] == stamp) continue;
                    pstack[at(head)] = q;
                    stack[at(++head)] = i;
                    done = false;
                    break;
                }
                if (done) {
                    --head;
                    xi[--top] = static_cast<std::int32_t>(j);
                }
            }
        }

        // Sparse triangular solve x = L \ A(:, col).
        for (std::size_t p = top; p < n; ++p) x[static_cast<std::size_t>(xi[p])] = 0.0;
        for (auto p = ap[col]; p < ap[col + 1]; ++p) x[static_cast<std::size_t>(ai[at(p)])] = ax[at(p)];
        for (std::size_t px = top; px < n; ++px) {
            const auto j = static_cast<std::size_t>(xi[px]);
            const auto jnew = row_perm_[j];
            if (jnew < 0) continue;
            const double xj = x[j];  // unit diagonal
            for (auto q = lp_[static_cast<std::size_t>(jnew)] + 1; q < lp_[static_cast<std::size_t>(jnew) + 1]; ++q)
                x[static_cast<std::size_t>(li_[at(q)])] -= lx_[at(q)] * xj;
        }

        std::int64_t ipiv = -1;
        double best = -1.0;
        for (std::size_t p = top; p < n; ++p) {
            const auto i = static_cast<std::size_t>(xi[p]);
            if (row_perm_[i] < 0) {
                if (std::abs(x[i]) > best) {
                    best = std::abs(x[i]);
                    ipiv = static_cast<std::int64_t>(i);
                }
            } else {
                ui_.push_back(row_perm_[i]);
                ux_.push_back(x[i]);
            }
        }
        if (ipiv < 0)
            throw SingularMatrixError("SparseLU: structurally singular at column " + std::to_string(col));
        if (row_perm_[col] < 0 && mark[col] == stamp && std::abs(x[col]) >= pivot_threshold * best)
            ipiv = static_cast<std::int64_t>(col);
        const double pivot = x[at(ipiv)];
        if (!(std::abs(pivot) > singular_tol))
            throw SingularMatrixError("SparseLU: pivot " + std::to_string(pivot) + " below tolerance at step " +
                                      std::to_string(k));
        min_pivot_ = std::min(min_pivot_, std::abs(pivot));

        ui_.push_back(static_cast<std::int32_t>(k));
        ux_.push_back(pivot);
        row_perm_[at(ipiv)] = static_cast<std::int32_t>(k);
        li_.push_back(static_cast<std::int32_t>(ipiv));
        lx_.push_back(1.0);
        for (std::size_t p = top; p < n; ++p) {
            const auto i = static_cast<std::size_t>(xi[p]);
            if (row_perm_[i] < 0) {
                li_.push_back(static_cast<std::int32_t>(i));
                lx_.push_back(x[i] / pivot);
            }
            x[i] = 0.0;
        }
    }
    lp_[n] = static_cast<std::int64_t>(li_.size());
    up_[n] = static_cast<std::int64_t>(ui_.size());
    for (auto& i : li_) i = row_perm_[static_cast<std::size_t>(i)];
    if (n == 0) min_pivot_ = 0.0;
}

std::vector<double> SparseLU::solve(std::span<const double> b) const {
    if (b.size() != n_) throw std::invalid_argument("SparseLU::solve: size mismatch");
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[static_cast<std::size_t>(row_perm_[i])] = b[i];
    for (std::size_t j = 0; j < n_; ++j) {
        const double yj = y[j];
        for (auto p = lp_[j] + 1; p < lp_[j + 1]; ++p) y[static_cast<std::size_t>(li_[at(p)])] -= lx_[at(p)] * yj;
    }
    for (std::size_t jj = n_; jj-- > 0;) {
        y[jj] /= ux_[at(up_[jj + 1] - 1)];
        const double yj = y[jj];
        for (auto p = up_[jj]; p < up_[jj + 1] - 1; ++p) y[static_cast<std::size_t>(ui_[at(p)])] -= ux_[at(p)] * yj;
    }
    std::vector<double> x(n_);
    for (std::size_t k = 0; k < n_; ++k) x[static_cast<std::size_t>(col_perm_[k])] = y[k];
    return x;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

std::vector<double> factor_solve(const SparseMatrix& a, std::span<const double> b,
                                 std::vector<std::int32_t>* ordering) {
    const SparseLU lu = (ordering && !ordering->empty()) ? SparseLU(a, *ordering) : SparseLU(a);
    if (ordering && ordering->empty()) *ordering = lu.column_ordering();
    std::vector<double> x = lu.solve(b);
    std::vector<double> r = a.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    // one step of iterative refinement
    {
        const std::vector<double> dx = lu.solve(r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dx[i];
        r = a.multiply(x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    }
    const double bound = 1e-10 * (a.frobenius_norm() * norm2(x) + norm2(b));
    const double res = norm2(r);
    if (!(res <= bound))
        throw SingularMatrixError("factor_solve: residual " + std::to_string(res) + " exceeds bound " +
                                  std::to_string(bound));
    return x;
}

}  // namespace dfh
