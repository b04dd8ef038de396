#include "poresim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poresim/errors.hpp"

namespace poresim {

SparseSymmetricMatrix SparseSymmetricMatrix::from_triplets(int dimension,
                                                           std::vector<Triplet> triplets) {
    if (dimension <= 0) throw DomainError("matrix dimension must be positive");
    for (const Triplet& t : triplets) {
        if (t.row < 0 || t.row >= dimension || t.col < 0 || t.col >= dimension)
            throw DomainError("triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseSymmetricMatrix m;
    m.n_ = dimension;
    m.row_offsets_.assign(static_cast<size_t>(dimension) + 1, 0);
    m.column_indices_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (size_t k = 0; k < triplets.size();) {
        const int row = triplets[k].row;
        const int col = triplets[k].col;
        double value = 0.0;
        while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col)
            value += triplets[k++].value;
        m.column_indices_.push_back(col);
        m.values_.push_back(value);
        ++m.row_offsets_[static_cast<size_t>(row) + 1];
    }
    for (int i = 0; i < dimension; ++i)
        m.row_offsets_[static_cast<size_t>(i) + 1] += m.row_offsets_[static_cast<size_t>(i)];
    m.validate();
    return m;
}

void SparseSymmetricMatrix::validate() const {
    for (int i = 0; i < n_; ++i) {
        bool diag_found = false;
        for (int k = row_offsets_[static_cast<size_t>(i)]; k < row_offsets_[static_cast<size_t>(i) + 1]; ++k) {
            const int j = column_indices_[static_cast<size_t>(k)];
            const double v = values_[static_cast<size_t>(k)];
            if (j == i) {
                if (!(v > 0.0))
                    throw ValidationError("non-positive diagonal at row " + std::to_string(i));
                diag_found = true;
                continue;
            }
            // Mirror entry must exist with the same value.
            bool mirrored = false;
            for (int m = row_offsets_[static_cast<size_t>(j)]; m < row_offsets_[static_cast<size_t>(j) + 1]; ++m) {
                if (column_indices_[static_cast<size_t>(m)] == i) {
                    if (values_[static_cast<size_t>(m)] != v)
                        throw ValidationError("asymmetric values at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")");
                    mirrored = true;
                    break;
                }
            }
            if (!mirrored)
                throw ValidationError("missing mirror entry for (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
        if (!diag_found) throw ValidationError("missing diagonal at row " + std::to_string(i));
    }
}

double SparseSymmetricMatrix::diagonal(int i) const {
    for (int k = row_offsets_[static_cast<size_t>(i)]; k < row_offsets_[static_cast<size_t>(i) + 1]; ++k)
        if (column_indices_[static_cast<size_t>(k)] == i) return values_[static_cast<size_t>(k)];
    return 0.0;
}

void SparseSymmetricMatrix::matvec(const std::vector<double>& x, std::vector<double>& y) const {
    if (static_cast<int>(x.size()) != n_)
        throw DimensionMismatch("matvec: vector length " + std::to_string(x.size()) +
                                " does not match dimension " + std::to_string(n_));
    y.assign(static_cast<size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (int k = row_offsets_[static_cast<size_t>(i)]; k < row_offsets_[static_cast<size_t>(i) + 1]; ++k)
            sum += values_[static_cast<size_t>(k)] * x[static_cast<size_t>(column_indices_[static_cast<size_t>(k)])];
        y[static_cast<size_t>(i)] = sum;
    }
}

std::vector<double> SparseSymmetricMatrix::matvec(const std::vector<double>& x) const {
    std::vector<double> y;
    matvec(x, y);
    return y;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace

PcgResult pcg_solve(const SparseSymmetricMatrix& A, const std::vector<double>& b,
                    const PcgOptions& options) {
    const int n = A.dimension();
    if (static_cast<int>(b.size()) != n)
        throw DimensionMismatch("pcg_solve: rhs length does not match dimension");
    if (!(options.tol > 0.0)) throw DomainError("pcg tolerance must be positive");

    PcgResult result;
    result.x.assign(static_cast<size_t>(n), 0.0);

    const double b_norm = norm2(b);
    if (!std::isfinite(b_norm)) throw NonFiniteEncountered("pcg_solve: rhs is not finite");
    if (b_norm == 0.0) return result;

    const int max_iter = options.max_iter > 0
                             ? options.max_iter
                             : static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 100;

    std::vector<double> inv_diag(static_cast<size_t>(n), 1.0);
    if (options.jacobi)
        for (int i = 0; i < n; ++i) inv_diag[static_cast<size_t>(i)] = 1.0 / A.diagonal(i);

    std::vector<double> r = b; // x0 = 0
    std::vector<double> z(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) z[static_cast<size_t>(i)] = inv_diag[static_cast<size_t>(i)] * r[static_cast<size_t>(i)];
    std::vector<double> p = z;
    std::vector<double> q(static_cast<size_t>(n));
    double rz = dot(r, z);

    for (int iter = 1; iter <= max_iter; ++iter) {
        A.matvec(p, q);
        const double pq = dot(p, q);
        if (!std::isfinite(pq) || pq == 0.0)
            throw NonFiniteEncountered("pcg_solve: breakdown at iteration " + std::to_string(iter));
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) {
            result.x[static_cast<size_t>(i)] += alpha * p[static_cast<size_t>(i)];
            r[static_cast<size_t>(i)] -= alpha * q[static_cast<size_t>(i)];
        }
        const double rel = norm2(r) / b_norm;
        if (!std::isfinite(rel))
            throw NonFiniteEncountered("pcg_solve: non-finite residual at iteration " +
                                       std::to_string(iter));
        if (rel <= options.tol) {
            result.iterations = iter;
            result.final_residual = rel;
            return result;
        }
        for (int i = 0; i < n; ++i)
            z[static_cast<size_t>(i)] = inv_diag[static_cast<size_t>(i)] * r[static_cast<size_t>(i)];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i)
            p[static_cast<size_t>(i)] = z[static_cast<size_t>(i)] + beta * p[static_cast<size_t>(i)];
    }

    throw SolverDivergence("pcg_solve: no convergence after " + std::to_string(max_iter) +
                           " iterations (relative residual " + std::to_string(norm2(r) / b_norm) +
                           ")");
}

} // namespace poresim
