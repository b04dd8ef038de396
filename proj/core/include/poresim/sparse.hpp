#pragma once

#include <vector>

namespace poresim {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Row-compressed storage of a symmetric positive definite matrix. The full
/// symmetric pattern is stored; construction rejects missing/non-positive
/// diagonal entries and any structural or value asymmetry, so a bad assembly
/// fails immediately instead of mid-solve.
class SparseSymmetricMatrix {
public:
    SparseSymmetricMatrix() = default;

    /// Builds from a triplet list carrying every nonzero (both (i,j) and
    /// (j,i)). Duplicate entries are summed.
    static SparseSymmetricMatrix from_triplets(int dimension, std::vector<Triplet> triplets);

    int dimension() const { return n_; }
    int nonzeros() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& column_indices() const { return column_indices_; }
    const std::vector<double>& values() const { return values_; }

    double diagonal(int i) const;

    /// y = A x.
    void matvec(const std::vector<double>& x, std::vector<double>& y) const;
    std::vector<double> matvec(const std::vector<double>& x) const;

private:
    void validate() const;

    int n_ = 0;
    std::vector<int> row_offsets_;
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

struct PcgOptions {
    /// Convergence criterion: ||A x - b||_2 / ||b||_2 <= tol.
    double tol = 1e-10;
    /// 0 means the default 10 * sqrt(n) + 100.
    int max_iter = 0;
    bool jacobi = true;
};

struct PcgResult {
    std::vector<double> x;
    int iterations = 0;
    double final_residual = 0.0; // relative to ||b||
};

/// Conjugate gradient with an optional Jacobi (diagonal) preconditioner.
/// b = 0 returns x = 0 in zero iterations. Throws SolverDivergence when the
/// tolerance is not met within max_iter and NonFiniteEncountered when the
/// iteration produces NaN/Inf (a sign of broken assembly). Dot products use
/// a fixed sequential order, so solves are reproducible.
PcgResult pcg_solve(const SparseSymmetricMatrix& A, const std::vector<double>& b,
                    const PcgOptions& options = {});

} // namespace poresim
