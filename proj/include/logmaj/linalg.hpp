#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "logmaj/errors.hpp"
#include "logmaj/funclass.hpp"
#include "logmaj/rng.hpp"

namespace logmaj {

/// Dense square matrix, row-major. Plain storage for eigenvector bases,
/// intermediate products and compound matrices.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {
        if (n <= 0) throw Error("matrix dimension must be positive");
    }

    static Matrix identity(int n);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    double frobenius_norm() const;
    double max_abs() const;
    Matrix transposed() const;

    std::vector<std::vector<double>> rows() const;
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

private:
    int n_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// Eigenvalues sorted non-increasing; the object all majorisation
/// comparisons run on.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
    // ref-qualified so iterating values() of a temporary cannot dangle
    const std::vector<double>& values() const& { return values_; }
    std::vector<double> values() && { return std::move(values_); }

    /// Entrywise map followed by a re-sort.
    Spectrum map(const std::function<double(double)>& fn) const;

    double min() const { return values_.back(); }
    double max() const { return values_.front(); }

private:
    std::vector<double> values_;
};

struct EigResult {
    Spectrum spectrum;
    Matrix vectors; // columns are eigenvectors, ordered to match the spectrum
};

/// Cyclic Jacobi eigensolver for symmetric input. Sweeps the upper triangle
/// in row-major order; stops when the off-diagonal Frobenius norm drops to
/// 1e-13 * ||M||_F, errors out after 100 sweeps.
EigResult jacobi_eig(const Matrix& symmetric);

/// Validated symmetric positive semidefinite matrix. Construction checks
/// symmetry to 1e-12 * max(1, ||M||_F) and the spectrum to the PSD band
/// -1e-10 * max(1, ||M||_2); eigenvalues inside the band are clamped to 0
/// and the entries rebuilt from the clamped eigensystem. The decomposition
/// is computed once and cached.
class PsdMatrix {
public:
    static PsdMatrix from_entries(const Matrix& m);
    static PsdMatrix from_eigensystem(const Matrix& vectors, std::vector<double> eigenvalues);

    int dim() const { return entries_.dim(); }
    const Matrix& entries() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }
    const Spectrum& spectrum() const { return spectrum_; }
    const Matrix& eigenvectors() const { return vectors_; }
    double trace() const;

    /// JSON exchange format {"dim": n, "entries": [[...], ...]}.
    nlohmann::json to_json() const;
    static PsdMatrix from_json(const nlohmann::json& j);

private:
    PsdMatrix(Matrix entries, Spectrum spectrum, Matrix vectors)
        : entries_(std::move(entries)), spectrum_(std::move(spectrum)), vectors_(std::move(vectors)) {}

    Matrix entries_;
    Spectrum spectrum_;
    Matrix vectors_;
};

/// Cached eigendecomposition of m.
EigResult eig_sym(const PsdMatrix& m);

/// Spectral functional calculus: f applied to the eigenvalues, same
/// eigenvectors. Errors when an eigenvalue falls outside dom(f).
PsdMatrix matrix_function(const PsdMatrix& m, const ScalarFunction& f);

/// A^{1/2} B A^{1/2}, the symmetric stand-in for the product AB.
PsdMatrix symmetrized_product(const PsdMatrix& a, const PsdMatrix& b);

/// lambda(A^{1/2} B A^{1/2}) = lambda(AB), sorted non-increasing, all >= 0.
Spectrum product_spectrum(const PsdMatrix& a, const PsdMatrix& b);

PsdMatrix mat_sqrt(const PsdMatrix& m);

/// k-th compound: matrix of all k x k minors, rows and columns indexed by
/// k-subsets in lexicographic order. Realizes the k-th antisymmetric tensor
/// power; eigenvalues are the k-fold products of distinct eigenvalues.
PsdMatrix compound(const PsdMatrix& m, int k);
Matrix compound_general(const Matrix& m, int k);

/// Eigenvalues drawn uniformly from [lo, hi], conjugated by a random
/// orthogonal matrix (QR of a Gaussian matrix, sign-fixed). Deterministic
/// for a fixed seed.
PsdMatrix random_psd(int dim, double lo, double hi, std::uint64_t seed);
PsdMatrix random_psd(int dim, double lo, double hi, Rng& rng);
Matrix random_orthogonal(int dim, Rng& rng);

/// (r1, r2) share one random eigenbasis, (s1, s2) another.
struct CommutingQuadruple {
    CommutingQuadruple(PsdMatrix r1_in, PsdMatrix r2_in, PsdMatrix s1_in, PsdMatrix s2_in);

    PsdMatrix r1, r2, s1, s2;
};

CommutingQuadruple random_commuting_quadruple(int dim, double lo, double hi, std::uint64_t seed);

double commutator_frobenius(const Matrix& a, const Matrix& b);

std::uint64_t binomial(int n, int k);

} // namespace logmaj
