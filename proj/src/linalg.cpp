#include "logmaj/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace logmaj {

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double s = 0.0;
    for (double v : a_) s = std::max(s, std::abs(v));
    return s;
}

Matrix Matrix::transposed() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (int i = 0; i < n_; ++i) {
        out[i].assign(a_.begin() + static_cast<size_t>(i) * n_, a_.begin() + static_cast<size_t>(i + 1) * n_);
    }
    return out;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) throw Error("matrix rows must all have length dim");
        for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension mismatch in matrix product");
    const int n = a.dim();
    Matrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension mismatch in matrix sum");
    Matrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension mismatch in matrix difference");
    Matrix c(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("spectrum must be non-empty");
    std::sort(values_.begin(), values_.end(), std::greater<double>());
}

Spectrum Spectrum::map(const std::function<double(double)>& fn) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (double v : values_) out.push_back(fn(v));
    return Spectrum(std::move(out));
}

EigResult jacobi_eig(const Matrix& m) {
    const int n = m.dim();
    Matrix a = m;
    Matrix v = Matrix::identity(n);

    const double norm = m.frobenius_norm();
    const double target = 1e-13 * norm;

    auto off_norm = [&a, n]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    bool converged = off_norm() <= target;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        converged = off_norm() <= target;
    }
    if (!converged) throw Error("jacobi eigensolver did not converge within 100 sweeps");

    // sort eigenvalues non-increasing, permute eigenvector columns to match
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&a](int i, int j) { return a(i, i) > a(j, j); });

    std::vector<double> eigs(n);
    Matrix vs(n);
    for (int col = 0; col < n; ++col) {
        eigs[col] = a(order[col], order[col]);
        for (int i = 0; i < n; ++i) vs(i, col) = v(i, order[col]);
    }
    return EigResult{Spectrum(std::move(eigs)), std::move(vs)};
}

namespace {

Matrix rebuild(const Matrix& vectors, const std::vector<double>& eigs) {
    const int n = vectors.dim();
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += vectors(i, k) * eigs[static_cast<size_t>(k)] * vectors(j, k);
            m(i, j) = s;
            m(j, i) = s;
        }
    }
    return m;
}

} // namespace

PsdMatrix PsdMatrix::from_entries(const Matrix& m) {
    const int n = m.dim();
    const double fnorm = m.frobenius_norm();
    const double sym_tol = 1e-12 * std::max(1.0, fnorm);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > sym_tol) {
                throw Error("matrix is not symmetric: |a[" + std::to_string(i) + "][" + std::to_string(j) +
                            "] - a[" + std::to_string(j) + "][" + std::to_string(i) + "]| = " +
                            std::to_string(std::abs(m(i, j) - m(j, i))));
            }
        }
    }
    Matrix sym(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (m(i, j) + m(j, i));

    EigResult eig = jacobi_eig(sym);
    const double spectral_norm = std::max(std::abs(eig.spectrum.max()), std::abs(eig.spectrum.min()));
    const double band = 1e-10 * std::max(1.0, spectral_norm);
    std::vector<double> eigs = eig.spectrum.values();
    for (double& lambda : eigs) {
        if (lambda < -band) {
            throw Error("matrix is not positive semidefinite: eigenvalue " + std::to_string(lambda) +
                        " below the tolerance band " + std::to_string(-band));
        }
        if (lambda < 0.0) lambda = 0.0;
    }
    Matrix entries = rebuild(eig.vectors, eigs);
    return PsdMatrix(std::move(entries), Spectrum(std::move(eigs)), std::move(eig.vectors));
}

PsdMatrix PsdMatrix::from_eigensystem(const Matrix& vectors, std::vector<double> eigenvalues) {
    const int n = vectors.dim();
    if (static_cast<int>(eigenvalues.size()) != n) throw Error("eigenvalue count must match dimension");
    double spectral_norm = 0.0;
    for (double lambda : eigenvalues) spectral_norm = std::max(spectral_norm, std::abs(lambda));
    const double band = 1e-10 * std::max(1.0, spectral_norm);
    for (double& lambda : eigenvalues) {
        if (lambda < -band) {
            throw Error("eigensystem is not positive semidefinite: eigenvalue " + std::to_string(lambda));
        }
        if (lambda < 0.0) lambda = 0.0;
    }
    // sort by eigenvalue, keep columns aligned
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&eigenvalues](int i, int j) { return eigenvalues[i] > eigenvalues[j]; });
    std::vector<double> sorted(n);
    Matrix vs(n);
    for (int col = 0; col < n; ++col) {
        sorted[col] = eigenvalues[order[col]];
        for (int i = 0; i < n; ++i) vs(i, col) = vectors(i, order[col]);
    }
    Matrix entries = rebuild(vs, sorted);
    return PsdMatrix(std::move(entries), Spectrum(std::move(sorted)), std::move(vs));
}

double PsdMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += entries_(i, i);
    return s;
}

nlohmann::json PsdMatrix::to_json() const {
    return nlohmann::json{{"dim", dim()}, {"entries", entries_.rows()}};
}

PsdMatrix PsdMatrix::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
        throw Error("matrix JSON must be an object with 'dim' and 'entries'");
    }
    const int n = j.at("dim").get<int>();
    auto rows = j.at("entries").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n) throw Error("matrix JSON: entries row count differs from dim");
    return from_entries(Matrix::from_rows(rows));
}

EigResult eig_sym(const PsdMatrix& m) { return EigResult{m.spectrum(), m.eigenvectors()}; }

PsdMatrix matrix_function(const PsdMatrix& m, const ScalarFunction& f) {
    std::vector<double> mapped;
    mapped.reserve(static_cast<size_t>(m.dim()));
    for (double lambda : m.spectrum().values()) {
        const double x = std::max(lambda, 0.0);
        if (!f.in_domain(x)) {
            throw Error("matrix_function: eigenvalue " + std::to_string(x) + " outside dom(" + f.label() + ")");
        }
        mapped.push_back(f(x));
    }
    return PsdMatrix::from_eigensystem(m.eigenvectors(), std::move(mapped));
}

PsdMatrix symmetrized_product(const PsdMatrix& a, const PsdMatrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension mismatch in product");
    const PsdMatrix s = mat_sqrt(a);
    Matrix p = s.entries() * b.entries() * s.entries();
    // exact symmetrisation; roundoff is the only asymmetry source here
    for (int i = 0; i < p.dim(); ++i) {
        for (int j = i + 1; j < p.dim(); ++j) {
            const double v = 0.5 * (p(i, j) + p(j, i));
            p(i, j) = v;
            p(j, i) = v;
        }
    }
    return PsdMatrix::from_entries(p);
}

Spectrum product_spectrum(const PsdMatrix& a, const PsdMatrix& b) {
    return symmetrized_product(a, b).spectrum();
}

PsdMatrix mat_sqrt(const PsdMatrix& m) {
    std::vector<double> roots;
    roots.reserve(static_cast<size_t>(m.dim()));
    for (double lambda : m.spectrum().values()) roots.push_back(std::sqrt(std::max(lambda, 0.0)));
    return PsdMatrix::from_eigensystem(m.eigenvectors(), std::move(roots));
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return c;
}

namespace {

std::vector<std::vector<int>> k_subsets_lex(int n, int k) {
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        subsets.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return subsets;
}

double minor_det(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int k = static_cast<int>(rows.size());
    std::vector<double> a(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a[static_cast<size_t>(i) * k + j] = m(rows[i], cols[j]);

    // LU with partial pivoting
    double det = 1.0;
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
            if (std::abs(a[static_cast<size_t>(r) * k + col]) > std::abs(a[static_cast<size_t>(pivot) * k + col]))
                pivot = r;
        }
        if (a[static_cast<size_t>(pivot) * k + col] == 0.0) return 0.0;
        if (pivot != col) {
            for (int j = 0; j < k; ++j)
                std::swap(a[static_cast<size_t>(pivot) * k + j], a[static_cast<size_t>(col) * k + j]);
            det = -det;
        }
        const double d = a[static_cast<size_t>(col) * k + col];
        det *= d;
        for (int r = col + 1; r < k; ++r) {
            const double factor = a[static_cast<size_t>(r) * k + col] / d;
            for (int j = col; j < k; ++j)
                a[static_cast<size_t>(r) * k + j] -= factor * a[static_cast<size_t>(col) * k + j];
        }
    }
    return det;
}

} // namespace

Matrix compound_general(const Matrix& m, int k) {
    const int n = m.dim();
    if (k < 1 || k > n) throw Error("compound order k must satisfy 1 <= k <= dim");
    if (k == 1) return m;
    const auto subsets = k_subsets_lex(n, k);
    const int cn = static_cast<int>(subsets.size());
    Matrix c(cn);
    for (int i = 0; i < cn; ++i)
        for (int j = 0; j < cn; ++j) c(i, j) = minor_det(m, subsets[i], subsets[j]);
    return c;
}

PsdMatrix compound(const PsdMatrix& m, int k) {
    return PsdMatrix::from_entries(compound_general(m.entries(), k));
}

Matrix random_orthogonal(int dim, Rng& rng) {
    // QR of a Gaussian matrix via Householder reflections; column signs fixed
    // by the sign of the R diagonal so the result is unique and deterministic.
    const int n = dim;
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();

    Matrix q = Matrix::identity(n);
    for (int col = 0; col < n; ++col) {
        // Householder vector for column col below the diagonal
        double norm = 0.0;
        for (int i = col; i < n; ++i) norm += a(i, col) * a(i, col);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = a(col, col) >= 0.0 ? -norm : norm;
        std::vector<double> v(static_cast<size_t>(n), 0.0);
        v[static_cast<size_t>(col)] = a(col, col) - alpha;
        for (int i = col + 1; i < n; ++i) v[static_cast<size_t>(i)] = a(i, col);
        double vnorm2 = 0.0;
        for (int i = col; i < n; ++i) vnorm2 += v[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
        if (vnorm2 == 0.0) continue;

        auto apply = [&](Matrix& m_) {
            for (int j = 0; j < n; ++j) {
                double dot = 0.0;
                for (int i = col; i < n; ++i) dot += v[static_cast<size_t>(i)] * m_(i, j);
                const double scale = 2.0 * dot / vnorm2;
                for (int i = col; i < n; ++i) m_(i, j) -= scale * v[static_cast<size_t>(i)];
            }
        };
        apply(a);
        apply(q); // accumulates H_k ... H_1; Q = (H_k ... H_1)^T
    }
    Matrix orth = q.transposed();
    // sign fix: make diag(R) positive
    for (int j = 0; j < n; ++j) {
        if (a(j, j) < 0.0) {
            for (int i = 0; i < n; ++i) orth(i, j) = -orth(i, j);
        }
    }
    return orth;
}

PsdMatrix random_psd(int dim, double lo, double hi, Rng& rng) {
    if (dim <= 0) throw Error("dimension must be positive");
    if (!(lo >= 0.0) || !(hi >= lo)) throw Error("invalid eigenvalue interval: need 0 <= lo <= hi");
    std::vector<double> eigs(static_cast<size_t>(dim));
    for (double& lambda : eigs) lambda = rng.next_uniform(lo, hi);
    const Matrix v = random_orthogonal(dim, rng);
    return PsdMatrix::from_eigensystem(v, std::move(eigs));
}

PsdMatrix random_psd(int dim, double lo, double hi, std::uint64_t seed) {
    Rng rng(seed);
    return random_psd(dim, lo, hi, rng);
}

CommutingQuadruple::CommutingQuadruple(PsdMatrix r1_in, PsdMatrix r2_in, PsdMatrix s1_in, PsdMatrix s2_in)
    : r1(std::move(r1_in)), r2(std::move(r2_in)), s1(std::move(s1_in)), s2(std::move(s2_in)) {
    if (r1.dim() != r2.dim() || r1.dim() != s1.dim() || r1.dim() != s2.dim()) {
        throw Error("quadruple members must share one dimension");
    }
    const double tol_r =
        1e-10 * std::max(1.0, r1.entries().frobenius_norm() * r2.entries().frobenius_norm());
    if (commutator_frobenius(r1.entries(), r2.entries()) > tol_r) {
        throw Error("R1 and R2 do not commute within tolerance");
    }
    const double tol_s =
        1e-10 * std::max(1.0, s1.entries().frobenius_norm() * s2.entries().frobenius_norm());
    if (commutator_frobenius(s1.entries(), s2.entries()) > tol_s) {
        throw Error("S1 and S2 do not commute within tolerance");
    }
}

double commutator_frobenius(const Matrix& a, const Matrix& b) {
    return (a * b - b * a).frobenius_norm();
}

CommutingQuadruple random_commuting_quadruple(int dim, double lo, double hi, std::uint64_t seed) {
    Rng rng(seed);
    const Matrix vr = random_orthogonal(dim, rng);
    std::vector<double> d1(static_cast<size_t>(dim)), d2(static_cast<size_t>(dim));
    for (double& x : d1) x = rng.next_uniform(lo, hi);
    for (double& x : d2) x = rng.next_uniform(lo, hi);
    PsdMatrix r1 = PsdMatrix::from_eigensystem(vr, d1);
    PsdMatrix r2 = PsdMatrix::from_eigensystem(vr, d2);

    const Matrix vs = random_orthogonal(dim, rng);
    std::vector<double> e1(static_cast<size_t>(dim)), e2(static_cast<size_t>(dim));
    for (double& x : e1) x = rng.next_uniform(lo, hi);
    for (double& x : e2) x = rng.next_uniform(lo, hi);
    PsdMatrix s1 = PsdMatrix::from_eigensystem(vs, e1);
    PsdMatrix s2 = PsdMatrix::from_eigensystem(vs, e2);

    return CommutingQuadruple(std::move(r1), std::move(r2), std::move(s1), std::move(s2));
}

} // namespace logmaj
