#pragma once

#include <complex>
#include <span>
#include <vector>

namespace paultrap {

/// Complex symmetric (not Hermitian) tridiagonal matrix.
struct SymmetricTridiagonal {
    std::vector<std::complex<double>> diag;
    std::vector<std::complex<double>> off; ///< off[i] = A(i, i+1) = A(i+1, i)

    std::size_t size() const noexcept { return diag.size(); }
};

/// Unpivoted A = L D L^T. Stable for matrices with positive semidefinite
/// Hermitian part, whose Schur complements keep that property.
class TridiagonalLdlt {
public:
    explicit TridiagonalLdlt(const SymmetricTridiagonal& matrix);

    /// Sum of principal-branch logs of the pivots.
    std::complex<double> log_det() const noexcept { return log_det_; }
    double min_pivot_modulus() const noexcept { return min_pivot_; }
    const std::vector<std::complex<double>>& pivots() const noexcept { return pivot_; }
    bool singular() const noexcept { return singular_; }

    std::vector<std::complex<double>> solve(std::span<const std::complex<double>> rhs) const;

private:
    std::vector<std::complex<double>> pivot_;
    std::vector<std::complex<double>> lower_;
    std::complex<double> log_det_;
    double min_pivot_ = 0.0;
    bool singular_ = false;
};

} // namespace paultrap
