#include "paultrap/tridiag.hpp"

#include "paultrap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace paultrap {

TridiagonalLdlt::TridiagonalLdlt(const SymmetricTridiagonal& matrix)
{
    const std::size_t n = matrix.size();
    if (n == 0 || matrix.off.size() + 1 != n) {
        throw ValidationError("tridiagonal matrix has inconsistent band sizes");
    }
    pivot_.resize(n);
    lower_.resize(n - 1);
    min_pivot_ = std::numeric_limits<double>::infinity();

    pivot_[0] = matrix.diag[0];
    for (std::size_t i = 0;; ++i) {
        const double modulus = std::abs(pivot_[i]);
        min_pivot_ = std::min(min_pivot_, modulus);
        if (modulus == 0.0 || !std::isfinite(modulus)) {
            singular_ = true;
            return;
        }
        log_det_ += std::log(pivot_[i]);
        if (i + 1 == n) {
            break;
        }
        lower_[i] = matrix.off[i] / pivot_[i];
        pivot_[i + 1] = matrix.diag[i + 1] - lower_[i] * matrix.off[i];
    }
}

std::vector<std::complex<double>> TridiagonalLdlt::solve(std::span<const std::complex<double>> rhs) const
{
    if (singular_) {
        throw DegenerateIntegral("cannot solve with a singular factorization");
    }
    const std::size_t n = pivot_.size();
    if (rhs.size() != n) {
        throw ValidationError("right-hand side size mismatch");
    }
    std::vector<std::complex<double>> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) {
        x[i] -= lower_[i - 1] * x[i - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        x[i] /= pivot_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= lower_[i] * x[i + 1];
    }
    return x;
}

} // namespace paultrap
