#include "hermat/linalg.hpp"

#include <Eigen/Dense>

namespace hermat {

double min_hermitian_eigenvalue(const ComplexMatrix& m)
{
    const auto n = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXcd h(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            h(i, j) = 0.5 * (m(ui, uj) + std::conj(m(uj, ui)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace hermat
