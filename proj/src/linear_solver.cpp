#include "tsplate/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <stdexcept>

#ifdef TSPLATE_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#else
#include <Eigen/SparseCholesky>
#endif

namespace tsplate {

LinearSolverKind linear_solver_from_string(const std::string& s) {
    if (s == "cholesky") return LinearSolverKind::Cholesky;
    if (s == "cg" || s == "pcg") return LinearSolverKind::ConjugateGradient;
    throw std::invalid_argument("unknown linear solver \"" + s + "\"");
}

struct SpdSolver::Impl {
    LinearSolverKind kind;
    double tol;
#ifdef TSPLATE_HAVE_CHOLMOD
    Eigen::CholmodSupernodalLLT<SpMat, Eigen::Lower> chol;
#else
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower> chol;
#endif
    Eigen::ConjugateGradient<SpMat, Eigen::Lower, Eigen::IncompleteCholesky<double, Eigen::Lower>> cg;
    SpMat a;
};

SpdSolver::SpdSolver(LinearSolverKind kind, double tolerance) : impl_(std::make_unique<Impl>()) {
    impl_->kind = kind;
    impl_->tol = tolerance;
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

std::string SpdSolver::backend_name(LinearSolverKind kind) {
    if (kind == LinearSolverKind::ConjugateGradient) return "pcg-ichol";
#ifdef TSPLATE_HAVE_CHOLMOD
    return "cholmod-supernodal";
#else
    return "eigen-simplicial-ldlt";
#endif
}

void SpdSolver::factor(const SpMat& a) {
    if (impl_->kind == LinearSolverKind::Cholesky) {
        impl_->chol.compute(a);
        if (impl_->chol.info() != Eigen::Success)
            throw std::runtime_error("stiffness factorization failed (matrix not positive definite)");
    } else {
        impl_->a = a;
        impl_->cg.setTolerance(impl_->tol);
        impl_->cg.setMaxIterations(std::max<Eigen::Index>(1000, 4 * a.rows()));
        impl_->cg.compute(impl_->a);
        if (impl_->cg.info() != Eigen::Success) throw std::runtime_error("preconditioner setup failed");
    }
}

VecX SpdSolver::solve(const VecX& b, const VecX* guess) {
    if (b.size() == 0) return b;
    if (impl_->kind == LinearSolverKind::Cholesky) {
        VecX x = impl_->chol.solve(b);
        if (impl_->chol.info() != Eigen::Success) throw std::runtime_error("triangular solve failed");
        return x;
    }
    VecX x;
    if (guess)
        x = impl_->cg.solveWithGuess(b, *guess);
    else
        x = impl_->cg.solve(b);
    if (impl_->cg.info() != Eigen::Success)
        throw std::runtime_error("conjugate gradients did not converge (error " + std::to_string(impl_->cg.error()) + ")");
    return x;
}

}  // namespace tsplate
