#pragma once

#include <memory>
#include <string>

#include "tsplate/discretization.hpp"

namespace tsplate {

enum class LinearSolverKind { Cholesky, ConjugateGradient };

LinearSolverKind linear_solver_from_string(const std::string& s);

//! SPD solver factored once and reused for many right-hand sides.
class SpdSolver {
public:
    SpdSolver(LinearSolverKind kind, double tolerance);
    ~SpdSolver();
    SpdSolver(const SpdSolver&) = delete;
    SpdSolver& operator=(const SpdSolver&) = delete;
    SpdSolver(SpdSolver&&) noexcept;
    SpdSolver& operator=(SpdSolver&&) noexcept;

    //! Throws std::runtime_error when the matrix is not positive definite.
    void factor(const SpMat& a);
    //! Throws std::runtime_error when an iterative solve does not reach the tolerance.
    VecX solve(const VecX& b, const VecX* guess = nullptr);

    static std::string backend_name(LinearSolverKind kind);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tsplate
