#include <doctest.h>

#include <random>

#include "tsplate/scaled_gradient.hpp"
#include "tsplate/sym_tensor.hpp"

using namespace tsplate;

namespace {

Sym3 random_sym3(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
}

double max_abs(const Sym3& a) { return a.mandel().cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("dev3") {
    CHECK(max_abs(dev3(Sym3::identity())) <= 1e-15);
    const Sym3 d = dev3(Sym3::diag(1, 2, 3));
    CHECK(d.a11 == doctest::Approx(-1));
    CHECK(d.a22 == doctest::Approx(0));
    CHECK(d.a33 == doctest::Approx(1));

    std::mt19937 rng(3);
    for (int k = 0; k < 200; ++k) {
        const Sym3 a = random_sym3(rng);
        CHECK(std::abs(dev3(a).trace()) <= 1e-14 * a.norm());
        const Sym3 d0 = dev3(a);
        CHECK(max_abs(dev3(d0) - d0) <= 1e-15);
    }
}

TEST_CASE("sym_outer norms") {
    const Sym3 a = sym_outer(Vec3(Vec3::UnitX()), Vec3(Vec3::UnitY()));
    CHECK(a.a12 == doctest::Approx(0.5));
    CHECK(a.matrix()(1, 0) == doctest::Approx(0.5));
    CHECK(a.norm() == doctest::Approx(1 / std::sqrt(2.0)));
    const Sym3 b = sym_outer(Vec3(Vec3::UnitX()), Vec3(Vec3::UnitX()));
    CHECK(b.a11 == 1);
    CHECK(b.norm() == doctest::Approx(1));
    CHECK(sym_outer(Vec3(Vec3::Zero()), Vec3(1, 2, 3)).norm() == 0);

    std::mt19937 rng(5);
    std::normal_distribution<double> n;
    for (int k = 0; k < 100; ++k) {
        const Vec3 u(n(rng), n(rng), n(rng)), v(n(rng), n(rng), n(rng));
        const double s = sym_outer(u, v).norm();
        CHECK(s >= u.norm() * v.norm() / std::sqrt(2.0) - 1e-12);
        CHECK(s <= u.norm() * v.norm() + 1e-12);
    }
}

TEST_CASE("lambda_h") {
    std::mt19937 rng(7);
    const Sym3 x = random_sym3(rng);
    CHECK(max_abs(lambda_h(x, 1.0) - x) == 0);

    Sym3 e13;
    e13.a13 = 1;
    CHECK(lambda_h(e13, 0.5).a13 == doctest::Approx(2));
    const Sym3 li = lambda_h(Sym3::identity(), 0.5);
    CHECK(li.a11 == 1);
    CHECK(li.a22 == 1);
    CHECK(li.a33 == doctest::Approx(4));

    const Sym3 y = random_sym3(rng);
    const Sym3 lhs = lambda_h(2.0 * x + (-3.0) * y, 0.3);
    const Sym3 rhs = 2.0 * lambda_h(x, 0.3) + (-3.0) * lambda_h(y, 0.3);
    CHECK(max_abs(lhs - rhs) <= 1e-13);

    const Mandel3 f = lambda_h_factors(0.25);
    CHECK(max_abs(Sym3::from_mandel(f.cwiseProduct(x.mandel())) - lambda_h(x, 0.25)) <= 1e-14);
    CHECK_THROWS_AS(lambda_h(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_h(x, -1.0), std::invalid_argument);
}

TEST_CASE("scaled_sym_gradient") {
    const GridShape shape{5, 4, 3};
    const ScaledGradientStencil st{0.25, 0.5, 0.5, 0.1};
    auto pos = [&](int i, int j, int k) { return Vec3(i * st.dx1, j * st.dx2, -0.5 + k * st.dx3); };
    std::vector<Vec3> v(shape.size());

    SUBCASE("constant") {
        for (auto& x : v) x = Vec3(1, -2, 3);
        for (const auto& e : scaled_sym_gradient(st, shape, v)) CHECK(e.norm() <= 1e-14);
    }
    SUBCASE("transverse stretch") {
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 5; ++i) v[shape.index(i, j, k)] = Vec3(0, 0, pos(i, j, k)[2]);
        for (const auto& e : scaled_sym_gradient(st, shape, v)) {
            CHECK(e.a33 == doctest::Approx(10).epsilon(1e-12));
            CHECK(std::abs(e.a11) + std::abs(e.a13) + std::abs(e.a23) <= 1e-12);
        }
    }
    SUBCASE("in-plane shear") {
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 5; ++i) {
                    const Vec3 x = pos(i, j, k);
                    v[shape.index(i, j, k)] = Vec3(x[1], x[0], 0);
                }
        for (const auto& e : scaled_sym_gradient(st, shape, v)) {
            CHECK(e.a12 == doctest::Approx(1).epsilon(1e-12));
            CHECK(std::abs(e.a11) + std::abs(e.a22) + std::abs(e.a33) + std::abs(e.a13) + std::abs(e.a23) <= 1e-12);
        }
    }
    SUBCASE("affine field") {
        Eigen::Matrix3d g;
        g << 0.3, -1.2, 0.7, 2.0, 0.1, -0.4, 0.5, 0.9, -1.1;
        const Vec3 c(0.2, 0.4, -0.3);
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 5; ++i) v[shape.index(i, j, k)] = g * pos(i, j, k) + c;
        Eigen::Matrix3d gs = g;
        gs.col(2) /= st.h;
        const Sym3 ref = Sym3::from_matrix(0.5 * (gs + gs.transpose()));
        for (const auto& e : scaled_sym_gradient(st, shape, v)) CHECK(max_abs(e - ref) <= 1e-12);
    }
    SUBCASE("errors") {
        CHECK_THROWS(scaled_sym_gradient(st, GridShape{1, 4, 3}, std::vector<Vec3>(12)));
        CHECK_THROWS(scaled_sym_gradient(st, shape, std::vector<Vec3>(3)));
    }
}

TEST_CASE("minor and embedding") {
    const Sym2 i2 = minor2(Sym3::identity());
    CHECK(i2.a11 == 1);
    CHECK(i2.a22 == 1);
    CHECK(i2.a12 == 0);
    const Sym3 e = embed2to3(Sym2::identity());
    CHECK(max_abs(e - Sym3::diag(1, 1, 0)) == 0);
    const Sym2 b{0.3, -0.7, 1.9};
    const Sym2 r = minor2(embed2to3(b));
    CHECK(r.a11 == b.a11);
    CHECK(r.a22 == b.a22);
    CHECK(r.a12 == b.a12);
}

TEST_CASE("Frobenius product") {
    std::mt19937 rng(11);
    for (int k = 0; k < 50; ++k) {
        const Sym3 a = random_sym3(rng), b = random_sym3(rng);
        CHECK(contract(a, b) == doctest::Approx(contract(b, a)));
        CHECK(contract(a, b) == doctest::Approx((a.matrix().cwiseProduct(b.matrix())).sum()));
        CHECK(contract(a, a) > 0);
        CHECK(a.mandel().dot(b.mandel()) == doctest::Approx(contract(a, b)));
    }
    const Sym2 x{1, 2, 3}, y{-1, 0.5, 2};
    CHECK(contract(x, y) == doctest::Approx((x.matrix().cwiseProduct(y.matrix())).sum()));
}

TEST_CASE("deviatoric basis is orthonormal and trace-free") {
    const auto& b = deviatoric_basis();
    CHECK((b.transpose() * b - Eigen::Matrix<double, 5, 5>::Identity()).norm() <= 1e-14);
    for (int c = 0; c < 5; ++c) CHECK(std::abs(b(0, c) + b(1, c) + b(2, c)) <= 1e-15);
    std::mt19937 rng(2);
    const Sym3 a = random_sym3(rng);
    CHECK(max_abs(from_dev5(to_dev5(a)) - dev3(a)) <= 1e-14);
}
