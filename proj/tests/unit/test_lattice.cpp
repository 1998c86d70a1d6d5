#include "doctest.h"

#include <cmath>
#include <limits>

#include "cfal/error.hpp"
#include "cfal/lattice.hpp"
#include "cfal/seeding.hpp"

using namespace cfal;

namespace {

Eigen::MatrixXd random_basis(Rng& rng, int dim)
{
    GaussianSource g(rng);
    Eigen::MatrixXd b(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            b(r, c) = g();
    return b;
}

// brute force closest point over a box of coordinates
double box_closest(const Eigen::MatrixXd& b, const Eigen::VectorXd& target, int bound)
{
    const int dim = static_cast<int>(b.cols());
    Eigen::VectorXi x = Eigen::VectorXi::Constant(dim, -bound);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        best = std::min(best, (b * x.cast<double>() - target).squaredNorm());
        int k = 0;
        while (k < dim && x(k) == bound)
            x(k++) = -bound;
        if (k == dim)
            break;
        ++x(k);
    }
    return best;
}

}  // namespace

TEST_CASE("LLL keeps the lattice and satisfies the Lovasz condition")
{
    Rng rng = trial_rng(7, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int dim = 2 + rep % 5;
        Eigen::MatrixXd b = random_basis(rng, dim);
        // skew it so reduction has work to do
        for (int c = 1; c < dim; ++c)
            b.col(c) += 7.0 * b.col(c - 1);
        const auto res = lll_reduce(b);
        CHECK((b * res.transform.cast<double>() - res.basis).norm() < 1e-8 * b.norm());
        CHECK(std::abs(std::abs(res.transform.cast<double>().determinant()) - 1.0) < 1e-9);
        CHECK(lattice_volume(res.basis) == doctest::Approx(lattice_volume(b)).epsilon(1e-9));

        const Eigen::VectorXd gs = gram_schmidt_norms(res.basis);
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(res.basis);
        const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int k = 1; k < dim; ++k) {
            const double mu = r(k - 1, k) / r(k - 1, k - 1);
            CHECK(std::abs(mu) <= 0.5 + 1e-9);
            CHECK(gs(k) >= (0.99 - mu * mu) * gs(k - 1) * (1 - 1e-9));
        }
    }
}

TEST_CASE("LLL rejects dependent columns")
{
    Eigen::MatrixXd b(2, 2);
    b << 1, 2, 2, 4;
    CHECK_THROWS_AS(lll_reduce(b), Error);
}

TEST_CASE("closest_vector agrees with a box search")
{
    Rng rng = trial_rng(11, 0);
    for (int rep = 0; rep < 60; ++rep) {
        const int dim = 2 + rep % 3;
        const Eigen::MatrixXd b = random_basis(rng, dim) + 2.0 * Eigen::MatrixXd::Identity(dim, dim);
        const LatticeEnumerator en(b);
        Eigen::VectorXd target(dim);
        GaussianSource g(rng);
        for (int i = 0; i < dim; ++i)
            target(i) = 3.0 * g();
        const auto cv = en.closest_vector(target);
        CHECK(cv.dist_sq == doctest::Approx((b * cv.coords.cast<double>() - target).squaredNorm()));
        CHECK(cv.dist_sq <= box_closest(b, target, 6) + 1e-9);
    }
}

TEST_CASE("enumerate_ball lists every short vector once")
{
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    const LatticeEnumerator en(id);
    int count = 0;
    en.enumerate_ball(1.0 + 1e-9, [&](const IntVector& x, double d2) {
        CHECK(x.cwiseAbs().sum() == 1);
        CHECK(d2 == doctest::Approx(1.0));
        ++count;
        return 1.0 + 1e-9;
    });
    CHECK(count == 6);

    count = 0;
    en.enumerate_ball(2.0 + 1e-9, [&](const IntVector&, double) {
        ++count;
        return 2.0 + 1e-9;
    });
    CHECK(count == 6 + 12);
}

TEST_CASE("hermite_basis spans the same lattice")
{
    IntMatrix gens(4, 2);
    gens << 11, 0, -4, 1, 7, 1, 22, 22;
    const IntMatrix h = hermite_basis(gens);
    REQUIRE(h.rows() == 2);
    CHECK(std::llabs(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) == 11);

    IntMatrix id(2, 2);
    id << 3, 0, 0, 5;
    const IntMatrix hi = hermite_basis(id);
    CHECK(std::llabs(hi(0, 0) * hi(1, 1) - hi(0, 1) * hi(1, 0)) == 15);
}

TEST_CASE("lattice_volume of a non-square basis")
{
    Eigen::MatrixXd b(3, 2);
    b << 1, 0, 0, 1, 0, 0;
    CHECK(lattice_volume(b) == doctest::Approx(1.0));
    b(2, 1) = 1.0;
    CHECK(lattice_volume(b) == doctest::Approx(std::sqrt(2.0)));
}
