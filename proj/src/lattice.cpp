#include "cfal/lattice.hpp"

#include <cmath>
#include <limits>

#include "cfal/error.hpp"
#include "cfal/numfield.hpp"

namespace cfal {

namespace {

/* mu(i, j) and |b*_i|^2 of the columns */
void gram_schmidt(const Eigen::MatrixXd& b, Eigen::MatrixXd& mu, Eigen::VectorXd& norms)
{
    const auto k = b.cols();
    Eigen::MatrixXd star = b;
    mu = Eigen::MatrixXd::Zero(k, k);
    norms.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            mu(i, j) = b.col(i).dot(star.col(j)) / norms(j);
            star.col(i) -= mu(i, j) * star.col(j);
        }
        norms(i) = star.col(i).squaredNorm();
    }
}

}  // namespace

LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta)
{
    const auto k = basis.cols();
    LllResult out{basis, IntMatrix::Identity(k, k)};
    if (k == 0)
        return out;
    Eigen::MatrixXd& b = out.basis;
    IntMatrix& u = out.transform;

    Eigen::MatrixXd mu;
    Eigen::VectorXd norms;
    gram_schmidt(b, mu, norms);
    const double scale = basis.colwise().squaredNorm().maxCoeff();
    if (norms.minCoeff() <= 1e-24 * std::max(scale, 1.0))
        fail(ErrorKind::RankDeficient, "basis is not of full column rank");

    Eigen::Index i = 1;
    int guard = 0;
    while (i < k) {
        if (++guard > 100000)
            throw std::runtime_error("LLL did not terminate");
        for (Eigen::Index j = i - 1; j >= 0; --j) {
            const double q = std::round(mu(i, j));
            if (q != 0.0) {
                b.col(i) -= q * b.col(j);
                const auto qi = static_cast<std::int64_t>(q);
                for (Eigen::Index r = 0; r < k; ++r)
                    u(r, i) = checked::add(u(r, i), checked::mul(-qi, u(r, j)));
                for (Eigen::Index c = 0; c <= j; ++c)
                    mu(i, c) -= q * (c == j ? 1.0 : mu(j, c));
            }
        }
        if (norms(i) >= (delta - mu(i, i - 1) * mu(i, i - 1)) * norms(i - 1)) {
            ++i;
        } else {
            b.col(i).swap(b.col(i - 1));
            u.col(i).swap(u.col(i - 1));
            gram_schmidt(b, mu, norms);
            i = std::max<Eigen::Index>(i - 1, 1);
        }
    }
    return out;
}

Eigen::VectorXd gram_schmidt_norms(const Eigen::MatrixXd& basis)
{
    Eigen::MatrixXd mu;
    Eigen::VectorXd norms;
    gram_schmidt(basis, mu, norms);
    return norms;
}

double lattice_volume(const Eigen::MatrixXd& basis)
{
    if (basis.rows() == basis.cols())
        return std::abs(basis.determinant());
    return std::sqrt(std::abs((basis.transpose() * basis).determinant()));
}

LatticeEnumerator::LatticeEnumerator(const Eigen::MatrixXd& basis, double delta)
    : basis_(basis), reduced_(lll_reduce(basis, delta))
{
    const auto m = basis.rows();
    const auto k = basis.cols();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(reduced_.basis);
    q_ = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
    r_ = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (r_(i, i) < 0.0) {
            r_.row(i) *= -1.0;
            q_.col(i) *= -1.0;
        }
    }
    const double scale = std::max(1.0, r_.diagonal().cwiseAbs().maxCoeff());
    if (r_.diagonal().minCoeff() <= 1e-12 * scale)
        fail(ErrorKind::RankDeficient, "basis is numerically rank deficient");
}

std::uint64_t LatticeEnumerator::enumerate(const Eigen::VectorXd& target, double radius_sq,
                                           const Visitor& visit, bool skip_zero) const
{
    const int k = dimension();
    const Eigen::VectorXd y = q_.transpose() * target;
    const double outside = std::max(0.0, target.squaredNorm() - y.squaredNorm());
    double radius = radius_sq - outside;
    if (radius < 0.0)
        return 0;

    IntVector x = IntVector::Zero(k);
    const IntMatrix& u = reduced_.transform;
    std::uint64_t nodes = 0;

    auto recurse = [&](auto&& self, int level, double partial) -> void {
        double c = y(level);
        for (int j = level + 1; j < k; ++j)
            c -= r_(level, j) * static_cast<double>(x(j));
        c /= r_(level, level);
        const double rii_sq = r_(level, level) * r_(level, level);
        const double start = std::round(c);
        const double dir = (c >= start) ? 1.0 : -1.0;
        for (int step = 0;; ++step) {
            // zigzag start, start+dir, start-dir, start+2dir, ...
            const double offset = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
            const double xi = start + dir * offset;
            const double diff = xi - c;
            const double dist = partial + rii_sq * diff * diff;
            if (dist > radius)
                break;
            ++nodes;
            x(level) = static_cast<std::int64_t>(xi);
            if (level == 0) {
                if (!(skip_zero && x.isZero())) {
                    const IntVector coords = u * x;
                    radius = visit(coords, dist + outside) - outside;
                }
            } else {
                self(self, level - 1, dist);
            }
        }
        x(level) = 0;
    };
    if (k > 0)
        recurse(recurse, k - 1, 0.0);
    return nodes;
}

std::uint64_t LatticeEnumerator::enumerate_ball(double radius_sq, const Visitor& visit) const
{
    return enumerate(Eigen::VectorXd::Zero(basis_.rows()), radius_sq, visit, true);
}

LatticeEnumerator::Closest LatticeEnumerator::closest_vector(const Eigen::VectorXd& target) const
{
    const int k = dimension();
    const Eigen::VectorXd y = q_.transpose() * target;

    // nearest plane for the initial radius
    IntVector babai(k);
    Eigen::VectorXd residual = y;
    for (int i = k - 1; i >= 0; --i) {
        const double c = residual(i) / r_(i, i);
        const double xi = std::round(c);
        babai(i) = static_cast<std::int64_t>(xi);
        residual.head(i + 1) -= xi * r_.col(i).head(i + 1);
    }
    const double outside = std::max(0.0, target.squaredNorm() - y.squaredNorm());
    double best = residual.squaredNorm() + outside;

    Closest out{reduced_.transform * babai, best};
    const double slack = 1e-9 * best + 1e-300;
    enumerate(
        target, best + slack,
        [&](const IntVector& coords, double dist_sq) {
            if (dist_sq < out.dist_sq) {
                out.coords = coords;
                out.dist_sq = dist_sq;
            }
            return out.dist_sq;
        },
        false);
    out.dist_sq = (basis_ * out.coords.cast<double>() - target).squaredNorm();
    return out;
}

IntMatrix hermite_basis(const IntMatrix& generators)
{
    IntMatrix a = generators;
    const auto m = a.rows();
    const auto k = a.cols();
    Eigen::Index row = 0;
    auto floor_div = [](std::int64_t num, std::int64_t den) {
        std::int64_t q = num / den;
        if ((num % den != 0) && ((num < 0) != (den < 0)))
            --q;
        return q;
    };
    auto axpy = [&](Eigen::Index dst, Eigen::Index src, std::int64_t q) {
        for (Eigen::Index c = 0; c < k; ++c)
            a(dst, c) = checked::add(a(dst, c), checked::mul(-q, a(src, c)));
    };
    for (Eigen::Index col = 0; col < k && row < m; ++col) {
        while (true) {
            Eigen::Index pivot = -1;
            for (Eigen::Index i = row; i < m; ++i) {
                if (a(i, col) != 0 && (pivot < 0 || std::abs(a(i, col)) < std::abs(a(pivot, col))))
                    pivot = i;
            }
            if (pivot < 0)
                fail(ErrorKind::RankDeficient, "generators do not span a full-rank lattice");
            a.row(row).swap(a.row(pivot));
            bool done = true;
            for (Eigen::Index i = row + 1; i < m; ++i) {
                if (a(i, col) != 0) {
                    axpy(i, row, floor_div(a(i, col), a(row, col)));
                    done = done && a(i, col) == 0;
                }
            }
            if (done)
                break;
        }
        if (a(row, col) < 0)
            a.row(row) *= -1;
        for (Eigen::Index i = 0; i < row; ++i)
            axpy(i, row, floor_div(a(i, col), a(row, col)));
        ++row;
    }
    if (row < k)
        fail(ErrorKind::RankDeficient, "generators do not span a full-rank lattice");
    return a.topRows(k);
}

}  // namespace cfal
