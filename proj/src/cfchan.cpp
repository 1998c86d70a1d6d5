#include "cfal/cfchan.hpp"

#include <cmath>
#include <string>

#include "cfal/error.hpp"
#include "cfal/svp.hpp"

namespace cfal {

BlockFadingChannel::BlockFadingChannel(Eigen::MatrixXd gains, double snr)
    : gains_(std::move(gains)), snr_(snr)
{
    if (!(snr_ > 0.0) || !std::isfinite(snr_))
        fail(ErrorKind::InvalidValue, "SNR must be positive and finite");
    if (gains_.size() == 0)
        fail(ErrorKind::DimensionMismatch, "channel needs at least one user and one block");
    if (!gains_.allFinite())
        fail(ErrorKind::InvalidValue, "channel gains must be finite");
}

BlockFadingChannel BlockFadingChannel::single_block(int j) const
{
    return {gains_.col(j), snr_};
}

double EquationCandidate::sigma_gm_sq() const
{
    const int n = static_cast<int>(nu_sq.size());
    double log_sum = 0.0;
    for (int j = 0; j < n; ++j) {
        if (nu_sq(j) <= 0.0)
            return 0.0;
        log_sum += std::log(nu_sq(j));
    }
    return std::exp(log_sum / n);
}

double log2_plus(double x)
{
    return x > 1.0 ? std::log2(x) : 0.0;
}

double quadratic_form(const Eigen::MatrixXd& m, const Eigen::VectorXd& x)
{
    return x.dot(m * x);
}

Eigen::MatrixXd gram_matrix(const Eigen::VectorXd& h, double snr)
{
    const auto L = h.size();
    const double scale = snr / (snr * h.squaredNorm() + 1.0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(L, L);
    // filled pairwise so the result is exactly symmetric
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index k = i; k < L; ++k) {
            const double v = scale * (h(i) * h(k));
            m(i, k) -= v;
            if (k != i)
                m(k, i) -= v;
        }
    return m;
}

double mmse_scale(const Eigen::VectorXd& h, const Eigen::VectorXd& sigma, double snr)
{
    return snr * sigma.dot(h) / (snr * h.squaredNorm() + 1.0);
}

double effective_noise(const Eigen::VectorXd& h, const Eigen::VectorXd& sigma, double snr, double b)
{
    return b * b + snr * (b * h - sigma).squaredNorm();
}

Eigen::MatrixXd embed_coefficients(const NumberField& field, const std::vector<RingElement>& a, int blocks)
{
    const int L = static_cast<int>(a.size());
    Eigen::MatrixXd sigma(blocks, L);
    for (int j = 0; j < blocks; ++j)
        for (int l = 0; l < L; ++l)
            sigma(j, l) = field.conjugate(a[static_cast<std::size_t>(l)], j);
    return sigma;
}

EquationCandidate am_rate(const BlockFadingChannel& channel, const std::vector<RingElement>& a,
                          const NumberField& field)
{
    const int n = channel.blocks();
    if (static_cast<int>(a.size()) != channel.users())
        fail(ErrorKind::DimensionMismatch, "coefficient vector length differs from user count");
    bool all_zero = true;
    for (const auto& x : a)
        all_zero = all_zero && x.is_zero();
    if (all_zero)
        fail(ErrorKind::ZeroCoefficient, "coefficient vector is zero");
    if (field.degree() == 1)
        for (const auto& x : a)
            if (x.v != 0)
                fail(ErrorKind::InvalidValue, "Z coefficient with a theta component");

    field.block_embedding(n);  // validates degree against block count

    EquationCandidate c;
    c.a = a;
    c.sigma = embed_coefficients(field, a, n);
    c.b.resize(n);
    c.nu_sq.resize(n);
    double f = 0.0;
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd h = channel.block(j);
        const Eigen::VectorXd s = c.sigma.row(j).transpose();
        f += quadratic_form(gram_matrix(h, channel.snr()), s);
        c.b(j) = mmse_scale(h, s, channel.snr());
        c.nu_sq(j) = std::max(0.0, effective_noise(h, s, channel.snr(), c.b(j)));
    }
    c.quadratic_form = f;
    c.rate_bits = 0.5 * n * log2_plus(n / f);

    // sum_j nu_j^2 = P f(a) at the MMSE point
    const double lhs = c.nu_sq.sum();
    const double rhs = channel.snr() * f;
    if (std::abs(lhs - rhs) > 1e-9 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}) + 1e-12)
        throw std::logic_error("effective noise sum disagrees with P f(a): " + std::to_string(lhs) +
                               " vs " + std::to_string(rhs));
    return c;
}

double am_rate_matrix_form(const BlockFadingChannel& channel, const Eigen::MatrixXd& sigma,
                           const Eigen::VectorXd& b)
{
    const int n = channel.blocks();
    const double P = channel.snr();
    const Eigen::MatrixXd B = b.asDiagonal();
    double denom = B.squaredNorm();
    for (int l = 0; l < channel.users(); ++l) {
        const Eigen::MatrixXd H = channel.gains().row(l).transpose().asDiagonal();
        const Eigen::MatrixXd A = sigma.col(l).asDiagonal();
        denom += P * (B * H - A).squaredNorm();
    }
    return 0.5 * n * log2_plus(n * P / denom);
}

double block_rate_Z(const Eigen::VectorXd& h, const Eigen::VectorXi& a, double snr)
{
    if (!(snr > 0.0))
        fail(ErrorKind::InvalidValue, "SNR must be positive");
    if (a.size() != h.size())
        fail(ErrorKind::DimensionMismatch, "coefficient vector length differs from user count");
    if (a.isZero())
        fail(ErrorKind::ZeroCoefficient, "coefficient vector is zero");
    const double q = quadratic_form(gram_matrix(h, snr), a.cast<double>());
    return 0.5 * 1 * log2_plus(1 / q);
}

NaiveChoice naive_rate(const BlockFadingChannel& channel)
{
    const auto integers = NumberField::rationals();
    NaiveChoice best;
    bool first = true;
    for (int j = 0; j < channel.blocks(); ++j) {
        const auto candidate = best_equation(integers, channel.single_block(j));
        if (first || candidate.rate_bits > best.rate_bits) {
            best.block = j;
            best.rate_bits = candidate.rate_bits;
            best.a.resize(channel.users());
            for (int l = 0; l < channel.users(); ++l)
                best.a(l) = static_cast<int>(candidate.a[static_cast<std::size_t>(l)].u);
            first = false;
        }
    }
    return best;
}

double mac_sum_capacity(const BlockFadingChannel& channel)
{
    double total = 0.0;
    for (int j = 0; j < channel.blocks(); ++j)
        total += 0.5 * std::log2(1.0 + channel.snr() * channel.block(j).squaredNorm());
    return total;
}

}  // namespace cfal
