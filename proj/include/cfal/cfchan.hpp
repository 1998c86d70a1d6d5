#ifndef CFAL_CFCHAN_HPP
#define CFAL_CFCHAN_HPP

#include <vector>

#include <Eigen/Dense>

#include "cfal/numfield.hpp"

namespace cfal {

/* Real block-fading multiple-access channel seen by one relay.
 * Column j of `gains` is h_j, the L user gains during block j. */
class BlockFadingChannel {
public:
    BlockFadingChannel(Eigen::MatrixXd gains, double snr);

    int blocks() const { return static_cast<int>(gains_.cols()); }
    int users() const { return static_cast<int>(gains_.rows()); }
    double snr() const { return snr_; }
    const Eigen::MatrixXd& gains() const { return gains_; }
    Eigen::VectorXd block(int j) const { return gains_.col(j); }

    BlockFadingChannel with_snr(double snr) const { return {gains_, snr}; }
    /* The single-block channel made of block j only. */
    BlockFadingChannel single_block(int j) const;

private:
    Eigen::MatrixXd gains_;
    double snr_;
};

/* Coefficient vector a in O_K^L with its MMSE scaling and rate. */
struct EquationCandidate {
    std::vector<RingElement> a;
    Eigen::MatrixXd sigma;  // n x L, sigma(j, l) = sigma_j(a_l)
    Eigen::VectorXd b;      // per-block MMSE scalars
    Eigen::VectorXd nu_sq;  // per-block effective noise variances
    double quadratic_form = 0.0;  // f(a) = sum_j sigma_j(a)^T M_j sigma_j(a)
    double rate_bits = 0.0;

    int blocks() const { return static_cast<int>(sigma.rows()); }
    double sigma_am_sq() const { return nu_sq.mean(); }
    double sigma_gm_sq() const;
};

double log2_plus(double x);

/* x^T M x; shared by every rate routine so identical inputs give
 * bit-identical rates. */
double quadratic_form(const Eigen::MatrixXd& m, const Eigen::VectorXd& x);

/* M_j = I - P / (P |h_j|^2 + 1) h_j h_j^T */
Eigen::MatrixXd gram_matrix(const Eigen::VectorXd& h, double snr);

/* b_j = P sigma_j^T h_j / (P |h_j|^2 + 1) */
double mmse_scale(const Eigen::VectorXd& h, const Eigen::VectorXd& sigma, double snr);

/* |b|^2 + P |b h - sigma|^2 */
double effective_noise(const Eigen::VectorXd& h, const Eigen::VectorXd& sigma, double snr, double b);

/* sigma_j(a_l) for every block and user. */
Eigen::MatrixXd embed_coefficients(const NumberField& field, const std::vector<RingElement>& a, int blocks);

/* Arithmetic-mean decoder rate (n/2) log+(n / f(a)) in bits per channel
 * matrix use, with b and nu_eff filled in. */
EquationCandidate am_rate(const BlockFadingChannel& channel, const std::vector<RingElement>& a,
                          const NumberField& field);

/* Same rate written through the diagonal B / A_l matrices:
 * (n/2) log+(nP / (|B|^2 + P sum_l |B H_l - A_l|^2)). Independent route
 * used to cross-check `am_rate`. */
double am_rate_matrix_form(const BlockFadingChannel& channel, const Eigen::MatrixXd& sigma,
                           const Eigen::VectorXd& b);

/* Integer C&F rate of a single block with the optimal scalar:
 * (1/2) log+(1 / a^T M a). */
double block_rate_Z(const Eigen::VectorXd& h, const Eigen::VectorXi& a, double snr);

struct NaiveChoice {
    int block = 0;
    Eigen::VectorXi a;
    double rate_bits = 0.0;
};

/* Best single-block integer equation; the rate is not multiplied by the
 * block count since only one block carries the equation. */
NaiveChoice naive_rate(const BlockFadingChannel& channel);

/* sum_j (1/2) log2(1 + P |h_j|^2) */
double mac_sum_capacity(const BlockFadingChannel& channel);

}  // namespace cfal

#endif
