#ifndef CFAL_LATTICE_HPP
#define CFAL_LATTICE_HPP

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace cfal {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct LllResult {
    Eigen::MatrixXd basis;  // reduced basis, as columns
    IntMatrix transform;    // unimodular, reduced = original * transform
};

/* LLL reduction of the columns of `basis` (full column rank). */
LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.99);

/* Squared Gram-Schmidt norms of the columns, in order. */
Eigen::VectorXd gram_schmidt_norms(const Eigen::MatrixXd& basis);

/* sqrt(det(B^T B)) */
double lattice_volume(const Eigen::MatrixXd& basis);

/* Schnorr-Euchner enumeration of integer vectors x with
 * |B x - target|^2 <= radius_sq, over an LLL-reduced copy of B.
 * The visitor sees x in the coordinates of the original basis and
 * returns the (possibly shrunk) squared radius for the rest of the
 * search. */
class LatticeEnumerator {
public:
    using Visitor = std::function<double(const IntVector& coords, double dist_sq)>;

    explicit LatticeEnumerator(const Eigen::MatrixXd& basis, double delta = 0.99);

    int dimension() const { return static_cast<int>(r_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const LllResult& reduced() const { return reduced_; }

    /* Returns the number of tree nodes visited. The zero vector is never
     * reported when `skip_zero` is set. */
    std::uint64_t enumerate(const Eigen::VectorXd& target, double radius_sq, const Visitor& visit,
                            bool skip_zero) const;

    /* All nonzero lattice vectors with |B x|^2 <= radius_sq. */
    std::uint64_t enumerate_ball(double radius_sq, const Visitor& visit) const;

    struct Closest {
        IntVector coords;
        double dist_sq = 0.0;
    };
    Closest closest_vector(const Eigen::VectorXd& target) const;

private:
    Eigen::MatrixXd basis_;
    LllResult reduced_;
    Eigen::MatrixXd q_;  // thin Q of the reduced basis
    Eigen::MatrixXd r_;  // upper triangular, positive diagonal
};

/* Hermite normal form basis of the Z-span of the rows of `generators`
 * (assumed full column rank); returns a square matrix whose rows are a
 * basis. Arithmetic is overflow checked. */
IntMatrix hermite_basis(const IntMatrix& generators);

}  // namespace cfal

#endif
