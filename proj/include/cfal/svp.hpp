#ifndef CFAL_SVP_HPP
#define CFAL_SVP_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cfal/cfchan.hpp"
#include "cfal/lattice.hpp"
#include "cfal/numfield.hpp"

namespace cfal {

/* Lattice whose squared norms are the AM-rate objective:
 * |basis * a~|^2 = sum_j sigma_j(a)^T M_j sigma_j(a), where a~ stacks the
 * integral-basis coordinates of a_1, ..., a_L user by user.
 *
 * basis = M_mix * Phi_mix, M_mix = blockdiag(Mbar_1, ..., Mbar_n) with
 * M_j = Mbar_j^T Mbar_j, and Phi_mix = U (I_L (x) Phi). Rows are grouped
 * by block, one row per user inside a block. */
struct SearchBasis {
    Eigen::MatrixXd basis;          // nL x (deg L)
    Eigen::MatrixXd phi_mix;        // nL x (deg L)
    Eigen::MatrixXd m_mix;          // nL x nL
    std::vector<int> row_shuffle;   // row r of phi_mix is row row_shuffle[r] of I_L (x) Phi
    std::vector<Eigen::MatrixXd> cholesky;  // Mbar_j, upper triangular
    int blocks = 0;
    int users = 0;
    int field_degree = 1;

    int dimension() const { return static_cast<int>(basis.cols()); }
};

struct SVPResult {
    IntVector coords;
    double norm_sq = 0.0;
    std::uint64_t node_count = 0;
};

SearchBasis build_search_basis(const NumberField& field, const BlockFadingChannel& channel);

/* Wraps an arbitrary generator matrix (columns are basis vectors). */
SearchBasis search_basis_from_matrix(const Eigen::MatrixXd& basis);

/* Exact SVP: LLL then Schnorr-Euchner enumeration from the shortest
 * reduced basis vector. Ties go to the lexicographically smallest
 * coordinate vector whose first nonzero entry is positive. */
SVPResult shortest_vector(const SearchBasis& basis);

/* Exhaustive search over the box [-bound, bound]^dim. */
SVPResult brute_force_shortest(const SearchBasis& basis, int bound);

/* sqrt(dim) |det|^(1/dim) */
double minkowski_bound(const SearchBasis& basis);

std::vector<RingElement> coords_to_coefficients(const IntVector& coords, int field_degree);
IntVector coefficients_to_coords(const std::vector<RingElement>& a, int field_degree);

/* Sign normalization: first nonzero entry positive. */
IntVector normalize_sign(const IntVector& coords);

/* Rate-optimal coefficient vector over O_K^L (over Z^L for the
 * degree-1 ring). */
EquationCandidate best_equation(const NumberField& field, const BlockFadingChannel& channel);

/* Up to `count` equations with linearly independent coefficient vectors,
 * chosen greedily by rate among lattice vectors of norm <= ratio * lambda_1. */
std::vector<EquationCandidate> best_equations(const NumberField& field, const BlockFadingChannel& channel,
                                              int count, double ratio = 2.0);

}  // namespace cfal

#endif
