#ifndef CFAL_NUMFIELD_HPP
#define CFAL_NUMFIELD_HPP

#include <array>
#include <cstdint>
#include <compare>
#include <string>

#include <Eigen/Dense>

namespace cfal {

/* Element u + v*theta of the ring of integers, in exact integer
 * coordinates over the integral basis {1, theta}. */
struct RingElement {
    std::int64_t u = 0;
    std::int64_t v = 0;

    bool is_zero() const { return u == 0 && v == 0; }

    friend bool operator==(const RingElement&, const RingElement&) = default;
    friend auto operator<=>(const RingElement&, const RingElement&) = default;
};

RingElement operator+(const RingElement& a, const RingElement& b);
RingElement operator-(const RingElement& a, const RingElement& b);
RingElement operator-(const RingElement& a);

/* Real quadratic field Q(sqrt d) together with its ring of integers, or
 * the degenerate degree-1 "field" Z used for integer-only equations.
 *
 * theta^2 = s*theta + t, conjugates sorted theta_1 > theta_2, and
 * embedding_matrix()(j, i) = sigma_j(phi_i) for phi = {1, theta}. */
class NumberField {
public:
    /* Ring of integers of Q(sqrt d); d squarefree, d >= 2. */
    static NumberField quadratic(std::int64_t d);

    /* Z as a degree-1 ring; every block sees the same integer coefficient. */
    static NumberField rationals();

    int degree() const { return degree_; }
    std::int64_t d() const { return d_; }
    std::int64_t discriminant() const { return discriminant_; }
    std::int64_t s() const { return s_; }
    std::int64_t t() const { return t_; }
    const std::array<double, 2>& theta_conjugates() const { return theta_; }
    const Eigen::MatrixXd& embedding_matrix() const { return phi_; }

    /* Embedding matrix laid out for an n-block channel: Phi itself when
     * n equals the degree, a column of ones for Z. */
    Eigen::MatrixXd block_embedding(int blocks) const;

    /* sigma_j(a) for block j of an n-block channel. */
    double conjugate(const RingElement& a, int block) const;

    std::string name() const;

    friend bool operator==(const NumberField& a, const NumberField& b)
    {
        return a.d_ == b.d_ && a.degree_ == b.degree_;
    }

private:
    NumberField() = default;

    int degree_ = 1;
    std::int64_t d_ = 1;
    std::int64_t discriminant_ = 1;
    std::int64_t s_ = 0;
    std::int64_t t_ = 0;
    std::array<double, 2> theta_{0.0, 0.0};
    Eigen::MatrixXd phi_;
};

NumberField make_quadratic_field(std::int64_t d);

struct Embedding {
    Eigen::VectorXd conjugates;
    std::int64_t norm = 0;
    std::int64_t trace = 0;
};

Embedding embed_element(const NumberField& field, const RingElement& a);

/* Exact algebraic norm u^2 + s*u*v - t*v^2, overflow checked. */
std::int64_t algebraic_norm(const NumberField& field, const RingElement& a);

RingElement ring_mul(const NumberField& field, const RingElement& a, const RingElement& b);

/* Element of F_q, q = p^r, r in {1, 2}. For r = 2 it is c0 + c1*x in
 * F_p[x]/(x^2 - s*x - t); for r = 1 only c0 is used. */
struct FqElem {
    std::int64_t c0 = 0;
    std::int64_t c1 = 0;

    bool is_zero() const { return c0 == 0 && c1 == 0; }
    friend bool operator==(const FqElem&, const FqElem&) = default;
};

class ResidueField {
public:
    ResidueField(std::int64_t p, int r, std::int64_t s, std::int64_t t);

    std::int64_t p() const { return p_; }
    int r() const { return r_; }
    std::int64_t order() const { return r_ == 1 ? p_ : p_ * p_; }

    FqElem add(FqElem a, FqElem b) const;
    FqElem sub(FqElem a, FqElem b) const;
    FqElem neg(FqElem a) const;
    FqElem mul(FqElem a, FqElem b) const;
    FqElem inv(FqElem a) const;

    FqElem from_int(std::int64_t v) const;
    /* Bijection {0, ..., q-1} <-> F_q. */
    FqElem from_index(std::int64_t k) const;
    std::int64_t index(FqElem a) const;

    std::int64_t reduce(std::int64_t v) const;

private:
    std::int64_t p_;
    int r_;
    std::int64_t s_;
    std::int64_t t_;
};

/* Prime ideal above p. Split (r = 1): (p, theta - c). Inert (r = 2): pO_K. */
class PrimeIdeal {
public:
    std::int64_t p() const { return p_; }
    int inertial_degree() const { return r_; }
    std::int64_t root() const { return c_; }
    const NumberField& field() const { return field_; }
    ResidueField residue_field() const;

    /* Z-basis of the ideal in (u, v) coordinates, as the columns. */
    Eigen::Matrix<std::int64_t, 2, 2> z_basis() const;

    bool contains(const RingElement& a) const;

private:
    friend PrimeIdeal prime_above(const NumberField&, std::int64_t);
    PrimeIdeal(NumberField field, std::int64_t p, int r, std::int64_t c)
        : field_(std::move(field)), p_(p), r_(r), c_(c)
    {
    }

    NumberField field_;
    std::int64_t p_;
    int r_;
    std::int64_t c_;
};

bool is_prime(std::int64_t p);

PrimeIdeal prime_above(const NumberField& field, std::int64_t p);

/* Reduction O_K -> O_K / P ~= F_{p^r}; a ring homomorphism. */
FqElem residue_reduce(const PrimeIdeal& prime, const RingElement& a);

/* Coset leader in O_K with coordinates in [0, p) mapping to `x`. */
RingElement residue_lift(const PrimeIdeal& prime, FqElem x);

namespace checked {
std::int64_t add(std::int64_t a, std::int64_t b);
std::int64_t mul(std::int64_t a, std::int64_t b);
}  // namespace checked

}  // namespace cfal

#endif
