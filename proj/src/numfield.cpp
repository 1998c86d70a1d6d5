#include "cfal/numfield.hpp"

#include <cmath>

#include "cfal/error.hpp"

namespace cfal {

namespace checked {

std::int64_t add(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out))
        fail(ErrorKind::Overflow, "integer addition overflows 64 bits");
    return out;
}

std::int64_t mul(std::int64_t a, std::int64_t b)
{
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out))
        fail(ErrorKind::Overflow, "integer multiplication overflows 64 bits");
    return out;
}

}  // namespace checked

RingElement operator+(const RingElement& a, const RingElement& b)
{
    return {checked::add(a.u, b.u), checked::add(a.v, b.v)};
}

RingElement operator-(const RingElement& a, const RingElement& b)
{
    return a + (-b);
}

RingElement operator-(const RingElement& a)
{
    return {checked::mul(a.u, -1), checked::mul(a.v, -1)};
}

namespace {

bool squarefree(std::int64_t d)
{
    for (std::int64_t k = 2; k * k <= d; ++k)
        if (d % (k * k) == 0)
            return false;
    return true;
}

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace

NumberField NumberField::quadratic(std::int64_t d)
{
    if (d < 2)
        fail(ErrorKind::OutOfRange, "quadratic field needs d >= 2, got " + std::to_string(d));
    if (!squarefree(d))
        fail(ErrorKind::NotSquarefree, std::to_string(d) + " has a square factor");

    NumberField f;
    f.degree_ = 2;
    f.d_ = d;
    if (d % 4 == 1) {
        f.s_ = 1;
        f.t_ = (d - 1) / 4;
        f.discriminant_ = d;
    } else {
        f.s_ = 0;
        f.t_ = d;
        f.discriminant_ = 4 * d;
    }
    const double root = std::sqrt(static_cast<double>(d));
    if (f.s_ == 1) {
        f.theta_ = {(1.0 + root) / 2.0, (1.0 - root) / 2.0};
    } else {
        f.theta_ = {root, -root};
    }
    f.phi_.resize(2, 2);
    f.phi_ << 1.0, f.theta_[0], 1.0, f.theta_[1];
    return f;
}

NumberField NumberField::rationals()
{
    NumberField f;
    f.degree_ = 1;
    f.d_ = 1;
    f.discriminant_ = 1;
    f.phi_ = Eigen::MatrixXd::Ones(1, 1);
    return f;
}

Eigen::MatrixXd NumberField::block_embedding(int blocks) const
{
    if (degree_ == 1)
        return Eigen::MatrixXd::Ones(blocks, 1);
    if (blocks != degree_)
        fail(ErrorKind::DimensionMismatch, "field of degree " + std::to_string(degree_) +
                                               " used on " + std::to_string(blocks) + " blocks");
    return phi_;
}

double NumberField::conjugate(const RingElement& a, int block) const
{
    if (degree_ == 1)
        return static_cast<double>(a.u);
    return static_cast<double>(a.u) + static_cast<double>(a.v) * theta_[static_cast<std::size_t>(block)];
}

std::string NumberField::name() const
{
    if (degree_ == 1)
        return "Z";
    if (s_ == 1)
        return "Z[(1+sqrt" + std::to_string(d_) + ")/2]";
    return "Z[sqrt" + std::to_string(d_) + "]";
}

NumberField make_quadratic_field(std::int64_t d)
{
    return NumberField::quadratic(d);
}

std::int64_t algebraic_norm(const NumberField& field, const RingElement& a)
{
    if (field.degree() == 1)
        return a.u;
    using namespace checked;
    // (u + v theta)(u + v theta') with theta + theta' = s, theta theta' = -t
    return add(add(mul(a.u, a.u), mul(field.s(), mul(a.u, a.v))), mul(-field.t(), mul(a.v, a.v)));
}

Embedding embed_element(const NumberField& field, const RingElement& a)
{
    Embedding e;
    const int n = field.degree();
    e.conjugates.resize(n);
    for (int j = 0; j < n; ++j)
        e.conjugates(j) = field.conjugate(a, j);
    e.norm = algebraic_norm(field, a);
    e.trace = field.degree() == 1 ? a.u : checked::add(checked::mul(2, a.u), checked::mul(field.s(), a.v));

    const double product = e.conjugates.prod();
    const double scale = std::max(1.0, std::abs(product));
    if (std::abs(product - static_cast<double>(e.norm)) > 1e-6 * scale)
        throw std::logic_error("conjugate product disagrees with exact norm");
    return e;
}

RingElement ring_mul(const NumberField& field, const RingElement& a, const RingElement& b)
{
    using namespace checked;
    // (a.u + a.v th)(b.u + b.v th) = a.u b.u + (a.u b.v + a.v b.u) th + a.v b.v th^2
    const std::int64_t vv = mul(a.v, b.v);
    const std::int64_t u = add(mul(a.u, b.u), mul(field.t(), vv));
    const std::int64_t v = add(add(mul(a.u, b.v), mul(a.v, b.u)), mul(field.s(), vv));
    return {u, v};
}

ResidueField::ResidueField(std::int64_t p, int r, std::int64_t s, std::int64_t t)
    : p_(p), r_(r), s_(mod(s, p)), t_(mod(t, p))
{
}

std::int64_t ResidueField::reduce(std::int64_t v) const
{
    return mod(v, p_);
}

FqElem ResidueField::add(FqElem a, FqElem b) const
{
    return {(a.c0 + b.c0) % p_, (a.c1 + b.c1) % p_};
}

FqElem ResidueField::sub(FqElem a, FqElem b) const
{
    return add(a, neg(b));
}

FqElem ResidueField::neg(FqElem a) const
{
    return {(p_ - a.c0) % p_, (p_ - a.c1) % p_};
}

FqElem ResidueField::mul(FqElem a, FqElem b) const
{
    if (r_ == 1)
        return {(a.c0 * b.c0) % p_, 0};
    // x^2 = s x + t
    const std::int64_t hi = (a.c1 * b.c1) % p_;
    const std::int64_t c0 = (a.c0 * b.c0 + hi * t_) % p_;
    const std::int64_t c1 = (a.c0 * b.c1 + a.c1 * b.c0 + hi * s_) % p_;
    return {c0, c1};
}

FqElem ResidueField::inv(FqElem a) const
{
    if (a.is_zero())
        throw std::domain_error("inverse of zero in residue field");
    // a^(q-2)
    std::int64_t e = order() - 2;
    FqElem result = from_int(1);
    FqElem base = a;
    while (e > 0) {
        if (e & 1)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

FqElem ResidueField::from_int(std::int64_t v) const
{
    return {mod(v, p_), 0};
}

FqElem ResidueField::from_index(std::int64_t k) const
{
    return {k % p_, r_ == 1 ? 0 : k / p_};
}

std::int64_t ResidueField::index(FqElem a) const
{
    return a.c0 + p_ * a.c1;
}

bool is_prime(std::int64_t p)
{
    if (p < 2)
        return false;
    for (std::int64_t k = 2; k * k <= p; ++k)
        if (p % k == 0)
            return false;
    return true;
}

PrimeIdeal prime_above(const NumberField& field, std::int64_t p)
{
    if (field.degree() != 2)
        fail(ErrorKind::DimensionMismatch, "prime ideals are only provided for quadratic fields");
    if (!is_prime(p))
        fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (field.discriminant() % p == 0)
        fail(ErrorKind::Ramified, std::to_string(p) + " divides the discriminant " +
                                      std::to_string(field.discriminant()));
    const std::int64_t s = mod(field.s(), p);
    const std::int64_t t = mod(field.t(), p);
    for (std::int64_t c = 0; c < p; ++c) {
        if (mod(c * c - s * c - t, p) == 0)
            return PrimeIdeal(field, p, 1, c);
    }
    return PrimeIdeal(field, p, 2, 0);
}

ResidueField PrimeIdeal::residue_field() const
{
    return ResidueField(p_, r_, field_.s(), field_.t());
}

Eigen::Matrix<std::int64_t, 2, 2> PrimeIdeal::z_basis() const
{
    Eigen::Matrix<std::int64_t, 2, 2> basis;
    if (r_ == 1) {
        // p and theta - c
        basis << p_, -c_, 0, 1;
    } else {
        basis << p_, 0, 0, p_;
    }
    return basis;
}

bool PrimeIdeal::contains(const RingElement& a) const
{
    if (r_ == 1)
        return mod(checked::add(a.u, checked::mul(c_, a.v)), p_) == 0;
    return mod(a.u, p_) == 0 && mod(a.v, p_) == 0;
}

FqElem residue_reduce(const PrimeIdeal& prime, const RingElement& a)
{
    const std::int64_t p = prime.p();
    if (prime.inertial_degree() == 1) {
        // theta -> c; reduce factors first to stay in range
        const std::int64_t value = mod(a.u, p) + mod(mod(a.v, p) * prime.root(), p);
        return {value % p, 0};
    }
    return {mod(a.u, p), mod(a.v, p)};
}

RingElement residue_lift(const PrimeIdeal& prime, FqElem x)
{
    if (prime.inertial_degree() == 1)
        return {x.c0, 0};
    return {x.c0, x.c1};
}

}  // namespace cfal
