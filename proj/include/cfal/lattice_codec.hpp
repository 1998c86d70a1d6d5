#ifndef CFAL_LATTICE_CODEC_HPP
#define CFAL_LATTICE_CODEC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cfal/cfchan.hpp"
#include "cfal/lattice.hpp"
#include "cfal/numfield.hpp"
#include "cfal/seeding.hpp"

namespace cfal {

using Word = std::vector<FqElem>;

/* Linear codes C_c <= C_f over F_q, q = p^r. C_c is spanned by the first
 * l_c columns of the T x l_f generator G_f; messages index the remaining
 * l_f - l_c columns. */
class NestedCodePair {
public:
    /* `generator` is G_f in row-major order (T rows, l_f columns). */
    NestedCodePair(ResidueField field, int length, int fine_dim, int coarse_dim, std::vector<FqElem> generator);

    const ResidueField& field() const { return field_; }
    int length() const { return length_; }
    int fine_dim() const { return fine_dim_; }
    int coarse_dim() const { return coarse_dim_; }
    int message_dim() const { return fine_dim_ - coarse_dim_; }
    FqElem generator(int row, int col) const { return gen_[static_cast<std::size_t>(row * fine_dim_ + col)]; }

    /* G_f * info, info of length l_f. */
    Word encode(const Word& info) const;
    /* Codeword carrying `message` in the message coordinates, zeros in the
     * coarse coordinates. */
    Word encode_message(const Word& message) const;
    /* Unique info vector with G_f * info = word, if word is in C_f. */
    std::optional<Word> solve(const Word& word) const;

    bool in_fine(const Word& word) const { return solve(word).has_value(); }
    bool in_coarse(const Word& word) const;

    /* Message coordinates of a C_f codeword (its coset modulo C_c). */
    std::optional<Word> message_of(const Word& word) const;

private:
    ResidueField field_;
    int length_;
    int fine_dim_;
    int coarse_dim_;
    std::vector<FqElem> gen_;
};

enum class LatticeKind { Fine, Coarse };

struct EffectiveNoiseSpec {
    Eigen::VectorXd nu_sq;
};

/* Construction A lattices Lambda_f = M(C_f) + P^T and Lambda_c = M(C_c) + P^T
 * in O_K^T, used through their canonical embedding scaled by gamma.
 * A codeword is an n x T matrix X with X(j, i) = gamma sigma_j(x(i)).
 * The shaping region is the centred fundamental parallelepiped of an
 * LLL-reduced basis of gamma Lambda_c. */
class ConstructionALattice {
public:
    const NumberField& field() const { return prime_.field(); }
    const PrimeIdeal& prime() const { return prime_; }
    const NestedCodePair& codes() const { return codes_; }
    int length() const { return codes_.length(); }
    int blocks() const { return field().degree(); }
    double gamma() const { return gamma_; }

    /* Rows are a Z-basis (HNF) in O_K coordinates (u_1, v_1, ..., u_T, v_T). */
    const IntMatrix& fine_integer_basis() const { return fine_int_; }
    const IntMatrix& coarse_integer_basis() const { return coarse_int_; }

    /* Columns in R^{nT} at gamma = 1; vectors are laid out block by block. */
    const Eigen::MatrixXd& fine_embedded_basis() const { return fine_emb_; }
    const Eigen::MatrixXd& coarse_embedded_basis() const { return coarse_emb_; }

    double fine_volume(double scale = 1.0) const;
    double coarse_volume(double scale = 1.0) const;
    double message_rate_bits() const;

    /* Per-dimension second moment of the shaping region at the current gamma. */
    double shaping_second_moment() const;
    double empirical_second_moment(int samples, std::uint64_t seed) const;

    /* Coset leaders M(C_f): every fine codeword with its info vector. */
    const std::vector<Word>& fine_codewords() const { return codewords_; }

    Eigen::MatrixXd embed(const std::vector<RingElement>& x, double scale) const;
    /* Real O_K coordinates of X / gamma, as a 2 x T matrix (u row, v row). */
    Eigen::MatrixXd pull_back(const Eigen::MatrixXd& x) const;
    /* Integer O_K coordinates when X / gamma is within tolerance of O_K^T. */
    std::optional<std::vector<RingElement>> integer_coordinates(const Eigen::MatrixXd& x) const;

    Eigen::MatrixXd reduce_mod_coarse(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd sample_dither(Rng& rng) const;

    /* Lattice sigma(P) in R^n at gamma = 1. */
    const LatticeEnumerator& ideal_enumerator() const { return ideal_enum_; }

private:
    friend ConstructionALattice build_construction_a(const NumberField&, const PrimeIdeal&, const NestedCodePair&,
                                                     double);
    ConstructionALattice(PrimeIdeal prime, NestedCodePair codes);

    PrimeIdeal prime_;
    NestedCodePair codes_;
    double gamma_ = 1.0;
    IntMatrix fine_int_;
    IntMatrix coarse_int_;
    Eigen::MatrixXd fine_emb_;
    Eigen::MatrixXd coarse_emb_;
    Eigen::MatrixXd shaping_;      // gamma * reduced coarse basis
    Eigen::MatrixXd shaping_inv_;
    Eigen::MatrixXd phi_inv_;
    LatticeEnumerator ideal_enum_;
    std::vector<Word> codewords_;
};

/* gamma is chosen so the shaping second moment per dimension equals P. */
ConstructionALattice build_construction_a(const NumberField& field, const PrimeIdeal& prime,
                                          const NestedCodePair& codes, double target_power);

Eigen::MatrixXd encode(const ConstructionALattice& lat, const Word& message,
                       const Eigen::MatrixXd* dither = nullptr);

/* sum_l diag(sigma_1(a_l), ..., sigma_n(a_l)) X_l */
Eigen::MatrixXd ring_combine(const ConstructionALattice& lat, const std::vector<RingElement>& coeffs,
                             const std::vector<Eigen::MatrixXd>& codewords);

bool lattice_membership(const ConstructionALattice& lat, LatticeKind which, const Eigen::MatrixXd& x);

/* Message-space image g(X) of a fine-lattice point. */
std::optional<Word> map_message(const ConstructionALattice& lat, const Eigen::MatrixXd& x);

/* sum_l g(a_l) w_l */
Word relay_message(const ConstructionALattice& lat, const std::vector<RingElement>& coeffs,
                   const std::vector<Word>& messages);

/* prod_j sum_{i in block j} x(i)^2 for x of length n*T. */
double product_distance(const Eigen::VectorXd& x, int blocks, int length);

Eigen::VectorXd flatten(const Eigen::MatrixXd& x);
Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int blocks, int length);

struct DecodedEquation {
    Word codeword;  // fine codeword of the nearest lattice point
    Word message;   // its coset modulo C_c
    double dist_sq = 0.0;
};

/* Nearest fine-lattice point to S = B Y - sum_l A_l D_l, reduced modulo
 * the coarse lattice. Exact: for each fine coset leader the distance to
 * leader + P^T splits into per-coordinate closest-point problems on
 * gamma sigma(P). */
DecodedEquation decode_equation(const ConstructionALattice& lat, const Eigen::MatrixXd& y,
                                const EquationCandidate& candidate,
                                const std::vector<Eigen::MatrixXd>& dithers = {});

struct FineLatticePoint {
    std::vector<RingElement> coords;  // O_K coordinates
    Eigen::VectorXd embedded;         // gamma sigma(x), flattened
    bool in_coarse = false;
};

/* Every nonzero point of gamma Lambda_f with Euclidean norm <= radius. */
std::vector<FineLatticePoint> enumerate_fine_points(const ConstructionALattice& lat, double radius);

struct UnionBound {
    double value = 0.0;
    std::uint64_t terms = 0;
    double radius = 0.0;
};

/* Partial sum over fine-not-coarse points of norm <= radius of
 * (1/2) exp(-n d(gamma x)^(1/n) / (8 sum_j nu_j^2)). */
UnionBound union_bound(const ConstructionALattice& lat, const EffectiveNoiseSpec& noise, double radius);

/* Grows the radius until at least `min_terms` terms are summed. */
UnionBound union_bound_with_terms(const ConstructionALattice& lat, const EffectiveNoiseSpec& noise,
                                  std::uint64_t min_terms);

struct CodecOptions {
    bool dither = true;
    bool channel_noise = true;
    int threads = 1;
};

struct CodecStats {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double error_rate = 0.0;
    double stderr_rate = 0.0;
};

CodecStats simulate_codec(const ConstructionALattice& lat, const BlockFadingChannel& channel,
                          const EquationCandidate& candidate, std::uint64_t trials, std::uint64_t seed,
                          const CodecOptions& options = {});

}  // namespace cfal

#endif
