#include "cfal/lattice_codec.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "cfal/error.hpp"

namespace cfal {

namespace {

constexpr std::int64_t kMaxCosetLeaders = 4096;
constexpr double kIntegralityTolerance = 1e-6;

/* Row reduction of an F_q matrix (row-major, rows x cols) restricted to
 * the first `pivot_cols` columns; returns the pivot column of each row
 * that received one. */
std::vector<int> row_reduce(const ResidueField& fq, std::vector<FqElem>& m, int rows, int cols, int pivot_cols)
{
    auto at = [&](int r, int c) -> FqElem& { return m[static_cast<std::size_t>(r * cols + c)]; };
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < pivot_cols && row < rows; ++col) {
        int found = -1;
        for (int r = row; r < rows; ++r) {
            if (!at(r, col).is_zero()) {
                found = r;
                break;
            }
        }
        if (found < 0)
            continue;
        for (int c = 0; c < cols; ++c)
            std::swap(at(row, c), at(found, c));
        const FqElem inv = fq.inv(at(row, col));
        for (int c = 0; c < cols; ++c)
            at(row, c) = fq.mul(at(row, c), inv);
        for (int r = 0; r < rows; ++r) {
            if (r == row || at(r, col).is_zero())
                continue;
            const FqElem factor = at(r, col);
            for (int c = 0; c < cols; ++c)
                at(r, c) = fq.sub(at(r, c), fq.mul(factor, at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::int64_t ipow(std::int64_t base, int exp)
{
    std::int64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out = checked::mul(out, base);
        if (out > kMaxCosetLeaders * 1024)
            return out;
    }
    return out;
}

Eigen::MatrixXd ideal_embedding(const PrimeIdeal& prime)
{
    const auto z = prime.z_basis();
    return prime.field().embedding_matrix() * z.cast<double>();
}

}  // namespace

NestedCodePair::NestedCodePair(ResidueField field, int length, int fine_dim, int coarse_dim,
                               std::vector<FqElem> generator)
    : field_(field), length_(length), fine_dim_(fine_dim), coarse_dim_(coarse_dim), gen_(std::move(generator))
{
    if (length_ < 1 || fine_dim_ < 0 || coarse_dim_ < 0 || coarse_dim_ > fine_dim_ || fine_dim_ > length_)
        fail(ErrorKind::DimensionMismatch, "need 0 <= l_c <= l_f <= T and T >= 1");
    if (gen_.size() != static_cast<std::size_t>(length_ * fine_dim_))
        fail(ErrorKind::DimensionMismatch, "generator must have T x l_f entries");
    for (auto& e : gen_) {
        e.c0 = field_.reduce(e.c0);
        e.c1 = field_.r() == 1 ? 0 : field_.reduce(e.c1);
    }
    auto copy = gen_;
    const auto pivots = row_reduce(field_, copy, length_, fine_dim_, fine_dim_);
    if (static_cast<int>(pivots.size()) != fine_dim_)
        fail(ErrorKind::RankDeficientCode, "G_f does not have full column rank");
}

Word NestedCodePair::encode(const Word& info) const
{
    if (static_cast<int>(info.size()) != fine_dim_)
        fail(ErrorKind::DimensionMismatch, "info vector length differs from l_f");
    Word word(static_cast<std::size_t>(length_));
    for (int i = 0; i < length_; ++i) {
        FqElem acc;
        for (int k = 0; k < fine_dim_; ++k)
            acc = field_.add(acc, field_.mul(generator(i, k), info[static_cast<std::size_t>(k)]));
        word[static_cast<std::size_t>(i)] = acc;
    }
    return word;
}

Word NestedCodePair::encode_message(const Word& message) const
{
    if (static_cast<int>(message.size()) != message_dim())
        fail(ErrorKind::DimensionMismatch, "message length differs from l_f - l_c");
    Word info(static_cast<std::size_t>(fine_dim_));
    std::copy(message.begin(), message.end(), info.begin() + coarse_dim_);
    return encode(info);
}

std::optional<Word> NestedCodePair::solve(const Word& word) const
{
    if (static_cast<int>(word.size()) != length_)
        fail(ErrorKind::DimensionMismatch, "word length differs from T");
    const int cols = fine_dim_ + 1;
    std::vector<FqElem> m(static_cast<std::size_t>(length_ * cols));
    for (int i = 0; i < length_; ++i) {
        for (int k = 0; k < fine_dim_; ++k)
            m[static_cast<std::size_t>(i * cols + k)] = generator(i, k);
        m[static_cast<std::size_t>(i * cols + fine_dim_)] = word[static_cast<std::size_t>(i)];
    }
    const auto pivots = row_reduce(field_, m, length_, cols, fine_dim_);
    // full column rank: pivots are 0..l_f-1 on rows 0..l_f-1
    for (int r = fine_dim_; r < length_; ++r)
        if (!m[static_cast<std::size_t>(r * cols + fine_dim_)].is_zero())
            return std::nullopt;
    Word info(static_cast<std::size_t>(fine_dim_));
    for (int k = 0; k < fine_dim_; ++k)
        info[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k * cols + fine_dim_)];
    return info;
}

bool NestedCodePair::in_coarse(const Word& word) const
{
    const auto info = solve(word);
    if (!info)
        return false;
    for (int k = coarse_dim_; k < fine_dim_; ++k)
        if (!(*info)[static_cast<std::size_t>(k)].is_zero())
            return false;
    return true;
}

std::optional<Word> NestedCodePair::message_of(const Word& word) const
{
    const auto info = solve(word);
    if (!info)
        return std::nullopt;
    return Word(info->begin() + coarse_dim_, info->end());
}

ConstructionALattice::ConstructionALattice(PrimeIdeal prime, NestedCodePair codes)
    : prime_(std::move(prime)), codes_(std::move(codes)), ideal_enum_(ideal_embedding(prime_))
{
}

ConstructionALattice build_construction_a(const NumberField& field, const PrimeIdeal& prime,
                                          const NestedCodePair& codes, double target_power)
{
    if (!(prime.field() == field))
        fail(ErrorKind::DimensionMismatch, "prime ideal belongs to a different field");
    const auto& fq = codes.field();
    if (fq.p() != prime.p() || fq.r() != prime.inertial_degree())
        fail(ErrorKind::DimensionMismatch, "code alphabet does not match O_K / P");
    if (!(target_power > 0.0))
        fail(ErrorKind::InvalidValue, "target power must be positive");
    if (ipow(fq.order(), codes.fine_dim()) > kMaxCosetLeaders)
        fail(ErrorKind::TooLarge, "more than 4096 fine coset leaders");

    ConstructionALattice lat(prime, codes);
    const int T = codes.length();
    const int n = field.degree();
    const auto ideal = prime.z_basis();

    auto generators = [&](int code_dim) {
        const int r = fq.r();
        IntMatrix gens = IntMatrix::Zero(2 * T + code_dim * r, 2 * T);
        for (int i = 0; i < T; ++i) {
            for (int k = 0; k < 2; ++k) {
                gens(2 * i + k, 2 * i) = ideal(0, k);
                gens(2 * i + k, 2 * i + 1) = ideal(1, k);
            }
        }
        int row = 2 * T;
        for (int k = 0; k < code_dim; ++k) {
            for (int b = 0; b < r; ++b) {
                const FqElem beta = b == 0 ? FqElem{1, 0} : FqElem{0, 1};
                for (int i = 0; i < T; ++i) {
                    const auto lifted = residue_lift(prime, fq.mul(beta, codes.generator(i, k)));
                    gens(row, 2 * i) = lifted.u;
                    gens(row, 2 * i + 1) = lifted.v;
                }
                ++row;
            }
        }
        return gens;
    };
    lat.fine_int_ = hermite_basis(generators(codes.fine_dim()));
    lat.coarse_int_ = hermite_basis(generators(codes.coarse_dim()));

    auto embed_rows = [&](const IntMatrix& rows) {
        Eigen::MatrixXd out(n * T, rows.rows());
        for (Eigen::Index k = 0; k < rows.rows(); ++k) {
            std::vector<RingElement> x(static_cast<std::size_t>(T));
            for (int i = 0; i < T; ++i)
                x[static_cast<std::size_t>(i)] = {rows(k, 2 * i), rows(k, 2 * i + 1)};
            out.col(k) = flatten(lat.embed(x, 1.0));
        }
        return out;
    };
    lat.fine_emb_ = embed_rows(lat.fine_int_);
    lat.coarse_emb_ = embed_rows(lat.coarse_int_);
    lat.phi_inv_ = field.embedding_matrix().inverse();

    const Eigen::MatrixXd reduced = lll_reduce(lat.coarse_emb_).basis;
    const double unit_moment = reduced.colwise().squaredNorm().sum() / (12.0 * n * T);
    lat.gamma_ = std::sqrt(target_power / unit_moment);
    lat.shaping_ = lat.gamma_ * reduced;
    lat.shaping_inv_ = lat.shaping_.inverse();

    const std::int64_t q = fq.order();
    const int lf = codes.fine_dim();
    const std::int64_t count = ipow(q, lf);
    lat.codewords_.reserve(static_cast<std::size_t>(count));
    Word info(static_cast<std::size_t>(lf));
    for (std::int64_t idx = 0; idx < count; ++idx) {
        std::int64_t rest = idx;
        for (int k = 0; k < lf; ++k) {
            info[static_cast<std::size_t>(k)] = fq.from_index(rest % q);
            rest /= q;
        }
        lat.codewords_.push_back(codes.encode(info));
    }
    return lat;
}

double ConstructionALattice::fine_volume(double scale) const
{
    return lattice_volume(scale * fine_emb_);
}

double ConstructionALattice::coarse_volume(double scale) const
{
    return lattice_volume(scale * coarse_emb_);
}

double ConstructionALattice::message_rate_bits() const
{
    return static_cast<double>(codes_.message_dim() * prime_.inertial_degree()) / length() *
           std::log2(static_cast<double>(prime_.p()));
}

double ConstructionALattice::shaping_second_moment() const
{
    return shaping_.colwise().squaredNorm().sum() / (12.0 * static_cast<double>(shaping_.rows()));
}

double ConstructionALattice::empirical_second_moment(int samples, std::uint64_t seed) const
{
    Rng rng(substream_seed(seed, 0));
    double total = 0.0;
    for (int s = 0; s < samples; ++s)
        total += sample_dither(rng).squaredNorm();
    return total / (static_cast<double>(samples) * static_cast<double>(shaping_.rows()));
}

Eigen::MatrixXd ConstructionALattice::embed(const std::vector<RingElement>& x, double scale) const
{
    const int n = blocks();
    const int T = static_cast<int>(x.size());
    Eigen::MatrixXd out(n, T);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < T; ++i)
            out(j, i) = scale * field().conjugate(x[static_cast<std::size_t>(i)], j);
    return out;
}

Eigen::MatrixXd ConstructionALattice::pull_back(const Eigen::MatrixXd& x) const
{
    return phi_inv_ * (x / gamma_);
}

std::optional<std::vector<RingElement>> ConstructionALattice::integer_coordinates(const Eigen::MatrixXd& x) const
{
    if (x.rows() != blocks() || x.cols() != length())
        return std::nullopt;
    const Eigen::MatrixXd coords = pull_back(x);
    std::vector<RingElement> out(static_cast<std::size_t>(length()));
    for (int i = 0; i < length(); ++i) {
        const double u = std::round(coords(0, i));
        const double v = std::round(coords(1, i));
        if (!std::isfinite(u) || !std::isfinite(v) || std::abs(coords(0, i) - u) > kIntegralityTolerance ||
            std::abs(coords(1, i) - v) > kIntegralityTolerance)
            return std::nullopt;
        out[static_cast<std::size_t>(i)] = {static_cast<std::int64_t>(u), static_cast<std::int64_t>(v)};
    }
    return out;
}

Eigen::MatrixXd ConstructionALattice::reduce_mod_coarse(const Eigen::MatrixXd& x) const
{
    const Eigen::VectorXd v = flatten(x);
    const Eigen::VectorXd k = (shaping_inv_ * v).array().round().matrix();
    return unflatten(v - shaping_ * k, blocks(), length());
}

Eigen::MatrixXd ConstructionALattice::sample_dither(Rng& rng) const
{
    Eigen::VectorXd u(shaping_.cols());
    for (Eigen::Index k = 0; k < u.size(); ++k)
        u(k) = uniform01(rng) - 0.5;
    return unflatten(shaping_ * u, blocks(), length());
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& x)
{
    Eigen::VectorXd v(x.size());
    for (Eigen::Index j = 0; j < x.rows(); ++j)
        v.segment(j * x.cols(), x.cols()) = x.row(j).transpose();
    return v;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int blocks, int length)
{
    Eigen::MatrixXd x(blocks, length);
    for (int j = 0; j < blocks; ++j)
        x.row(j) = v.segment(j * length, length).transpose();
    return x;
}

Eigen::MatrixXd encode(const ConstructionALattice& lat, const Word& message, const Eigen::MatrixXd* dither)
{
    const Word word = lat.codes().encode_message(message);
    std::vector<RingElement> lifted(word.size());
    for (std::size_t i = 0; i < word.size(); ++i)
        lifted[i] = residue_lift(lat.prime(), word[i]);
    Eigen::MatrixXd x = lat.embed(lifted, lat.gamma());
    if (dither != nullptr)
        x += *dither;
    return lat.reduce_mod_coarse(x);
}

Eigen::MatrixXd ring_combine(const ConstructionALattice& lat, const std::vector<RingElement>& coeffs,
                             const std::vector<Eigen::MatrixXd>& codewords)
{
    if (coeffs.size() != codewords.size() || codewords.empty())
        fail(ErrorKind::DimensionMismatch, "need one coefficient per codeword");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(codewords.front().rows(), codewords.front().cols());
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        if (codewords[l].rows() != out.rows() || codewords[l].cols() != out.cols())
            fail(ErrorKind::DimensionMismatch, "codeword shapes differ");
        for (Eigen::Index j = 0; j < out.rows(); ++j)
            out.row(j) += lat.field().conjugate(coeffs[l], static_cast<int>(j)) * codewords[l].row(j);
    }
    return out;
}

namespace {

std::optional<Word> residue_word(const ConstructionALattice& lat, const Eigen::MatrixXd& x)
{
    const auto coords = lat.integer_coordinates(x);
    if (!coords)
        return std::nullopt;
    Word word(coords->size());
    for (std::size_t i = 0; i < coords->size(); ++i)
        word[i] = residue_reduce(lat.prime(), (*coords)[i]);
    return word;
}

}  // namespace

bool lattice_membership(const ConstructionALattice& lat, LatticeKind which, const Eigen::MatrixXd& x)
{
    const auto word = residue_word(lat, x);
    if (!word)
        return false;
    return which == LatticeKind::Fine ? lat.codes().in_fine(*word) : lat.codes().in_coarse(*word);
}

std::optional<Word> map_message(const ConstructionALattice& lat, const Eigen::MatrixXd& x)
{
    const auto word = residue_word(lat, x);
    if (!word)
        return std::nullopt;
    return lat.codes().message_of(*word);
}

Word relay_message(const ConstructionALattice& lat, const std::vector<RingElement>& coeffs,
                   const std::vector<Word>& messages)
{
    if (coeffs.size() != messages.size())
        fail(ErrorKind::DimensionMismatch, "need one coefficient per message");
    const auto& fq = lat.codes().field();
    Word out(static_cast<std::size_t>(lat.codes().message_dim()));
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        const FqElem g = residue_reduce(lat.prime(), coeffs[l]);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = fq.add(out[k], fq.mul(g, messages[l][k]));
    }
    return out;
}

double product_distance(const Eigen::VectorXd& x, int blocks, int length)
{
    if (x.size() != static_cast<Eigen::Index>(blocks) * length)
        fail(ErrorKind::DimensionMismatch, "vector length must be n * T");
    double product = 1.0;
    for (int j = 0; j < blocks; ++j)
        product *= x.segment(j * length, length).squaredNorm();
    return product;
}

DecodedEquation decode_equation(const ConstructionALattice& lat, const Eigen::MatrixXd& y,
                                const EquationCandidate& candidate, const std::vector<Eigen::MatrixXd>& dithers)
{
    const int n = lat.blocks();
    const int T = lat.length();
    if (y.rows() != n || y.cols() != T || candidate.blocks() != n)
        fail(ErrorKind::DimensionMismatch, "received matrix or candidate does not match the lattice");

    Eigen::MatrixXd s = candidate.b.asDiagonal() * y;
    if (!dithers.empty()) {
        if (dithers.size() != candidate.a.size())
            fail(ErrorKind::DimensionMismatch, "need one dither per user");
        for (std::size_t l = 0; l < dithers.size(); ++l)
            s -= candidate.sigma.col(static_cast<Eigen::Index>(l)).asDiagonal() * dithers[l];
    }

    const auto& fq = lat.codes().field();
    const std::int64_t q = fq.order();
    const double g = lat.gamma();
    const Eigen::MatrixXd unscaled = s / g;
    // dist(i, rho) from column i to gamma sigma(lift(rho) + P)
    Eigen::MatrixXd dist(T, q);
    for (int i = 0; i < T; ++i) {
        for (std::int64_t k = 0; k < q; ++k) {
            const RingElement leader = residue_lift(lat.prime(), fq.from_index(k));
            Eigen::VectorXd target = unscaled.col(i);
            for (int j = 0; j < n; ++j)
                target(j) -= lat.field().conjugate(leader, j);
            dist(i, k) = lat.ideal_enumerator().closest_vector(target).dist_sq * g * g;
        }
    }

    const Word* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& word : lat.fine_codewords()) {
        double total = 0.0;
        for (int i = 0; i < T; ++i)
            total += dist(i, fq.index(word[static_cast<std::size_t>(i)]));
        if (total < best_dist) {
            best_dist = total;
            best = &word;
        }
    }
    DecodedEquation out;
    out.codeword = *best;
    out.message = *lat.codes().message_of(*best);
    out.dist_sq = best_dist;
    return out;
}

std::vector<FineLatticePoint> enumerate_fine_points(const ConstructionALattice& lat, double radius)
{
    const Eigen::MatrixXd basis = lat.gamma() * lat.fine_embedded_basis();
    const LatticeEnumerator enumerator(basis);
    const int T = lat.length();
    const IntMatrix& rows = lat.fine_integer_basis();
    std::vector<FineLatticePoint> points;
    const double radius_sq = radius * radius;
    enumerator.enumerate_ball(radius_sq, [&](const IntVector& coords, double) {
        FineLatticePoint pt;
        pt.coords.resize(static_cast<std::size_t>(T));
        Word word(static_cast<std::size_t>(T));
        for (int i = 0; i < T; ++i) {
            std::int64_t u = 0;
            std::int64_t v = 0;
            for (Eigen::Index k = 0; k < coords.size(); ++k) {
                u = checked::add(u, checked::mul(coords(k), rows(k, 2 * i)));
                v = checked::add(v, checked::mul(coords(k), rows(k, 2 * i + 1)));
            }
            pt.coords[static_cast<std::size_t>(i)] = {u, v};
            word[static_cast<std::size_t>(i)] = residue_reduce(lat.prime(), {u, v});
        }
        pt.embedded = basis * coords.cast<double>();
        pt.in_coarse = lat.codes().in_coarse(word);
        points.push_back(std::move(pt));
        return radius_sq;
    });
    return points;
}

UnionBound union_bound(const ConstructionALattice& lat, const EffectiveNoiseSpec& noise, double radius)
{
    if (!(radius > 0.0))
        fail(ErrorKind::RadiusTooSmall, "radius must be positive");
    if ((noise.nu_sq.array() < 0.0).any())
        fail(ErrorKind::InvalidValue, "effective noise variances must be nonnegative");
    const int n = lat.blocks();
    const double total_noise = noise.nu_sq.sum();
    UnionBound out;
    out.radius = radius;
    for (const auto& pt : enumerate_fine_points(lat, radius)) {
        if (pt.in_coarse)
            continue;
        ++out.terms;
        if (total_noise > 0.0) {
            const double d = product_distance(pt.embedded, n, lat.length());
            out.value += 0.5 * std::exp(-n * std::pow(d, 1.0 / n) / (8.0 * total_noise));
        }
    }
    if (out.terms == 0)
        fail(ErrorKind::RadiusTooSmall, "no fine-not-coarse lattice point within the radius");
    return out;
}

UnionBound union_bound_with_terms(const ConstructionALattice& lat, const EffectiveNoiseSpec& noise,
                                  std::uint64_t min_terms)
{
    const Eigen::MatrixXd reduced = lll_reduce(lat.gamma() * lat.fine_embedded_basis()).basis;
    double radius = std::sqrt(reduced.colwise().squaredNorm().minCoeff()) * 1.001;
    for (int iter = 0; iter < 200; ++iter) {
        try {
            auto ub = union_bound(lat, noise, radius);
            if (ub.terms >= min_terms)
                return ub;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::RadiusTooSmall)
                throw;
        }
        radius *= 1.2;
    }
    fail(ErrorKind::TooLarge, "could not reach the requested number of union-bound terms");
}

CodecStats simulate_codec(const ConstructionALattice& lat, const BlockFadingChannel& channel,
                          const EquationCandidate& candidate, std::uint64_t trials, std::uint64_t seed,
                          const CodecOptions& options)
{
    if (trials < 1)
        fail(ErrorKind::InvalidValue, "need at least one trial");
    const int n = lat.blocks();
    const int T = lat.length();
    const int L = channel.users();
    if (channel.blocks() != n || candidate.blocks() != n || static_cast<int>(candidate.a.size()) != L)
        fail(ErrorKind::DimensionMismatch, "channel, candidate and lattice disagree on n or L");

    const auto& fq = lat.codes().field();
    const int k = lat.codes().message_dim();
    std::vector<std::uint8_t> failed(static_cast<std::size_t>(trials), 0);

    auto run_trial = [&](std::uint64_t t) {
        Rng rng = trial_rng(seed, t);
        GaussianSource gauss(rng);
        std::vector<Word> messages(static_cast<std::size_t>(L), Word(static_cast<std::size_t>(k)));
        std::vector<Eigen::MatrixXd> dithers;
        Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, T);
        for (int l = 0; l < L; ++l) {
            for (auto& e : messages[static_cast<std::size_t>(l)])
                e = fq.from_index(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(fq.order())));
            Eigen::MatrixXd x;
            if (options.dither) {
                dithers.push_back(lat.sample_dither(rng));
                x = encode(lat, messages[static_cast<std::size_t>(l)], &dithers.back());
            } else {
                x = encode(lat, messages[static_cast<std::size_t>(l)]);
            }
            y += channel.gains().row(l).transpose().asDiagonal() * x;
        }
        if (options.channel_noise)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < T; ++i)
                    y(j, i) += gauss();
        const auto decoded = decode_equation(lat, y, candidate, dithers);
        failed[static_cast<std::size_t>(t)] = decoded.message != relay_message(lat, candidate.a, messages);
    };

    const unsigned workers = std::max(1, options.threads);
    if (workers == 1) {
        for (std::uint64_t t = 0; t < trials; ++t)
            run_trial(t);
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&, w] {
                    try {
                        for (std::uint64_t t = w; t < trials; t += workers)
                            run_trial(t);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
        }
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    CodecStats stats;
    stats.trials = trials;
    for (auto f : failed)
        stats.errors += f;
    stats.error_rate = static_cast<double>(stats.errors) / static_cast<double>(trials);
    stats.stderr_rate = std::sqrt(stats.error_rate * (1.0 - stats.error_rate) / static_cast<double>(trials));
    return stats;
}

}  // namespace cfal
