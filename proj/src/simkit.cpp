#include "cfal/simkit.hpp"

#include <cmath>
#include <map>
#include <thread>

#include "cfal/error.hpp"
#include "cfal/seeding.hpp"
#include "cfal/svp.hpp"

namespace cfal {

Scheme Scheme::parse(const std::string& text)
{
    if (text == "mac")
        return {SchemeKind::MacCapacity, 0};
    if (text == "naive_Z")
        return {SchemeKind::NaiveZ, 0};
    if (text == "am_Z")
        return {SchemeKind::AmZ, 0};
    const std::string prefix = "am_ring(";
    if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size() + 1 && text.back() == ')') {
        const std::string digits = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        std::size_t used = 0;
        std::int64_t d = 0;
        try {
            d = std::stoll(digits, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != digits.size() || used == 0)
            fail(ErrorKind::InvalidValue, "bad ring scheme '" + text + "'");
        make_quadratic_field(d);  // validates d
        return {SchemeKind::AmRing, d};
    }
    fail(ErrorKind::InvalidValue, "unknown scheme '" + text + "'");
}

std::string Scheme::label() const
{
    switch (kind) {
    case SchemeKind::MacCapacity: return "mac";
    case SchemeKind::NaiveZ: return "naive_Z";
    case SchemeKind::AmZ: return "am_Z";
    case SchemeKind::AmRing: return "am_ring(" + std::to_string(d) + ")";
    }
    return "?";
}

std::size_t SweepResult::scheme_index(const Scheme& s) const
{
    for (std::size_t k = 0; k < schemes.size(); ++k)
        if (schemes[k] == s)
            return k;
    fail(ErrorKind::InvalidValue, "scheme " + s.label() + " not in the sweep");
}

Eigen::MatrixXd sample_channels(std::uint64_t master_seed, std::uint64_t trial_index, int blocks, int users)
{
    Rng rng = trial_rng(master_seed, trial_index);
    GaussianSource gauss(rng);
    Eigen::MatrixXd gains(users, blocks);
    for (int j = 0; j < blocks; ++j)
        for (int l = 0; l < users; ++l)
            gains(l, j) = gauss();
    return gains;
}

double snr_from_db(double snr_db)
{
    return std::pow(10.0, snr_db / 10.0);
}

double scheme_rate(const Scheme& scheme, const BlockFadingChannel& channel)
{
    switch (scheme.kind) {
    case SchemeKind::MacCapacity: return mac_sum_capacity(channel);
    case SchemeKind::NaiveZ: return naive_rate(channel).rate_bits;
    case SchemeKind::AmZ: return best_equation(NumberField::rationals(), channel).rate_bits;
    case SchemeKind::AmRing: return best_equation(make_quadratic_field(scheme.d), channel).rate_bits;
    }
    return 0.0;
}

double compensated_sum(const std::vector<double>& values)
{
    double sum = 0.0;
    double carry = 0.0;
    for (const double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            carry += (sum - t) + v;
        else
            carry += (v - t) + sum;
        sum = t;
    }
    return sum + carry;
}

SweepResult run_sweep(const SweepConfig& config)
{
    if (config.trials < 1)
        fail(ErrorKind::InvalidValue, "trials must be at least 1");
    if (config.schemes.empty())
        fail(ErrorKind::InvalidValue, "at least one scheme is required");
    if (config.blocks < 1 || config.users < 1)
        fail(ErrorKind::InvalidValue, "n and L must be positive");
    for (const double s : config.snr_db)
        if (!std::isfinite(s))
            fail(ErrorKind::InvalidValue, "SNR values must be finite");
    for (const auto& s : config.schemes)
        if (s.kind == SchemeKind::AmRing && config.blocks != 2)
            fail(ErrorKind::InvalidValue, "quadratic rings need n = 2 blocks");

    std::vector<double> snrs = config.snr_db;
    std::sort(snrs.begin(), snrs.end());
    const auto S = snrs.size();
    const auto K = config.schemes.size();
    const auto trials = config.trials;

    std::vector<Eigen::MatrixXd> rates(static_cast<std::size_t>(trials));
    std::atomic<std::uint64_t> draws{0};

    auto run_trial = [&](std::uint64_t t) {
        const Eigen::MatrixXd gains = sample_channels(config.master_seed, t, config.blocks, config.users);
        draws.fetch_add(1, std::memory_order_relaxed);
        Eigen::MatrixXd& out = rates[static_cast<std::size_t>(t)];
        out.resize(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(K));
        for (std::size_t s = 0; s < S; ++s) {
            const BlockFadingChannel channel(gains, snr_from_db(snrs[s]));
            for (std::size_t k = 0; k < K; ++k)
                out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) =
                    scheme_rate(config.schemes[k], channel);
        }
    };

    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
    if (workers <= 1) {
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

    SweepResult result;
    result.snr_db = snrs;
    result.schemes = config.schemes;
    result.master_seed = config.master_seed;
    result.channel_draws = draws.load();
    std::vector<double> column(static_cast<std::size_t>(trials));
    std::vector<double> squares(static_cast<std::size_t>(trials));
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t k = 0; k < K; ++k) {
            for (std::uint64_t t = 0; t < trials; ++t)
                column[static_cast<std::size_t>(t)] =
                    rates[static_cast<std::size_t>(t)](static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k));
            const double mean = compensated_sum(column) / static_cast<double>(trials);
            for (std::uint64_t t = 0; t < trials; ++t) {
                const double dev = column[static_cast<std::size_t>(t)] - mean;
                squares[static_cast<std::size_t>(t)] = dev * dev;
            }
            const double var = trials > 1 ? compensated_sum(squares) / static_cast<double>(trials - 1) : 0.0;
            result.rows.push_back({snrs[s], config.schemes[k], mean,
                                   std::sqrt(var) / std::sqrt(static_cast<double>(trials)), trials});
        }
    }
    if (config.keep_trials)
        result.per_trial = std::move(rates);
    return result;
}

double dof_slope(const SweepResult& result, const Scheme& scheme, double lo_db, double hi_db)
{
    const std::size_t k = result.scheme_index(scheme);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t s = 0; s < result.snr_db.size(); ++s) {
        const double db = result.snr_db[s];
        if (db < lo_db || db > hi_db)
            continue;
        xs.push_back(0.5 * std::log2(snr_from_db(db)));
        ys.push_back(result.row(s, k).mean_rate_bits);
    }
    if (xs.size() < 3)
        fail(ErrorKind::InsufficientPoints, "need at least 3 SNR points in the window");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace cfal
