#ifndef CFAL_SIMKIT_HPP
#define CFAL_SIMKIT_HPP

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfal/cfchan.hpp"

namespace cfal {

enum class SchemeKind { MacCapacity, NaiveZ, AmZ, AmRing };

struct Scheme {
    SchemeKind kind = SchemeKind::MacCapacity;
    std::int64_t d = 0;  // only for AmRing

    /* "mac", "naive_Z", "am_Z" or "am_ring(d)" */
    static Scheme parse(const std::string& text);
    std::string label() const;

    friend bool operator==(const Scheme&, const Scheme&) = default;
};

struct SweepConfig {
    int blocks = 2;
    int users = 2;
    std::vector<double> snr_db;
    std::uint64_t trials = 2000;
    std::vector<Scheme> schemes;
    std::uint64_t master_seed = 1;
    int threads = 1;
    bool keep_trials = false;
};

struct SweepRow {
    double snr_db = 0.0;
    Scheme scheme;
    double mean_rate_bits = 0.0;
    double stderr_bits = 0.0;
    std::uint64_t trials = 0;
};

struct SweepResult {
    std::vector<double> snr_db;
    std::vector<Scheme> schemes;
    std::uint64_t master_seed = 0;
    std::uint64_t channel_draws = 0;
    /* rows ordered by SNR, then scheme in config order */
    std::vector<SweepRow> rows;
    /* per_trial[t](s, k): rate of scheme k at SNR s in trial t (keep_trials only) */
    std::vector<Eigen::MatrixXd> per_trial;

    const SweepRow& row(std::size_t snr_index, std::size_t scheme_index) const
    {
        return rows[snr_index * schemes.size() + scheme_index];
    }
    std::size_t scheme_index(const Scheme& s) const;
};

/* i.i.d. N(0, 1) gains, L x n, from the substream of (seed, trial). */
Eigen::MatrixXd sample_channels(std::uint64_t master_seed, std::uint64_t trial_index, int blocks, int users);

double snr_from_db(double snr_db);

/* Rate of one scheme on one channel. */
double scheme_rate(const Scheme& scheme, const BlockFadingChannel& channel);

SweepResult run_sweep(const SweepConfig& config);

/* Least-squares slope of the mean rate against (1/2) log2 P over the SNRs
 * inside [lo_db, hi_db]. */
double dof_slope(const SweepResult& result, const Scheme& scheme, double lo_db, double hi_db);

/* Neumaier-compensated sum. */
double compensated_sum(const std::vector<double>& values);

}  // namespace cfal

#endif
