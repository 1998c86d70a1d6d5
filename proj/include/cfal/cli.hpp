#ifndef CFAL_CLI_HPP
#define CFAL_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfal/simkit.hpp"

namespace cfal::cli {

/* Sweep settings from a `key = value` file plus flag overrides.
 * Recognized keys: n, L, snr_db, trials, schemes, seed, d_list, output. */
struct CliConfig {
    int n = 2;
    int L = 2;
    std::vector<double> snr_db;
    std::uint64_t trials = 2000;
    std::vector<Scheme> schemes;
    std::uint64_t seed = 1;
    std::vector<std::int64_t> d_list;
    std::optional<std::string> output;

    SweepConfig sweep_config(int threads) const;
};

CliConfig default_config();

/* `flags` use the same keys as the file and take precedence. */
CliConfig parse_config_text(const std::string& text, const std::map<std::string, std::string>& flags = {});
CliConfig parse_config(const std::string& path, const std::map<std::string, std::string>& flags = {});

/* "a,b,c" or "start:step:stop" */
std::vector<double> parse_snr_list(const std::string& text);

/* "h11,h21;h12,h22": blocks separated by ';', users by ','. Returns L x n. */
Eigen::MatrixXd parse_channel_text(const std::string& text);
/* First line "n L", then n lines of L gains. */
Eigen::MatrixXd read_channel_file(const std::string& path);

/* First line the dimension, then dim rows of dim reals; columns are the
 * basis vectors. */
Eigen::MatrixXd read_basis_file(const std::string& path);

std::string format_sweep_csv(const SweepResult& result);
SweepResult parse_sweep_csv(const std::string& text);

/* Writes via a temporary file and a rename so failures leave no partial file. */
void write_file_atomically(const std::string& path, const std::string& content);

/* Exit codes: 0 success, 2 validation error, 1 runtime error. */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfal::cli

#endif
