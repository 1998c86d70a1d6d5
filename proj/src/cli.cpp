#include "cfal/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cfal/error.hpp"
#include "cfal/lattice_codec.hpp"
#include "cfal/svp.hpp"

namespace cfal::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep))
        out.push_back(trim(item));
    return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& key)
{
    const std::string s = trim(text);
    T value{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end || s.empty())
        fail(ErrorKind::InvalidValue, "bad value '" + text + "' for " + key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            fail(ErrorKind::InvalidValue, "non-finite value for " + key);
    }
    return value;
}

std::string fixed6(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string compact(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void apply(CliConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "n") {
        cfg.n = parse_number<int>(value, key);
        if (cfg.n < 1)
            fail(ErrorKind::InvalidValue, "n must be positive");
    } else if (key == "L") {
        cfg.L = parse_number<int>(value, key);
        if (cfg.L < 1)
            fail(ErrorKind::InvalidValue, "L must be positive");
    } else if (key == "snr_db") {
        cfg.snr_db = parse_snr_list(value);
    } else if (key == "trials") {
        const auto t = parse_number<long long>(value, key);
        if (t < 1)
            fail(ErrorKind::InvalidValue, "trials must be at least 1");
        cfg.trials = static_cast<std::uint64_t>(t);
    } else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& item : split(value, ','))
            cfg.schemes.push_back(Scheme::parse(item));
        if (cfg.schemes.empty())
            fail(ErrorKind::InvalidValue, "schemes list is empty");
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "d_list") {
        cfg.d_list.clear();
        for (const auto& item : split(value, ',')) {
            const auto d = parse_number<std::int64_t>(item, key);
            make_quadratic_field(d);
            cfg.d_list.push_back(d);
        }
    } else if (key == "output") {
        cfg.output = trim(value);
    } else {
        fail(ErrorKind::UnknownKey, "unknown key '" + key + "'");
    }
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::InvalidValue, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::CholeskyFailure:
    case ErrorKind::RankDeficient:
    case ErrorKind::Overflow:
    case ErrorKind::RadiusTooSmall:
    case ErrorKind::InsufficientPoints:
        return 1;
    default:
        return 2;
    }
}

}  // namespace

CliConfig default_config()
{
    CliConfig cfg;
    cfg.snr_db = parse_snr_list("0:5:50");
    for (const char* s : {"mac", "naive_Z", "am_Z", "am_ring(3)", "am_ring(5)", "am_ring(7)"})
        cfg.schemes.push_back(Scheme::parse(s));
    return cfg;
}

SweepConfig CliConfig::sweep_config(int threads) const
{
    SweepConfig sc;
    sc.blocks = n;
    sc.users = L;
    sc.snr_db = snr_db;
    sc.trials = trials;
    sc.master_seed = seed;
    sc.threads = threads;
    if (d_list.empty()) {
        sc.schemes = schemes;
    } else {
        for (const auto& s : schemes)
            if (s.kind != SchemeKind::AmRing)
                sc.schemes.push_back(s);
        for (const auto d : d_list)
            sc.schemes.push_back({SchemeKind::AmRing, d});
    }
    return sc;
}

std::vector<double> parse_snr_list(const std::string& text)
{
    std::vector<double> out;
    const std::string s = trim(text);
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            fail(ErrorKind::InvalidValue, "range must be start:step:stop");
        const double start = parse_number<double>(parts[0], "snr_db");
        const double step = parse_number<double>(parts[1], "snr_db");
        const double stop = parse_number<double>(parts[2], "snr_db");
        if (!(step > 0.0) || stop < start)
            fail(ErrorKind::InvalidValue, "range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= count; ++i)
            out.push_back(start + static_cast<double>(i) * step);
    } else {
        for (const auto& item : split(s, ','))
            out.push_back(parse_number<double>(item, "snr_db"));
    }
    if (out.empty())
        fail(ErrorKind::InvalidValue, "snr_db list is empty");
    return out;
}

CliConfig parse_config_text(const std::string& text, const std::map<std::string, std::string>& flags)
{
    CliConfig cfg = default_config();
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::ParseError, "line " + std::to_string(number) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(ErrorKind::ParseError, "line " + std::to_string(number) + ": missing key");
        try {
            apply(cfg, key, value);
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(number) + ": " + e.message());
        }
    }
    for (const auto& [key, value] : flags)
        apply(cfg, key, value);
    return cfg;
}

CliConfig parse_config(const std::string& path, const std::map<std::string, std::string>& flags)
{
    return parse_config_text(read_text(path), flags);
}

Eigen::MatrixXd parse_channel_text(const std::string& text)
{
    const auto blocks = split(text, ';');
    std::vector<std::vector<double>> rows;
    for (const auto& b : blocks) {
        if (b.empty())
            continue;
        std::vector<double> gains;
        for (const auto& g : split(b, ','))
            gains.push_back(parse_number<double>(g, "channel"));
        rows.push_back(gains);
    }
    if (rows.empty() || rows.front().empty())
        fail(ErrorKind::InvalidValue, "empty channel");
    const auto L = rows.front().size();
    Eigen::MatrixXd h(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != L)
            fail(ErrorKind::InvalidValue, "every block needs the same number of users");
        for (std::size_t l = 0; l < L; ++l)
            h(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = rows[j][l];
    }
    return h;
}

Eigen::MatrixXd read_channel_file(const std::string& path)
{
    std::istringstream in(read_text(path));
    long n = 0;
    long L = 0;
    if (!(in >> n >> L) || n < 1 || L < 1)
        fail(ErrorKind::ParseError, path + ": first line must be 'n L'");
    Eigen::MatrixXd h(L, n);
    for (long j = 0; j < n; ++j)
        for (long l = 0; l < L; ++l)
            if (!(in >> h(l, j)))
                fail(ErrorKind::ParseError, path + ": expected " + std::to_string(n * L) + " gains");
    return h;
}

Eigen::MatrixXd read_basis_file(const std::string& path)
{
    std::istringstream in(read_text(path));
    long dim = 0;
    if (!(in >> dim) || dim < 1)
        fail(ErrorKind::ParseError, path + ": first line must be the dimension");
    Eigen::MatrixXd b(dim, dim);
    for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c)
            if (!(in >> b(r, c)))
                fail(ErrorKind::ParseError, path + ": expected " + std::to_string(dim * dim) + " entries");
    if (!b.allFinite())
        fail(ErrorKind::InvalidValue, path + ": non-finite entry");
    return b;
}

std::string format_sweep_csv(const SweepResult& result)
{
    std::string out = "snr_db,scheme,mean_rate_bits,stderr_bits,trials,seed\n";
    for (const auto& row : result.rows) {
        out += compact(row.snr_db) + "," + row.scheme.label() + "," + fixed6(row.mean_rate_bits) + "," +
               fixed6(row.stderr_bits) + "," + std::to_string(row.trials) + "," +
               std::to_string(result.master_seed) + "\n";
    }
    return out;
}

SweepResult parse_sweep_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "snr_db,scheme,mean_rate_bits,stderr_bits,trials,seed")
        fail(ErrorKind::ParseError, "line 1: unexpected sweep CSV header");
    SweepResult result;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (trim(line).empty())
            continue;
        const auto cells = split(line, ',');
        if (cells.size() != 6)
            fail(ErrorKind::ParseError, "line " + std::to_string(number) + ": expected 6 fields");
        SweepRow row;
        row.snr_db = parse_number<double>(cells[0], "snr_db");
        row.scheme = Scheme::parse(cells[1]);
        row.mean_rate_bits = parse_number<double>(cells[2], "mean_rate_bits");
        row.stderr_bits = parse_number<double>(cells[3], "stderr_bits");
        row.trials = parse_number<std::uint64_t>(cells[4], "trials");
        result.master_seed = parse_number<std::uint64_t>(cells[5], "seed");
        if (result.snr_db.empty() || result.snr_db.back() != row.snr_db)
            result.snr_db.push_back(row.snr_db);
        if (result.snr_db.size() == 1)
            result.schemes.push_back(row.scheme);
        result.rows.push_back(row);
    }
    if (result.rows.size() != result.snr_db.size() * result.schemes.size())
        fail(ErrorKind::ParseError, "sweep CSV is not a full SNR x scheme grid");
    return result;
}

void write_file_atomically(const std::string& path, const std::string& content)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

namespace {

void emit(const std::optional<std::string>& output, const std::string& content, std::ostream& out)
{
    if (output && !output->empty() && *output != "-")
        write_file_atomically(*output, content);
    else
        out << content;
}

NumberField field_from_d(std::int64_t d)
{
    return d == 1 ? NumberField::rationals() : make_quadratic_field(d);
}

std::string field_info(std::int64_t d)
{
    const auto f = make_quadratic_field(d);
    std::ostringstream os;
    const std::string root = "sqrt" + std::to_string(d);
    os << "field: Q(" << root << ")\n";
    os << "ring: " << f.name() << "\n";
    os << "basis: {1, " << (f.s() == 1 ? "(1+" + root + ")/2" : root) << "}\n";
    os << "discriminant: " << f.discriminant() << "\n";
    os << "theta^2 = " << f.s() << "*theta + " << f.t() << "\n";
    os << "conjugates: " << fixed6(f.theta_conjugates()[0]) << " " << fixed6(f.theta_conjugates()[1]) << "\n";
    os << "embedding_matrix:\n";
    const auto& phi = f.embedding_matrix();
    for (int j = 0; j < 2; ++j)
        os << "  " << fixed6(phi(j, 0)) << " " << fixed6(phi(j, 1)) << "\n";
    return os.str();
}

std::string rate_report(const NumberField& field, const BlockFadingChannel& channel)
{
    const auto c = best_equation(field, channel);
    std::ostringstream os;
    os << "ring: " << field.name() << "\n";
    os << "snr: " << fixed6(channel.snr()) << "\n";
    os << "coefficients:";
    for (const auto& a : c.a)
        os << " (" << a.u << "," << a.v << ")";
    os << "\n";
    for (int j = 0; j < c.blocks(); ++j) {
        os << "block " << j + 1 << ": sigma =";
        for (Eigen::Index l = 0; l < c.sigma.cols(); ++l)
            os << " " << fixed6(c.sigma(j, l));
        os << "  b = " << fixed6(c.b(j)) << "  nu_sq = " << fixed6(c.nu_sq(j)) << "\n";
    }
    os << "quadratic_form: " << fixed6(c.quadratic_form) << "\n";
    os << "rate_bits: " << fixed6(c.rate_bits) << "\n";
    return os.str();
}

std::vector<FqElem> default_generator(const ResidueField& fq, int T, int lf)
{
    // Vandermonde on the nonzero field elements 1, 2, ...: full column rank for T < q
    std::vector<FqElem> gen(static_cast<std::size_t>(T * lf));
    for (int i = 0; i < T; ++i) {
        const FqElem point = fq.from_index(i + 1);
        FqElem power = fq.from_int(1);
        for (int k = 0; k < lf; ++k) {
            gen[static_cast<std::size_t>(i * lf + k)] = power;
            power = fq.mul(power, point);
        }
    }
    return gen;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Compute-and-forward over block-fading channels with algebraic lattices", "cfal"};
    app.require_subcommand(1);

    auto* field_cmd = app.add_subcommand("field", "number-field information");
    field_cmd->require_subcommand(1);
    auto* info_cmd = field_cmd->add_subcommand("info", "integral basis, discriminant and embedding matrix");
    std::int64_t info_d = 0;
    info_cmd->add_option("--d", info_d, "squarefree d > 1 of Q(sqrt d)")->required();

    auto* rate_cmd = app.add_subcommand("rate", "best equation and AM computation rate for one channel");
    std::int64_t rate_d = 5;
    double rate_snr_db = 20.0;
    std::string rate_h;
    std::string rate_file;
    rate_cmd->add_option("--d", rate_d, "ring Q(sqrt d); 1 selects Z")->capture_default_str();
    rate_cmd->add_option("--snr-db", rate_snr_db, "SNR in dB")->required();
    rate_cmd->set_help_flag("--help", "print this help");  // frees -h for the gains
    auto* h_opt = rate_cmd->add_option("--h", rate_h, "gains: blocks separated by ';', users by ','");
    auto* file_opt = rate_cmd->add_option("--channel", rate_file, "channel file ('n L' then n rows)");
    h_opt->excludes(file_opt);

    auto* sweep_cmd = app.add_subcommand("sweep", "ergodic-rate Monte Carlo sweep (CSV)");
    std::string config_path;
    std::map<std::string, std::string> overrides;
    sweep_cmd->add_option("--config", config_path, "key = value config file");
    struct FlagSpec {
        const char* flag;
        const char* key;
        const char* help;
    };
    static const FlagSpec specs[] = {
        {"--n", "n", "blocks per channel use"},
        {"--L", "L", "users"},
        {"--snr-db", "snr_db", "list or start:step:stop"},
        {"--trials", "trials", "channel draws"},
        {"--schemes", "schemes", "mac, naive_Z, am_Z, am_ring(d), comma separated"},
        {"--seed", "seed", "master seed"},
        {"--d-list", "d_list", "replace the am_ring schemes by these d"},
        {"--output", "output", "CSV path (stdout when absent)"},
    };
    std::map<std::string, std::string> flag_values;
    for (const auto& spec : specs)
        sweep_cmd->add_option(spec.flag, flag_values[spec.key], spec.help);
    int threads = 0;
    sweep_cmd->add_option("--threads", threads, "worker threads, 0 = auto")->capture_default_str();

    auto* codec_cmd = app.add_subcommand("codec", "Construction A codec error simulation (CSV)");
    std::int64_t codec_d = 5;
    std::int64_t codec_p = 11;
    int codec_T = 2;
    int codec_lf = 1;
    int codec_lc = 0;
    int codec_L = 2;
    std::string codec_snr = "10:5:30";
    long long codec_trials = 10000;
    std::uint64_t codec_seed = 1;
    std::string codec_gen;
    std::string codec_h;
    std::string codec_output;
    int codec_threads = 1;
    std::uint64_t min_terms = 1000;
    bool no_dither = false;
    codec_cmd->set_help_flag("--help", "print this help");
    codec_cmd->add_option("--d", codec_d)->capture_default_str();
    codec_cmd->add_option("--p", codec_p)->capture_default_str();
    codec_cmd->add_option("--T", codec_T)->capture_default_str();
    codec_cmd->add_option("--lf", codec_lf)->capture_default_str();
    codec_cmd->add_option("--lc", codec_lc)->capture_default_str();
    codec_cmd->add_option("--L", codec_L, "number of users")->capture_default_str();
    codec_cmd->add_option("--snr-db", codec_snr, "list or start:step:stop")->capture_default_str();
    codec_cmd->add_option("--trials", codec_trials)->capture_default_str();
    codec_cmd->add_option("--seed", codec_seed)->capture_default_str();
    codec_cmd->add_option("--generator", codec_gen, "G_f row-major, comma separated residues");
    codec_cmd->add_option("--h", codec_h, "gains; default draws one N(0,1) channel from the seed");
    codec_cmd->add_option("--output", codec_output);
    codec_cmd->add_option("--threads", codec_threads)->capture_default_str();
    codec_cmd->add_option("--min-terms", min_terms, "union-bound terms")->capture_default_str();
    codec_cmd->add_flag("--no-dither", no_dither);

    auto* svp_cmd = app.add_subcommand("svp", "shortest vector of a lattice basis file");
    std::string basis_path;
    svp_cmd->add_option("--basis", basis_path, "'dim' then dim rows; columns are basis vectors")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty())
        reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0)
            return 0;
        err << app.help();
        return 2;
    }

    try {
        if (*field_cmd) {
            out << field_info(info_d);
        } else if (*rate_cmd) {
            const Eigen::MatrixXd gains = !rate_file.empty() ? read_channel_file(rate_file)
                                          : !rate_h.empty()  ? parse_channel_text(rate_h)
                                                             : throw Error(ErrorKind::InvalidValue,
                                                                           "give --h or --channel");
            const BlockFadingChannel channel(gains, snr_from_db(rate_snr_db));
            out << rate_report(field_from_d(rate_d), channel);
        } else if (*sweep_cmd) {
            for (const auto& spec : specs)
                if (sweep_cmd->get_option(spec.flag)->count() > 0)
                    overrides[spec.key] = flag_values[spec.key];
            const CliConfig cfg =
                config_path.empty() ? parse_config_text("", overrides) : parse_config(config_path, overrides);
            const auto result = run_sweep(cfg.sweep_config(threads));
            emit(cfg.output, format_sweep_csv(result), out);
        } else if (*codec_cmd) {
            if (codec_trials < 1)
                fail(ErrorKind::InvalidValue, "trials must be at least 1");
            const auto field = make_quadratic_field(codec_d);
            const auto prime = prime_above(field, codec_p);
            const auto fq = prime.residue_field();
            std::vector<FqElem> gen;
            if (codec_gen.empty()) {
                gen = default_generator(fq, codec_T, codec_lf);
            } else {
                for (const auto& item : split(codec_gen, ','))
                    gen.push_back(fq.from_index(parse_number<std::int64_t>(item, "generator")));
            }
            const NestedCodePair codes(fq, codec_T, codec_lf, codec_lc, gen);
            const Eigen::MatrixXd gains =
                codec_h.empty() ? sample_channels(codec_seed, 0, field.degree(), codec_L) : parse_channel_text(codec_h);
            std::string csv = "snr_db,error_rate,stderr,union_bound,trials\n";
            CodecOptions options;
            options.dither = !no_dither;
            options.threads = codec_threads;
            for (const double db : parse_snr_list(codec_snr)) {
                const double snr = snr_from_db(db);
                const BlockFadingChannel channel(gains, snr);
                const auto lat = build_construction_a(field, prime, codes, snr);
                const auto candidate = best_equation(field, channel);
                const auto stats = simulate_codec(lat, channel, candidate,
                                                  static_cast<std::uint64_t>(codec_trials), codec_seed, options);
                const auto ub = union_bound_with_terms(lat, {candidate.nu_sq}, min_terms);
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6e", ub.value);
                csv += compact(db) + "," + fixed6(stats.error_rate) + "," + fixed6(stats.stderr_rate) + "," + buf +
                       "," + std::to_string(stats.trials) + "\n";
            }
            emit(codec_output.empty() ? std::nullopt : std::optional<std::string>(codec_output), csv, out);
        } else if (*svp_cmd) {
            const auto basis = search_basis_from_matrix(read_basis_file(basis_path));
            const auto result = shortest_vector(basis);
            out << "norm_sq: " << fixed6(result.norm_sq) << "\n";
            out << "coords:";
            for (Eigen::Index i = 0; i < result.coords.size(); ++i)
                out << " " << result.coords(i);
            out << "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace cfal::cli
