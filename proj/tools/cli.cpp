#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stbclab/codes.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/criteria.hpp"
#include "stbclab/csv.hpp"
#include "stbclab/decoders.hpp"
#include "stbclab/simulator.hpp"

namespace stbclab::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_range(const std::string& text, const char* what) {
    double a, s, b;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> a >> c1 >> s >> c2 >> b) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
        throw Error(std::string(what) + ": expected start:step:stop, got '" + text + "'");
    if (s <= 0)
        throw Error(std::string(what) + ": step must be positive");
    std::vector<double> grid;
    for (double v = a; v <= b + 1e-9; v += s)
        grid.push_back(v);
    if (grid.empty())
        throw Error(std::string(what) + ": empty range '" + text + "'");
    return grid;
}

std::pair<double, double> parse_window(const std::string& text) {
    double lo, hi;
    char c;
    std::istringstream in(text);
    if (!(in >> lo >> c >> hi) || c != ':' || !(in >> std::ws).eof() || hi < lo)
        throw Error("window: expected lo:hi, got '" + text + "'");
    return {lo, hi};
}

std::string iso_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Flat key=value mirror of the flags; values quoted so commas and pipes
// survive the config reader. The manifest alone re-runs the job.
void write_manifest(const std::string& path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& kv,
                    const std::string& output, const std::string& started,
                    const std::string& finished) {
    std::string m;
    m += "# stbclab manifest\n";
    m += "# command: " + command + "\n";
    m += "# version: " + std::string(kVersion) + "\n";
    m += "# started: " + started + "\n";
    m += "# finished: " + finished + "\n";
    m += "# output: " + output + "\n";
    for (const auto& [k, v] : kv)
        m += k + "=\"" + v + "\"\n";
    csvio::write_file(path, m);
}

std::string format_sig(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

// Flat key=value config reader ('#' comments, optional quotes around the
// value). Returned as --key=value tokens for injection ahead of the explicit
// flags, so the command line overrides the file.
std::vector<std::string> load_config_tokens(const std::string& path) {
    std::istringstream in(csvio::read_file(path));
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == ';')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config: expected key=value, got '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        if (key.empty())
            throw Error("config: empty key in '" + line + "'");
        tokens.push_back("--" + key + "=" + val);
    }
    return tokens;
}

// Expands any "--config FILE" / "--config=FILE" occurrences in place,
// inserting the file's tokens right after the subcommand name.
std::vector<std::string> expand_config_args(int argc, const char* const* argv) {
    std::vector<std::string> args;
    std::vector<std::string> injected;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config") {
            if (i + 1 >= argc)
                throw Error("--config needs a file path");
            injected = load_config_tokens(argv[++i]);
        } else if (a.rfind("--config=", 0) == 0) {
            injected = load_config_tokens(a.substr(9));
        } else {
            args.push_back(std::move(a));
        }
    }
    if (!injected.empty()) {
        // after program name and subcommand name
        const size_t at = std::min<size_t>(2, args.size());
        args.insert(args.begin() + static_cast<long>(at), injected.begin(),
                    injected.end());
    }
    return args;
}

struct CodeFlags {
    std::string spec = "";
    double theta = std::numeric_limits<double>::quiet_NaN();
    double alpha = std::numeric_limits<double>::quiet_NaN();
    int nt = 0;

    void attach(CLI::App* sub, bool required) {
        auto* o = sub->add_option("--code", spec,
                                  "code label, optionally label:key=value[,...]");
        if (required)
            o->required();
        sub->add_option("--theta", theta, "rotation angle (radians)");
        sub->add_option("--alpha", alpha, "rotation phase for qostbc_rot (radians)");
        sub->add_option("--nt", nt, "transmit antennas for the uncoded code");
    }

    LinearDispersionCode build() const {
        auto [label, params] = split_code_spec(spec);
        if (!std::isnan(theta)) params["theta"] = theta;
        if (!std::isnan(alpha)) params["alpha"] = alpha;
        if (nt > 0) params["nt"] = nt;
        return make_code(label, params);
    }

    void echo(std::vector<std::pair<std::string, std::string>>& kv) const {
        kv.emplace_back("code", spec);
        if (!std::isnan(theta)) kv.emplace_back("theta", csvio::format_real(theta));
        if (!std::isnan(alpha)) kv.emplace_back("alpha", csvio::format_real(alpha));
        if (nt > 0) kv.emplace_back("nt", std::to_string(nt));
    }
};

void dump_witness_csv(const std::string& path, const criteria::Witness& w) {
    std::string out = "kind,index,re,im\n";
    for (Eigen::Index i = 0; i < w.delta_x.size(); ++i)
        out += "delta_x," + std::to_string(i) + ',' +
               csvio::format_real(w.delta_x(i).real()) + ',' +
               csvio::format_real(w.delta_x(i).imag()) + '\n';
    for (Eigen::Index i = 0; i < w.h.size(); ++i)
        out += "h," + std::to_string(i) + ',' +
               csvio::format_real(w.h(i).real()) + ',' +
               csvio::format_real(w.h(i).imag()) + '\n';
    csvio::write_file(path, out);
}

int cmd_list_codes(std::ostream& out) {
    out << "label        n_t  t   n   rate    default_grouping\n";
    for (const auto& [label, code] : build_registry()) {
        std::ostringstream row;
        row << std::left << std::setw(13) << label << std::setw(5) << code.n_t()
            << std::setw(4) << code.t() << std::setw(4) << code.n()
            << std::setw(8) << std::fixed << std::setprecision(3) << code.rate()
            << code.default_grouping().to_string();
        out << row.str() << "\n";
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"stbclab: space-time block code laboratory"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);
    // a later occurrence wins, so explicit flags override config-file tokens
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_doc; // handled in expand_config_args; registered for --help
    auto* list_cmd = app.add_subcommand("list-codes", "print the code registry");

    // ---- check ----
    auto* check_cmd =
        app.add_subcommand("check", "full-diversity criterion checks for a code+grouping");
    check_cmd->add_option("--config", config_doc, "config/manifest file (flags override it)");
    CodeFlags check_code;
    check_code.attach(check_cmd, true);
    std::string check_grouping, check_const = "qam4", check_witness = "check_witness.csv";
    int check_nr = 1;
    long check_budget = 20000, check_trials = 10000;
    uint64_t check_seed = 1;
    check_cmd->add_option("--grouping", check_grouping, "groups, e.g. \"0,2|1,3\"");
    check_cmd->add_option("--const", check_const, "constellation name");
    check_cmd->add_option("--nr", check_nr, "receive antennas");
    check_cmd->add_option("--budget", check_budget, "full-rank enumeration budget");
    check_cmd->add_option("--trials", check_trials, "random channels for independence");
    check_cmd->add_option("--seed", check_seed, "random seed");
    check_cmd->add_option("--witness-out", check_witness, "witness CSV sidecar path");

    // ---- simulate ----
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo SER/BLER sweep");
    sim_cmd->add_option("--config", config_doc, "config/manifest file (flags override it)");
    CodeFlags sim_code;
    sim_code.attach(sim_cmd, true);
    std::string sim_decoder = "ml", sim_grouping, sim_const = "qam4";
    std::string sim_snr, sim_window, sim_out = "sim.csv", sim_gnuplot;
    int sim_nr = 1, sim_workers = 0;
    long sim_min_blk = 200, sim_max_trials = 1000000;
    uint64_t sim_seed = 1;
    double sim_noise_scale = 1.0;
    sim_cmd->add_option("--decoder", sim_decoder, "ml|zf|mmse|pic|pic-sic|ao|ao-sic");
    sim_cmd->add_option("--grouping", sim_grouping, "groups (default: code's)");
    sim_cmd->add_option("--const", sim_const, "constellation name");
    sim_cmd->add_option("--nr", sim_nr, "receive antennas");
    sim_cmd->add_option("--snr", sim_snr, "SNR grid start:step:stop in dB")->required();
    sim_cmd->add_option("--seed", sim_seed, "random seed");
    sim_cmd->add_option("--workers", sim_workers, "worker threads (0 = auto)");
    sim_cmd->add_option("--min-block-errors", sim_min_blk, "per-point stopping rule");
    sim_cmd->add_option("--max-trials", sim_max_trials, "per-point trial cap");
    sim_cmd->add_option("--window", sim_window, "slope/gain window lo:hi in dB");
    sim_cmd->add_option("--out", sim_out, "output CSV path");
    sim_cmd->add_option("--gnuplot", sim_gnuplot, "emit a gnuplot script here");
    sim_cmd->add_option("--noise-scale", sim_noise_scale,
                        "noise amplitude factor (0 = noiseless diagnostic)");

    // ---- sweep-theta ----
    auto* sweep_cmd =
        app.add_subcommand("sweep-theta", "coding-gain estimate over a theta grid");
    sweep_cmd->add_option("--config", config_doc, "config/manifest file (flags override it)");
    std::string sw_family = "code_2x3", sw_grid, sw_decoder = "pic", sw_grouping;
    std::string sw_const = "qam4", sw_snr, sw_out = "sweep_theta.csv", sw_gnuplot;
    int sw_nr = 1, sw_workers = 0;
    long sw_min_blk = 1000, sw_max_trials = 1000000;
    uint64_t sw_seed = 1;
    sweep_cmd->add_option("--family", sw_family, "code_2x3 or code_4x6");
    sweep_cmd->add_option("--grid", sw_grid, "theta grid start:step:stop")->required();
    sweep_cmd->add_option("--decoder", sw_decoder, "decoder name");
    sweep_cmd->add_option("--grouping", sw_grouping, "groups (default: code's)");
    sweep_cmd->add_option("--const", sw_const, "constellation name");
    sweep_cmd->add_option("--nr", sw_nr, "receive antennas");
    sweep_cmd->add_option("--snr", sw_snr, "SNR grid start:step:stop in dB")->required();
    sweep_cmd->add_option("--seed", sw_seed, "random seed");
    sweep_cmd->add_option("--workers", sw_workers, "worker threads (0 = auto)");
    sweep_cmd->add_option("--min-block-errors", sw_min_blk, "per-point stopping rule");
    sweep_cmd->add_option("--max-trials", sw_max_trials, "per-point trial cap");
    sweep_cmd->add_option("--out", sw_out, "output CSV path");
    sweep_cmd->add_option("--gnuplot", sw_gnuplot, "emit a gnuplot script here");

    try {
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::vector<std::string> reversed; // CLI11 vector parse wants reverse order
        for (size_t i = args.size(); i > 1; --i)
            reversed.push_back(args[i - 1]);
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (list_cmd->parsed())
            return cmd_list_codes(out);

        if (check_cmd->parsed()) {
            LinearDispersionCode code = check_code.build();
            Constellation A = constellation_by_name(check_const);
            GroupingScheme scheme = check_grouping.empty()
                                        ? code.default_grouping()
                                        : GroupingScheme::parse(check_grouping);
            scheme.validate(code.n());

            bool all_pass = true;
            std::optional<criteria::Witness> witness;
            if (!code.direct_only()) {
                auto fr = criteria::check_full_rank(code, A, check_budget, check_seed, check_nr);
                out << "full-rank:    " << (fr.passed ? "PASS" : "FAIL") << " (" << fr.detail << ")\n";
                if (!fr.passed || !fr.gdomain_verdict) {
                    all_pass = false;
                    if (fr.witness) witness = fr.witness;
                }
            } else {
                out << "full-rank:    SKIP (direct-only code has no dispersion matrices)\n";
            }
            criteria::TrialPlan plan;
            plan.random_trials = check_trials;
            plan.n_r = check_nr;
            plan.seed = check_seed;
            auto gi = criteria::check_group_independence(code, scheme, plan);
            out << "independence: " << (gi.passed ? "PASS" : "FAIL") << " (" << gi.detail << ")\n";
            if (!gi.passed) {
                all_pass = false;
                if (gi.witness) witness = gi.witness;
            }
            if (!all_pass && witness) {
                dump_witness_csv(check_witness, *witness);
                out << "witness dumped to " << check_witness << "\n";
            }
            return all_pass ? 0 : 1;
        }

        if (sim_cmd->parsed()) {
            const std::string started = iso_now();
            LinearDispersionCode code = sim_code.build();
            Constellation A = constellation_by_name(sim_const);
            if (!is_decoder_name(sim_decoder))
                throw Error("unknown decoder: " + sim_decoder);
            SimConfig cfg(code, A);
            cfg.decoder = sim_decoder;
            if (!sim_grouping.empty())
                cfg.grouping = GroupingScheme::parse(sim_grouping);
            cfg.n_r = sim_nr;
            cfg.snr_db = parse_range(sim_snr, "snr");
            cfg.seed = sim_seed;
            cfg.workers = sim_workers;
            cfg.min_block_errors = sim_min_blk;
            cfg.max_trials = sim_max_trials;
            cfg.noise_scale = sim_noise_scale;

            std::vector<std::pair<std::string, std::string>> kv;
            sim_code.echo(kv);
            kv.emplace_back("decoder", sim_decoder);
            if (!sim_grouping.empty()) kv.emplace_back("grouping", sim_grouping);
            kv.emplace_back("const", sim_const);
            kv.emplace_back("nr", std::to_string(sim_nr));
            kv.emplace_back("snr", sim_snr);
            kv.emplace_back("seed", std::to_string(sim_seed));
            kv.emplace_back("workers", std::to_string(sim_workers));
            kv.emplace_back("min-block-errors", std::to_string(sim_min_blk));
            kv.emplace_back("max-trials", std::to_string(sim_max_trials));
            if (!sim_window.empty()) kv.emplace_back("window", sim_window);
            kv.emplace_back("out", sim_out);
            if (sim_noise_scale != 1.0)
                kv.emplace_back("noise-scale", csvio::format_real(sim_noise_scale));

            SimResult result;
            try {
                result = run_sweep(cfg);
            } catch (const SimUndecodable& e) {
                std::string csv = csvio::sim_csv(e.partial);
                csv += "# aborted: " + std::string(e.what()) + "\n# h=";
                for (Eigen::Index i = 0; i < e.h.size(); ++i) {
                    if (i) csv += ';';
                    csv += '(' + csvio::format_real(e.h(i).real()) + ',' +
                           csvio::format_real(e.h(i).imag()) + ')';
                }
                csv += "\n";
                csvio::write_file(sim_out, csv);
                write_manifest(sim_out + ".manifest", "simulate", kv, sim_out,
                               started, iso_now());
                err << "error: " << e.what() << " (partial CSV flushed to "
                    << sim_out << ")\n";
                return 1;
            }

            csvio::write_file(sim_out, csvio::sim_csv(result));
            write_manifest(sim_out + ".manifest", "simulate", kv, sim_out, started,
                           iso_now());
            for (const auto& w : result.warnings)
                err << "warning: " << w << "\n";

            out << "snr_db    trials      ser          bler\n";
            for (const auto& p : result.points)
                out << std::left << std::setw(10) << p.snr_db << std::setw(12)
                    << p.trials << std::setw(13) << format_sig(p.ser, 4)
                    << format_sig(p.bler, 4) << "\n";

            auto [wlo, whi] = sim_window.empty()
                                  ? std::make_pair(cfg.snr_db.front(), cfg.snr_db.back())
                                  : parse_window(sim_window);
            const double dg = double(cfg.n_r) * code.n_t();
            try {
                double slope = estimate_diversity_order(result, wlo, whi);
                out << "slope (window " << wlo << "-" << whi << " dB): "
                    << format_sig(slope, 4) << "\n";
            } catch (const InsufficientData& e) {
                out << "slope: n/a (" << e.what() << ")\n";
            }
            try {
                auto cg = estimate_coding_gain_interval(result, dg, wlo, whi);
                out << "coding gain (Dg=" << dg << "): " << format_sig(cg.cg, 4)
                    << "  [" << format_sig(cg.lo, 4) << ", " << format_sig(cg.hi, 4)
                    << "]\n";
                // bound-constant diagnostic: smallest c' with SER <= c' SNR^-Dg
                double cprime = 0.0;
                for (const auto& p : result.points)
                    if (p.snr_db >= wlo && p.snr_db <= whi)
                        cprime = std::max(cprime,
                                          p.ser * std::pow(10.0, dg * p.snr_db / 10.0));
                out << "decay-bound constant c' (diagnostic): " << format_sig(cprime, 4)
                    << "\n";
            } catch (const InsufficientData& e) {
                out << "coding gain: n/a (" << e.what() << ")\n";
            }

            if (!sim_gnuplot.empty()) {
                std::string gp;
                gp += "set datafile separator ','\n";
                gp += "set logscale y\nset xlabel 'SNR (dB)'\nset ylabel 'error rate'\n";
                gp += "plot '" + sim_out + "' every ::1 using 1:5 with linespoints title 'SER', \\\n";
                gp += "     '" + sim_out + "' every ::1 using 1:6 with linespoints title 'BLER'\n";
                csvio::write_file(sim_gnuplot, gp);
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const std::string started = iso_now();
            Constellation A = constellation_by_name(sw_const);
            if (!is_decoder_name(sw_decoder))
                throw Error("unknown decoder: " + sw_decoder);
            LinearDispersionCode family_default = make_code(sw_family, {});
            SimConfig base(family_default, A);
            base.decoder = sw_decoder;
            if (!sw_grouping.empty())
                base.grouping = GroupingScheme::parse(sw_grouping);
            base.n_r = sw_nr;
            base.snr_db = parse_range(sw_snr, "snr");
            base.seed = sw_seed;
            base.workers = sw_workers;
            base.min_block_errors = sw_min_blk;
            base.max_trials = sw_max_trials;

            std::vector<double> grid = parse_range(sw_grid, "grid");
            auto table = sweep_theta(sw_family, grid, base);
            csvio::write_file(sw_out, csvio::theta_csv(table));

            std::vector<std::pair<std::string, std::string>> kv;
            kv.emplace_back("family", sw_family);
            kv.emplace_back("grid", sw_grid);
            kv.emplace_back("decoder", sw_decoder);
            if (!sw_grouping.empty()) kv.emplace_back("grouping", sw_grouping);
            kv.emplace_back("const", sw_const);
            kv.emplace_back("nr", std::to_string(sw_nr));
            kv.emplace_back("snr", sw_snr);
            kv.emplace_back("seed", std::to_string(sw_seed));
            kv.emplace_back("workers", std::to_string(sw_workers));
            kv.emplace_back("min-block-errors", std::to_string(sw_min_blk));
            kv.emplace_back("max-trials", std::to_string(sw_max_trials));
            kv.emplace_back("out", sw_out);
            write_manifest(sw_out + ".manifest", "sweep-theta", kv, sw_out, started,
                           iso_now());

            out << "theta     cg           slope\n";
            double best_theta = grid.front(), best_cg = -1.0;
            for (const auto& p : table) {
                out << std::left << std::setw(10) << p.theta << std::setw(13)
                    << format_sig(p.cg, 4) << format_sig(p.slope, 3) << "\n";
                if (p.cg > best_cg) {
                    best_cg = p.cg;
                    best_theta = p.theta;
                }
            }
            out << "argmax theta: " << best_theta << "\n";
            if (!sw_gnuplot.empty()) {
                std::string gp;
                gp += "set datafile separator ','\n";
                gp += "set xlabel 'theta (rad)'\nset ylabel 'coding gain'\n";
                gp += "plot '" + sw_out + "' every ::1 using 1:2 with linespoints title 'Cg', \\\n";
                gp += "     '" + sw_out + "' every ::1 using 1:3 with lines title 'lo', \\\n";
                gp += "     '" + sw_out + "' every ::1 using 1:4 with lines title 'hi'\n";
                csvio::write_file(sw_gnuplot, gp);
            }
            return 0;
        }

        out << app.help();
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace stbclab::cli
