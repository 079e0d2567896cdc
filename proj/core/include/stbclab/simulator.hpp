#ifndef STBCLAB_SIMULATOR_HPP
#define STBCLAB_SIMULATOR_HPP

#include <string>
#include <vector>

#include "stbclab/types.hpp"
#include "stbclab/codes.hpp"
#include "stbclab/constellation.hpp"
#include "stbclab/grouping.hpp"
#include "stbclab/rng.hpp"

// Quasi-static Rayleigh Monte Carlo engine. Each trial draws a fresh channel,
// a uniform symbol vector and white noise, decodes, and counts symbol and
// block errors. Random streams are keyed by (seed, snr_index, trial_index),
// trials run in fixed batches, and counts are integers, so results are
// bit-identical for any worker count.

namespace stbclab {

struct SimConfig {
    LinearDispersionCode code;
    Constellation constellation;
    std::string decoder = "ml";
    GroupingScheme grouping{};          // empty: use the code's default
    std::vector<int> ordering{};        // SIC variants; empty: auto
    int n_r = 1;
    std::vector<double> snr_db{};       // strictly increasing, dB
    long min_block_errors = 200;
    long max_trials = 1000000;
    uint64_t seed = 1;
    int workers = 0;                    // 0: hardware concurrency
    double noise_scale = 1.0;           // 0: noiseless diagnostic mode

    SimConfig(LinearDispersionCode c, Constellation a)
        : code(std::move(c)), constellation(std::move(a)) {}
};

struct SimPoint {
    double snr_db = 0.0;
    long trials = 0;
    long symbol_errors = 0;
    long block_errors = 0;
    double ser = 0.0;
    double bler = 0.0;
    double ci95 = 0.0; // 95% half-width on SER (binomial normal approximation)
};

struct SimResult {
    std::vector<SimPoint> points;
    std::vector<std::string> warnings;
    std::string config_echo;
    double wall_seconds = 0.0;
};

// Trial aborted because a group's projected channel vanished; carries the
// offending channel and whatever points completed.
class SimUndecodable : public Error {
public:
    SimUndecodable(const std::string& msg, CVector h_, double snr_db_,
                   long trial_, int group_, SimResult partial_)
        : Error(msg), h(std::move(h_)), snr_db(snr_db_), trial(trial_),
          group(group_), partial(std::move(partial_)) {}
    CVector h;
    double snr_db;
    long trial;
    int group;
    SimResult partial;
};

// i.i.d. CN(0,1) entries, drawn row-major.
CMatrix sample_channel(int n_r, int n_t, TrialRng& rng);

SimResult run_sweep(const SimConfig& cfg);

// Least-squares slope of log10(SER) against -snr_db/10 over the window.
// Every usable point needs at least min_block_errors block errors; fewer
// than 3 usable points throws InsufficientData.
double estimate_diversity_order(const SimResult& result, double win_lo_db,
                                double win_hi_db, long min_block_errors = 50);

struct CodingGainEstimate {
    double cg = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Largest constant with BLER <= (1/Cg) SNR^-D on the measured grid:
// min over window points of SNR^-D / BLER (SNR linear). The interval
// propagates the binomial 95% half-width of BLER.
CodingGainEstimate estimate_coding_gain_interval(const SimResult& result,
                                                 double diversity_order,
                                                 double win_lo_db,
                                                 double win_hi_db);
double estimate_coding_gain(const SimResult& result, double diversity_order,
                            double win_lo_db, double win_hi_db);

struct ThetaSweepPoint {
    double theta = 0.0;
    double cg = 0.0;
    double cg_lo = 0.0;
    double cg_hi = 0.0;
    double slope = 0.0; // NaN when the grid cannot support a fit
};

// Runs the base config for each theta (family "code_2x3" or "code_4x6") with
// shared seed discipline and estimates the coding gain at the nominal
// diversity order n_r * n_t.
std::vector<ThetaSweepPoint> sweep_theta(const std::string& family,
                                         const std::vector<double>& theta_grid,
                                         const SimConfig& base);

} // namespace stbclab

#endif
