#include "stbclab/simulator.hpp"
#include "stbclab/decoders.hpp"
#include "stbclab/equivchan.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace stbclab {

namespace {

constexpr long kBatchStart = 2048;
constexpr long kBatchMax = 32768;

enum class DecoderKind { Ml, Zf, Mmse, Pic, PicSic, Ao, AoSic };

DecoderKind decoder_kind(const std::string& name) {
    if (name == "ml") return DecoderKind::Ml;
    if (name == "zf") return DecoderKind::Zf;
    if (name == "mmse") return DecoderKind::Mmse;
    if (name == "pic") return DecoderKind::Pic;
    if (name == "pic-sic") return DecoderKind::PicSic;
    if (name == "ao") return DecoderKind::Ao;
    if (name == "ao-sic") return DecoderKind::AoSic;
    throw Error("unknown decoder: " + name);
}

struct WorkerFailure {
    bool hit = false;
    long trial = 0;
    int group = -1;
    CVector h;
};

struct WorkerCounts {
    long symbol_errors = 0;
    long block_errors = 0;
    WorkerFailure failure;
};

struct TrialContext {
    const SimConfig* cfg;
    const GroupingScheme* scheme;
    DecoderKind kind;
    int snr_index;
    double snr_lin;
};

void run_trial_range(const TrialContext& ctx, long begin, long end,
                     WorkerCounts& out) {
    const SimConfig& cfg = *ctx.cfg;
    const int n = cfg.code.n();
    const int n_t = cfg.code.n_t();
    const double rs = std::sqrt(ctx.snr_lin);
    std::vector<int> sym(static_cast<size_t>(n));
    CVector x(n);
    for (long trial = begin; trial < end; ++trial) {
        TrialRng rng(cfg.seed, static_cast<uint64_t>(ctx.snr_index),
                     static_cast<uint64_t>(trial));
        CMatrix H = sample_channel(cfg.n_r, n_t, rng);
        EquivalentChannel E = build_equivalent_channel(cfg.code, H);
        for (int i = 0; i < n; ++i) {
            sym[static_cast<size_t>(i)] = rng.next_index(cfg.constellation.size());
            x(i) = cfg.constellation.point(sym[static_cast<size_t>(i)]);
        }
        CVector y = rs * (E.G * x) + cfg.noise_scale * rng.cgauss_vector(E.m());
        DecodeResult res;
        try {
            switch (ctx.kind) {
            case DecoderKind::Ml: res = ml_decode(E, y, cfg.constellation, ctx.snr_lin); break;
            case DecoderKind::Zf: res = zf_decode(E, y, cfg.constellation, ctx.snr_lin); break;
            case DecoderKind::Mmse: res = mmse_decode(E, y, cfg.constellation, ctx.snr_lin); break;
            case DecoderKind::Pic: res = pic_decode(E, y, *ctx.scheme, cfg.constellation, ctx.snr_lin); break;
            case DecoderKind::PicSic: res = pic_sic_decode(E, y, *ctx.scheme, cfg.constellation, ctx.snr_lin, cfg.ordering); break;
            case DecoderKind::Ao: res = ao_decode(E, y, *ctx.scheme, cfg.constellation, ctx.snr_lin); break;
            case DecoderKind::AoSic: res = ao_sic_decode(E, y, *ctx.scheme, cfg.constellation, ctx.snr_lin, cfg.ordering); break;
            }
        } catch (const GroupUndecodable& e) {
            if (!out.failure.hit || trial < out.failure.trial) {
                out.failure.hit = true;
                out.failure.trial = trial;
                out.failure.group = e.group_index;
                out.failure.h = E.h;
            }
            continue;
        }
        int errs = 0;
        for (int i = 0; i < n; ++i)
            if (res.symbol_indices[static_cast<size_t>(i)] != sym[static_cast<size_t>(i)])
                ++errs;
        out.symbol_errors += errs;
        if (errs > 0)
            ++out.block_errors;
    }
}

void precheck_budget(const SimConfig& cfg, const GroupingScheme& scheme,
                     DecoderKind kind) {
    const double bits_per_sym = std::log2(double(cfg.constellation.size()));
    auto require = [bits_per_sym](size_t syms) {
        if (double(syms) * bits_per_sym > double(kMaxSearchBits) + 1e-9)
            throw BudgetExceeded("search over " + std::to_string(syms) +
                                 " joint symbols exceeds the budget");
    };
    if (kind == DecoderKind::Ml) {
        require(static_cast<size_t>(cfg.code.n()));
    } else if (kind == DecoderKind::Pic || kind == DecoderKind::PicSic ||
               kind == DecoderKind::Ao || kind == DecoderKind::AoSic) {
        for (const auto& g : scheme.groups)
            require(g.size());
    }
}

} // namespace

CMatrix sample_channel(int n_r, int n_t, TrialRng& rng) {
    return rng.cgauss_matrix(n_r, n_t);
}

SimResult run_sweep(const SimConfig& cfg) {
    if (cfg.snr_db.empty())
        throw Error("run_sweep: empty SNR grid");
    for (size_t i = 1; i < cfg.snr_db.size(); ++i)
        if (cfg.snr_db[i] <= cfg.snr_db[i - 1])
            throw Error("run_sweep: SNR grid must be strictly increasing");
    if (cfg.min_block_errors < 0 || cfg.max_trials <= 0)
        throw Error("run_sweep: bad stopping rule");

    const GroupingScheme scheme = cfg.grouping.groups.empty()
                                      ? cfg.code.default_grouping()
                                      : cfg.grouping;
    scheme.validate(cfg.code.n());
    const DecoderKind kind = decoder_kind(cfg.decoder);
    precheck_budget(cfg, scheme, kind);

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, workers);

    SimResult result;
    {
        std::ostringstream os;
        os << "code=" << cfg.code.label() << " decoder=" << cfg.decoder
           << " grouping=" << scheme.to_string()
           << " const=" << cfg.constellation.label() << " nr=" << cfg.n_r
           << " seed=" << cfg.seed
           << " min_block_errors=" << cfg.min_block_errors
           << " max_trials=" << cfg.max_trials;
        result.config_echo = os.str();
    }

    const auto t0 = std::chrono::steady_clock::now();
    for (size_t s = 0; s < cfg.snr_db.size(); ++s) {
        const double snr_lin = std::pow(10.0, cfg.snr_db[s] / 10.0);
        TrialContext ctx{&cfg, &scheme, kind, static_cast<int>(s), snr_lin};

        long trials = 0, sym_errs = 0, blk_errs = 0;
        long batch = kBatchStart;
        WorkerFailure failure;
        while (trials < cfg.max_trials &&
               (cfg.min_block_errors == 0 || blk_errs < cfg.min_block_errors)) {
            const long todo = std::min(batch, cfg.max_trials - trials);
            std::vector<WorkerCounts> counts(static_cast<size_t>(workers));
            const long chunk = (todo + workers - 1) / workers;
            std::vector<std::thread> pool;
            for (int w = 1; w < workers; ++w) {
                const long b = trials + w * chunk;
                const long e = std::min(trials + (w + 1) * chunk, trials + todo);
                if (b >= e)
                    continue;
                pool.emplace_back(run_trial_range, std::cref(ctx), b, e,
                                  std::ref(counts[static_cast<size_t>(w)]));
            }
            run_trial_range(ctx, trials, std::min(trials + chunk, trials + todo),
                            counts[0]);
            for (auto& th : pool)
                th.join();
            for (const auto& c : counts) {
                sym_errs += c.symbol_errors;
                blk_errs += c.block_errors;
                if (c.failure.hit && (!failure.hit || c.failure.trial < failure.trial))
                    failure = c.failure;
            }
            trials += todo;
            if (failure.hit)
                break;
            batch = std::min(batch * 2, kBatchMax);
        }

        if (failure.hit) {
            result.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::ostringstream os;
            os << "group " << failure.group << " undecodable at snr_db="
               << cfg.snr_db[s] << " trial=" << failure.trial;
            throw SimUndecodable(os.str(), failure.h, cfg.snr_db[s], failure.trial,
                                 failure.group, result);
        }

        const int n = cfg.code.n();
        if (blk_errs > sym_errs || sym_errs > static_cast<long>(n) * blk_errs)
            throw Error("run_sweep: error-count identity violated");

        SimPoint p;
        p.snr_db = cfg.snr_db[s];
        p.trials = trials;
        p.symbol_errors = sym_errs;
        p.block_errors = blk_errs;
        p.ser = double(sym_errs) / (double(trials) * n);
        p.bler = double(blk_errs) / double(trials);
        p.ci95 = 1.96 * std::sqrt(std::max(p.ser * (1.0 - p.ser), 0.0) /
                                  (double(trials) * n));
        result.points.push_back(p);
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (size_t i = 1; i < result.points.size(); ++i) {
        const auto& a = result.points[i - 1];
        const auto& b = result.points[i];
        if (b.ser > a.ser + a.ci95 + b.ci95) {
            std::ostringstream os;
            os << "SER not nonincreasing between " << a.snr_db << " and "
               << b.snr_db << " dB beyond confidence width";
            result.warnings.push_back(os.str());
        }
    }
    return result;
}

double estimate_diversity_order(const SimResult& result, double win_lo_db,
                                double win_hi_db, long min_block_errors) {
    std::vector<double> xs, ys;
    for (const auto& p : result.points) {
        if (p.snr_db < win_lo_db || p.snr_db > win_hi_db)
            continue;
        if (p.block_errors < min_block_errors || p.ser <= 0.0)
            continue;
        xs.push_back(-p.snr_db / 10.0);
        ys.push_back(std::log10(p.ser));
    }
    if (xs.size() < 3)
        throw InsufficientData("estimate_diversity_order: need >= 3 usable points, have " +
                               std::to_string(xs.size()));
    double xm = 0, ym = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        xm += xs[i];
        ym += ys[i];
    }
    xm /= double(xs.size());
    ym /= double(ys.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - xm) * (ys[i] - ym);
        den += (xs[i] - xm) * (xs[i] - xm);
    }
    return num / den;
}

CodingGainEstimate estimate_coding_gain_interval(const SimResult& result,
                                                 double diversity_order,
                                                 double win_lo_db,
                                                 double win_hi_db) {
    CodingGainEstimate est;
    est.cg = est.lo = est.hi = std::numeric_limits<double>::infinity();
    long used = 0;
    for (const auto& p : result.points) {
        if (p.snr_db < win_lo_db || p.snr_db > win_hi_db)
            continue;
        if (p.bler <= 0.0)
            throw InsufficientData("estimate_coding_gain: zero BLER at " +
                                   std::to_string(p.snr_db) + " dB");
        ++used;
        const double snr_lin = std::pow(10.0, p.snr_db / 10.0);
        const double scale = std::pow(snr_lin, -diversity_order);
        const double hw = 1.96 * std::sqrt(p.bler * (1.0 - p.bler) / double(p.trials));
        const double bl_hi = std::min(p.bler + hw, 1.0);
        const double bl_lo = std::max(p.bler - hw, 0.1 / double(p.trials));
        est.cg = std::min(est.cg, scale / p.bler);
        est.lo = std::min(est.lo, scale / bl_hi);
        est.hi = std::min(est.hi, scale / bl_lo);
    }
    if (used == 0)
        throw InsufficientData("estimate_coding_gain: no points in window");
    return est;
}

double estimate_coding_gain(const SimResult& result, double diversity_order,
                            double win_lo_db, double win_hi_db) {
    return estimate_coding_gain_interval(result, diversity_order, win_lo_db,
                                         win_hi_db).cg;
}

std::vector<ThetaSweepPoint> sweep_theta(const std::string& family,
                                         const std::vector<double>& theta_grid,
                                         const SimConfig& base) {
    if (family != "code_2x3" && family != "code_4x6")
        throw Error("sweep_theta: family must be code_2x3 or code_4x6");
    if (base.snr_db.empty())
        throw Error("sweep_theta: empty SNR grid");
    const double win_lo = base.snr_db.front();
    const double win_hi = base.snr_db.back();
    std::vector<ThetaSweepPoint> out;
    for (double theta : theta_grid) {
        SimConfig cfg = base;
        cfg.code = family == "code_2x3" ? make_code_2x3(theta) : make_code_4x6(theta);
        const double dg = double(cfg.n_r) * cfg.code.n_t();
        SimResult r = run_sweep(cfg);
        ThetaSweepPoint p;
        p.theta = theta;
        auto est = estimate_coding_gain_interval(r, dg, win_lo, win_hi);
        p.cg = est.cg;
        p.cg_lo = est.lo;
        p.cg_hi = est.hi;
        try {
            p.slope = estimate_diversity_order(r, win_lo, win_hi);
        } catch (const InsufficientData&) {
            p.slope = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(p);
    }
    return out;
}

} // namespace stbclab
