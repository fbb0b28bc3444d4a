#include "mazgrid/mc.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "mazgrid/rng.hpp"

namespace mazgrid {

namespace {

struct BatchResult {
    double sum = 0.0;
    double sumsq = 0.0;
    long long absorbed = 0;
    long long timeout = 0;
    std::map<int, long long> anchor_hits;
    std::map<int, long long> point_hits;
};

} // namespace

MCEstimate harmonic_measure_mc(const GridDomain& dom, int start, const WalkData& data,
                               const WalkConfig& cfg) {
    if (!dom.is_open(start)) raise(Errc::InvalidCell, "walk start must be an open cell");
    if (cfg.n_walks < 1) raise(Errc::BadParams, "need at least one walk");
    bool maz_mode = data.maz != nullptr;
    if (maz_mode && (!data.point_values || data.point_values->size() != data.maz->points.size()))
        raise(Errc::BadParams, "Maz walk data must value every boundary point");
    if (!maz_mode && !data.anchor_values) raise(Errc::BadParams, "walk data missing");

    const long long batch_size = 4096;
    const long long nbatches = (cfg.n_walks + batch_size - 1) / batch_size;
    std::vector<BatchResult> results(nbatches);

    const int nx = dom.nx();
    auto run_batch = [&](long long b) {
        BatchResult& r = results[b];
        Rng64 rng(splitmix64(cfg.rng_seed ^ (0xb5ad4eceda1ce2a9ULL + (uint64_t)b)));
        long long walks = std::min(batch_size, cfg.n_walks - b * batch_size);
        const int step_di[4] = {-1, 1, 0, 0};
        const int step_dc[4] = {-1, 1, -nx, nx};
        for (long long w = 0; w < walks; ++w) {
            int c = start;
            long long steps = 0;
            while (true) {
                if (++steps > cfg.max_steps) {
                    ++r.timeout;
                    break;
                }
                uint32_t dir = rng.below(4);
                int cn = c + step_dc[dir];
                // grid always has a closed pad ring, so cn stays in range
                (void)step_di;
                if (dom.is_open(cn)) {
                    c = cn;
                    continue;
                }
                double v;
                if (maz_mode) {
                    int pt = data.maz->point_of_side(cn, c);
                    if (pt < 0) {
                        // absorbing cell was not part of the built boundary
                        // (can happen for pad corners); treat as 0-valued
                        v = 0.0;
                    } else {
                        v = (*data.point_values)[pt];
                        r.point_hits[pt] += 1;
                    }
                } else {
                    auto it = data.anchor_values->find(cn);
                    v = it == data.anchor_values->end() ? 0.0 : it->second;
                }
                r.anchor_hits[cn] += 1;
                r.sum += v;
                r.sumsq += v * v;
                ++r.absorbed;
                break;
            }
        }
    };

    int nthreads = cfg.threads > 0 ? cfg.threads : (int)std::max(1u, std::thread::hardware_concurrency());
    nthreads = (int)std::min<long long>(nthreads, nbatches);
    if (nthreads <= 1) {
        for (long long b = 0; b < nbatches; ++b) run_batch(b);
    } else {
        std::vector<std::thread> pool;
        std::atomic<long long> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                long long b;
                while ((b = next.fetch_add(1)) < nbatches) run_batch(b);
            });
        for (auto& th : pool) th.join();
    }

    MCEstimate est;
    double sum = 0.0, sumsq = 0.0;
    for (long long b = 0; b < nbatches; ++b) { // fixed order: deterministic merge
        const BatchResult& r = results[b];
        sum += r.sum;
        sumsq += r.sumsq;
        est.n_absorbed += r.absorbed;
        est.n_timeout += r.timeout;
        for (auto& [a, n] : r.anchor_hits) est.anchor_hits[a] += n;
        for (auto& [p, n] : r.point_hits) est.maz_point_hits[p] += n;
    }
    if (est.n_absorbed > 0) {
        est.mean = sum / est.n_absorbed;
        if (est.n_absorbed > 1) {
            double var = (sumsq - sum * sum / est.n_absorbed) / (est.n_absorbed - 1);
            est.stderr_ = std::sqrt(std::max(0.0, var) / est.n_absorbed);
        }
    }
    return est;
}

CrosscheckReport mc_crosscheck(const GridDomain& dom, const WalkData& data, const ScalarField& solution,
                               const std::vector<int>& probes, const WalkConfig& cfg, double slack) {
    CrosscheckReport rep;
    uint64_t seed = cfg.rng_seed;
    for (int probe : probes) {
        WalkConfig c = cfg;
        c.rng_seed = splitmix64(seed ^ (uint64_t)probe);
        MCEstimate est = harmonic_measure_mc(dom, probe, data, c);
        CrosscheckRow row;
        row.probe = probe;
        row.solver_value = solution.at_cell(probe);
        row.mc_mean = est.mean;
        row.mc_stderr = est.stderr_;
        row.pass = std::abs(row.solver_value - est.mean) <= 3.0 * est.stderr_ + slack;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace mazgrid
