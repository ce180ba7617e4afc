#include "mrpi/rpi.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

namespace mrpi {

void RpiConfig::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("rpi: sigma must be positive");
    if (k < 1) throw ParameterError("rpi: k must be at least 1");
    if (m < 1) throw ParameterError("rpi: m must be at least 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("rpi: alpha must lie in (0, 1]");
    if (!(sigma_g > 0.0) || !std::isfinite(sigma_g)) throw ParameterError("rpi: sigma_g must be positive");
    drlse.validate();
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run_index) noexcept {
    return seed ^ splitmix64(run_index);
}

double NormalSource::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t NormalSource::below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = engine_();
        if (r >= threshold) return r % n;
    }
}

double NormalSource::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

namespace {

void check_field_args(int width, int height, double sigma) {
    if (width <= 0 || height <= 0) throw ParameterError("random init: empty field");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ParameterError("random init: sigma must be positive, got " + std::to_string(sigma));
    }
}

// Zero is reserved for "no point here" in sparse fields.
double nonzero_normal(NormalSource& src, double sigma) {
    double v;
    do v = sigma * src.normal();
    while (v == 0.0);
    return v;
}

std::vector<int> random_permutation(NormalSource& src, int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(src.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    return p;
}

}  // namespace

LevelSetField init_dense_random(int width, int height, double sigma, std::uint64_t seed) {
    check_field_args(width, height, sigma);
    NormalSource src(seed);
    LevelSetField phi(width, height);
    for (auto& v : phi.values()) v = nonzero_normal(src, sigma);
    return phi;
}

LevelSetField init_sparse_random(int width, int height, double sigma, double alpha,
                                 std::uint64_t seed) {
    check_field_args(width, height, sigma);
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("sparse init: alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    const int rows = static_cast<int>(std::lround(alpha * height));
    const int cols = static_cast<int>(std::lround(alpha * width));
    if (rows < 1 || cols < 1) {
        throw ParameterError("sparse init: alpha " + std::to_string(alpha) +
                             " leaves no rows or columns on a " + std::to_string(width) + "x" +
                             std::to_string(height) + " field");
    }
    NormalSource src(seed);
    std::vector<double> block(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (auto& v : block) v = nonzero_normal(src, sigma);
    const auto row_perm = random_permutation(src, height);
    const auto col_perm = random_permutation(src, width);

    LevelSetField phi(width, height);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            phi(col_perm[static_cast<std::size_t>(j)], row_perm[static_cast<std::size_t>(i)]) =
                block[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
        }
    }
    return phi;
}

std::vector<RunPlan> plan_runs(const RpiConfig& cfg) {
    cfg.validate();
    std::vector<RunPlan> plans(static_cast<std::size_t>(cfg.m));
    for (int r = 0; r < cfg.m; ++r) {
        plans[static_cast<std::size_t>(r)] = {run_seed(cfg.seed, static_cast<std::uint64_t>(r)),
                                              (r == 0 && cfg.first_run_dense) || cfg.alpha == 1.0};
    }
    return plans;
}

RunStack::RunStack(int width, int height, int runs)
    : width_(width), height_(height), runs_(runs),
      row_len_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    if (width <= 0 || height <= 0 || runs <= 0) throw ParameterError("run stack: empty shape");
    values_.assign(row_len_ * static_cast<std::size_t>(runs), 0.0);
}

std::span<double> RunStack::row(int r) noexcept {
    return std::span<double>(values_).subspan(static_cast<std::size_t>(r) * row_len_, row_len_);
}

std::span<const double> RunStack::row(int r) const noexcept {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(r) * row_len_, row_len_);
}

LevelSetField run_single_rpi(const EdgeIndicator& g, const RpiConfig& cfg, const RunPlan& plan) {
    cfg.validate();
    LevelSetField phi = plan.dense
                            ? init_dense_random(g.width(), g.height(), cfg.sigma, plan.seed)
                            : init_sparse_random(g.width(), g.height(), cfg.sigma, cfg.alpha, plan.seed);
    return evolve(std::move(phi), g, cfg.drlse, cfg.k);
}

LevelSetField run_single_rpi(const GrayImage& img, const RpiConfig& cfg, int run_index) {
    const auto plans = plan_runs(cfg);
    if (run_index < 0 || run_index >= cfg.m) {
        throw ParameterError("run index " + std::to_string(run_index) + " outside [0, " +
                             std::to_string(cfg.m) + ")");
    }
    try {
        return run_single_rpi(edge_indicator(img, cfg.sigma_g), cfg,
                              plans[static_cast<std::size_t>(run_index)]);
    } catch (const DivergenceError& e) {
        throw DivergenceError(e.detail(), e.step(), run_index);
    }
}

RunStack collect_runs(const EdgeIndicator& g, const RpiConfig& cfg, std::span<const RunPlan> plans,
                      unsigned threads) {
    cfg.validate();
    const int runs = static_cast<int>(plans.size());
    RunStack stack(g.width(), g.height(), runs);
    std::vector<std::exception_ptr> errors(plans.size());
    std::atomic<int> next{0};

    auto worker = [&] {
        for (int r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) {
            try {
                const auto phi = run_single_rpi(g, cfg, plans[static_cast<std::size_t>(r)]);
                std::ranges::copy(phi.values(), stack.row(r).begin());
            } catch (const DivergenceError& e) {
                errors[static_cast<std::size_t>(r)] =
                    std::make_exception_ptr(DivergenceError(e.detail(), e.step(), r));
            } catch (...) {
                errors[static_cast<std::size_t>(r)] = std::current_exception();
            }
        }
    };

    const unsigned n = std::clamp(threads, 1u, static_cast<unsigned>(runs));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }  // all workers joined here

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return stack;
}

AveragedField average_runs(const RunStack& stack) {
    AveragedField avg(stack.width(), stack.height());
    std::vector<double> column(static_cast<std::size_t>(stack.runs()));
    for (std::size_t i = 0; i < stack.row_len(); ++i) {
        for (int r = 0; r < stack.runs(); ++r) column[static_cast<std::size_t>(r)] = stack.row(r)[i];
        std::ranges::sort(column);
        double mean = column[0];
        for (std::size_t r = 1; r < column.size(); ++r) {
            mean += (column[r] - mean) / static_cast<double>(r + 1);
        }
        avg[i] = mean;
    }
    return avg;
}

AveragedField run_multi_rpi(const GrayImage& img, const RpiConfig& cfg, unsigned threads) {
    const auto plans = plan_runs(cfg);
    const auto g = edge_indicator(img, cfg.sigma_g);
    return average_runs(collect_runs(g, cfg, plans, threads));
}

}  // namespace mrpi
