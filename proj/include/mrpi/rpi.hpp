#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mrpi/drlse.hpp"
#include "mrpi/grid.hpp"

namespace mrpi {

/// Element-wise mean of the final level sets of all runs.
class AveragedField : public Grid<double> {
public:
    using Grid::Grid;
    AveragedField() = default;
    explicit AveragedField(Grid<double> g) : Grid(std::move(g)) {}
};

struct RpiConfig {
    double sigma = 0.01;         ///< standard deviation of the random initial entries
    int k = 8;                   ///< evolution steps per run
    int m = 15;                  ///< number of runs
    double alpha = 0.25;         ///< sparse block fraction per axis, in (0, 1]
    bool first_run_dense = true;
    std::uint64_t seed = 0;
    DrlseParams drlse;
    double sigma_g = 1.5;        ///< Gaussian width for the edge indicator

    void validate() const;
};

/// SplitMix64 finalizer; a bijection on 64-bit integers.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of run `run_index`: global seed XOR splitmix64(run_index).
std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run_index) noexcept;

/// Portable N(0, sigma^2) source: 64-bit Mersenne Twister (std::mt19937_64, whose
/// output sequence is fixed by the standard) feeding the Marsaglia polar method.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;
    /// Standard normal deviate.
    double normal() noexcept;

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Every entry i.i.d. N(0, sigma^2), drawn in row-major order.
LevelSetField init_dense_random(int width, int height, double sigma, std::uint64_t seed);

/// A round(alpha*height) x round(alpha*width) block of N(0, sigma^2) entries in
/// the top-left corner, zeros elsewhere, followed by independent uniform random
/// permutations of the rows and of the columns. Nonzero count is exactly the
/// block area.
LevelSetField init_sparse_random(int width, int height, double sigma, double alpha,
                                 std::uint64_t seed);

/// How one run is initialized.
struct RunPlan {
    std::uint64_t seed = 0;
    bool dense = true;

    bool operator==(const RunPlan&) const = default;
};

/// Run r is dense when (r == 0 and first_run_dense) or alpha == 1, sparse
/// otherwise, and is seeded with run_seed(cfg.seed, r).
std::vector<RunPlan> plan_runs(const RpiConfig& cfg);

/// m flattened (row-major) final level sets, one row per run.
class RunStack {
public:
    RunStack(int width, int height, int runs);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int runs() const noexcept { return runs_; }
    std::size_t row_len() const noexcept { return row_len_; }

    std::span<double> row(int r) noexcept;
    std::span<const double> row(int r) const noexcept;

private:
    int width_;
    int height_;
    int runs_;
    std::size_t row_len_;
    std::vector<double> values_;
};

/// Initializes per `plan` and applies cfg.k evolution steps against `g`.
LevelSetField run_single_rpi(const EdgeIndicator& g, const RpiConfig& cfg, const RunPlan& plan);

/// Run `run_index` of the ensemble described by cfg, on the image's edge indicator.
LevelSetField run_single_rpi(const GrayImage& img, const RpiConfig& cfg, int run_index);

/// Executes one run per plan on up to `threads` worker threads. Each run writes
/// only its own row, so the stack does not depend on the schedule. If runs
/// fail, the error of the lowest-indexed failing run is rethrown.
RunStack collect_runs(const EdgeIndicator& g, const RpiConfig& cfg, std::span<const RunPlan> plans,
                      unsigned threads = 1);

/// Column means of the stack reshaped to height x width. Each column is
/// averaged in sorted order with a running mean, so the result is independent
/// of row order and equals the common value exactly when all rows agree.
AveragedField average_runs(const RunStack& stack);

/// The full ensemble: edge indicator, m runs, stack, average.
AveragedField run_multi_rpi(const GrayImage& img, const RpiConfig& cfg, unsigned threads = 1);

}  // namespace mrpi
