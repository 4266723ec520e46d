#pragma once

// Maximizing a bound over the entitlement simplex, and the three-agent
// heatmap. Each kernel has an OpenMP version and a plain serial one in
// `serial::`; both produce identical results for the same inputs.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "chorediv/bounds.hpp"

namespace chorediv {

enum class SimplexMethod { grid, sample, local };
const char* to_string(SimplexMethod method);

struct SimplexParams {
  double step = 0.01;             // grid
  std::uint64_t samples = 1000000;  // sample
  std::uint64_t seed = 1;         // sample, local
  std::size_t refine_top = 100;   // sample: hill-climb from this many best samples (0 = off)
  std::size_t restarts = 100;     // local: random starting points
  SearchConfig search;
};

struct SimplexMax {
  double value = 0;
  std::vector<double> argmax;     // ascending
  double sampled_value = 0;       // before refinement
  std::uint64_t evaluations = 0;
};

/// Samples are drawn in blocks; block b uses its own generator seeded from
/// (seed, b), so the result does not depend on the thread count.
inline constexpr std::uint64_t kSampleBlock = 4096;

/// Uniform points of the open simplex from the gaps of n-1 sorted uniforms,
/// one generator per (seed, block).
class SimplexStream {
 public:
  SimplexStream(std::size_t n, std::uint64_t seed, std::uint64_t block);
  std::vector<double> next();

 private:
  std::size_t n_;
  std::vector<double> cuts_;
  std::mt19937_64 rng_;
};

/// Point number `index_in_block` of a block's stream.
std::vector<double> simplex_point(std::size_t n, std::uint64_t seed, std::uint64_t block,
                                  std::uint64_t index_in_block);

/// Nondecreasing grid points (k_1..k_n)/N with k_i >= 1 and N = round(1/step).
std::vector<std::vector<double>> sorted_grid(std::size_t n, double step);

/// Hill climb: move delta between two coordinates while the bound rises,
/// halving delta down to 1e-7.
SimplexMax refine(std::vector<double> start, const SearchConfig& search);

SimplexMax simplex_max(std::size_t n, SimplexMethod method, const SimplexParams& params);

struct HeatmapRow {
  double w1, w2, w3;
  double value;
  std::string dominating_rule;  // red1_two_agent or red2_symmetric
};

/// Every grid point i <= j <= k with i >= 1, i+j+k = N = round(1/step), in
/// lexicographic order of (i, j).
std::vector<HeatmapRow> heatmap_grid(double step);

/// The row nearest to the centroid.
const HeatmapRow& centroid_row(const std::vector<HeatmapRow>& rows);

namespace serial {
SimplexMax simplex_max(std::size_t n, SimplexMethod method, const SimplexParams& params);
std::vector<HeatmapRow> heatmap_grid(double step);
}  // namespace serial

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapRow>& rows);
void write_sampling_csv(std::ostream& out, std::size_t n, SimplexMethod method, const SimplexParams& params,
                        const SimplexMax& result);

/// Shortest round-trip-ish text with at least 10 significant digits.
std::string format_real(double value);

}  // namespace chorediv
