#include "chorediv/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>

#include <omp.h>

namespace chorediv {

namespace {

struct Candidate {
  double value;
  std::uint64_t index;
  std::vector<double> w;
};

// Higher value first; ties to the earlier sample.
bool better(const Candidate& a, const Candidate& b) {
  return a.value != b.value ? a.value > b.value : a.index < b.index;
}

void keep_top(std::vector<Candidate>& top, std::size_t k) {
  std::sort(top.begin(), top.end(), better);
  if (top.size() > k) top.resize(k);
}

double unit_uniform(std::mt19937_64& rng) {
  // 53 random bits in (0, 1); zero is redrawn.
  for (;;) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u > 0) return u;
  }
}

std::size_t grid_steps(double step) {
  if (!(step > 0 && step < 1)) throw std::invalid_argument("step must lie in (0, 1)");
  return static_cast<std::size_t>(std::llround(1.0 / step));
}

void grid_rec(std::size_t n, std::size_t steps, std::size_t pos, std::size_t lo, std::size_t left,
              std::vector<std::size_t>& parts, std::vector<std::vector<double>>& out) {
  if (pos + 1 == n) {
    if (left >= lo) {
      parts[pos] = left;
      std::vector<double> w;
      for (std::size_t p : parts) w.push_back(static_cast<double>(p) / static_cast<double>(steps));
      out.push_back(std::move(w));
    }
    return;
  }
  const std::size_t rest = n - pos;
  for (std::size_t k = lo; k * rest <= left; ++k) {
    parts[pos] = k;
    grid_rec(n, steps, pos + 1, k, left - k, parts, out);
  }
}

HeatmapRow heatmap_row(std::size_t i, std::size_t j, std::size_t k, std::size_t steps) {
  const double N = static_cast<double>(steps);
  const std::vector<double> w = {static_cast<double>(i) / N, static_cast<double>(j) / N,
                                 static_cast<double>(k) / N};
  const ThreeAgentBounds b = three_agent_bounds(w);
  const bool red1 = b.red1_two_agent < b.red2_symmetric;
  return {w[0], w[1], w[2], red1 ? b.red1_two_agent : b.red2_symmetric,
          red1 ? "red1_two_agent" : "red2_symmetric"};
}

std::vector<std::array<std::size_t, 3>> heatmap_points(std::size_t steps) {
  std::vector<std::array<std::size_t, 3>> pts;
  for (std::size_t i = 1; 3 * i <= steps; ++i) {
    for (std::size_t j = i; i + 2 * j <= steps; ++j) pts.push_back({i, j, steps - i - j});
  }
  return pts;
}

double bound_value(const std::vector<double>& w, const SearchConfig& search) {
  return best_bound(w, search).value;
}

SimplexMax finish(std::vector<Candidate> top, std::uint64_t evaluations, const SimplexParams& params,
                  bool refine_top, bool parallel) {
  SimplexMax out;
  out.evaluations = evaluations;
  if (top.empty()) return out;
  keep_top(top, std::max<std::size_t>(params.refine_top, 1));
  out.value = out.sampled_value = top.front().value;
  out.argmax = top.front().w;
  if (!refine_top || params.refine_top == 0) return out;
  std::vector<SimplexMax> refined(top.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::size_t t = 0; t < top.size(); ++t) refined[t] = refine(top[t].w, params.search);
  for (std::size_t t = 0; t < top.size(); ++t) {
    out.evaluations += refined[t].evaluations;
    if (refined[t].value > out.value) {
      out.value = refined[t].value;
      out.argmax = refined[t].argmax;
    }
  }
  return out;
}

std::vector<Candidate> sample_block(std::size_t n, const SimplexParams& params, std::uint64_t block,
                                    std::uint64_t count) {
  std::vector<Candidate> top;
  const std::size_t keep = std::max<std::size_t>(params.refine_top, 1);
  SimplexStream stream(n, params.seed, block);
  for (std::uint64_t t = 0; t < count; ++t) {
    std::vector<double> w = stream.next();
    const double v = bound_value(w, params.search);
    top.push_back({v, block * kSampleBlock + t, std::move(w)});
    if (top.size() >= 4 * keep) keep_top(top, keep);
  }
  keep_top(top, keep);
  return top;
}

std::vector<Candidate> local_starts(std::size_t n, const SimplexParams& params) {
  std::vector<Candidate> starts;
  std::optional<SimplexStream> stream;
  for (std::uint64_t r = 0; r < params.restarts; ++r) {
    if (r % kSampleBlock == 0) stream.emplace(n, params.seed, r / kSampleBlock);
    starts.push_back({0, r, stream->next()});
  }
  return starts;
}

}  // namespace

const char* to_string(SimplexMethod method) {
  switch (method) {
    case SimplexMethod::grid: return "grid";
    case SimplexMethod::sample: return "sample";
    case SimplexMethod::local: return "local";
  }
  return "unknown";
}

SimplexStream::SimplexStream(std::size_t n, std::uint64_t seed, std::uint64_t block) : n_(n), cuts_(n - 1) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  rng_.seed(seq);
}

std::vector<double> SimplexStream::next() {
  std::vector<double> w(n_);
  for (;;) {
    for (double& c : cuts_) c = unit_uniform(rng_);
    std::sort(cuts_.begin(), cuts_.end());
    double prev = 0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      w[i] = cuts_[i] - prev;
      prev = cuts_[i];
    }
    w[n_ - 1] = 1.0 - prev;
    // Coinciding cuts leave a zero weight; draw again.
    if (std::all_of(w.begin(), w.end(), [](double x) { return x > 0; })) return w;
  }
}

std::vector<double> simplex_point(std::size_t n, std::uint64_t seed, std::uint64_t block,
                                  std::uint64_t index_in_block) {
  SimplexStream stream(n, seed, block);
  for (std::uint64_t t = 0; t < index_in_block; ++t) stream.next();
  return stream.next();
}

std::vector<std::vector<double>> sorted_grid(std::size_t n, double step) {
  const std::size_t steps = grid_steps(step);
  std::vector<std::vector<double>> out;
  if (n == 0 || steps < n) return out;
  std::vector<std::size_t> parts(n);
  grid_rec(n, steps, 0, 1, steps, parts, out);
  return out;
}

SimplexMax refine(std::vector<double> start, const SearchConfig& search) {
  SimplexMax out;
  const std::size_t n = start.size();
  double value = bound_value(start, search);
  out.evaluations = 1;
  double delta = 0.01;
  while (delta >= 1e-7) {
    bool improved = false;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b || start[a] <= delta) continue;
        std::vector<double> next = start;
        next[a] -= delta;
        next[b] += delta;
        const double v = bound_value(next, search);
        ++out.evaluations;
        if (v > value) {
          value = v;
          start = std::move(next);
          improved = true;
        }
      }
    }
    if (!improved) delta /= 2;
  }
  std::sort(start.begin(), start.end());
  out.value = out.sampled_value = value;
  out.argmax = std::move(start);
  return out;
}

SimplexMax simplex_max(std::size_t n, SimplexMethod method, const SimplexParams& params) {
  if (n < 2) throw std::invalid_argument("simplex_max needs n >= 2");
  switch (method) {
    case SimplexMethod::grid: {
      const auto grid = sorted_grid(n, params.step);
      std::vector<double> values(grid.size());
#pragma omp parallel for schedule(dynamic, 256)
      for (std::size_t g = 0; g < grid.size(); ++g) values[g] = bound_value(grid[g], params.search);
      std::vector<Candidate> top;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        if (top.empty() || values[g] > top.front().value) top = {{values[g], g, grid[g]}};
      }
      SimplexParams once = params;
      once.refine_top = 1;
      return finish(std::move(top), grid.size(), once, false, true);
    }
    case SimplexMethod::sample: {
      const std::uint64_t blocks = (params.samples + kSampleBlock - 1) / kSampleBlock;
      std::vector<std::vector<Candidate>> per_block(blocks);
#pragma omp parallel for schedule(dynamic, 1)
      for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t count = std::min(kSampleBlock, params.samples - b * kSampleBlock);
        per_block[b] = sample_block(n, params, b, count);
      }
      std::vector<Candidate> top;
      for (auto& block : per_block) {
        for (auto& c : block) top.push_back(std::move(c));
        keep_top(top, std::max<std::size_t>(params.refine_top, 1));
      }
      return finish(std::move(top), params.samples, params, true, true);
    }
    case SimplexMethod::local: {
      SimplexParams all = params;
      all.refine_top = params.restarts;
      auto starts = local_starts(n, params);
      for (auto& s : starts) s.value = bound_value(s.w, params.search);
      return finish(std::move(starts), params.restarts, all, true, true);
    }
  }
  throw std::invalid_argument("unknown method");
}

std::vector<HeatmapRow> heatmap_grid(double step) {
  const std::size_t steps = grid_steps(step);
  const auto pts = heatmap_points(steps);
  std::vector<HeatmapRow> rows(pts.size());
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < pts.size(); ++p) rows[p] = heatmap_row(pts[p][0], pts[p][1], pts[p][2], steps);
  return rows;
}

const HeatmapRow& centroid_row(const std::vector<HeatmapRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty heatmap");
  auto dist = [](const HeatmapRow& r) {
    const double c = 1.0 / 3.0;
    return (r.w1 - c) * (r.w1 - c) + (r.w2 - c) * (r.w2 - c) + (r.w3 - c) * (r.w3 - c);
  };
  return *std::min_element(rows.begin(), rows.end(),
                           [&](const HeatmapRow& a, const HeatmapRow& b) { return dist(a) < dist(b); });
}

namespace serial {

SimplexMax simplex_max(std::size_t n, SimplexMethod method, const SimplexParams& params) {
  if (n < 2) throw std::invalid_argument("simplex_max needs n >= 2");
  if (method == SimplexMethod::grid) {
    std::vector<Candidate> top;
    std::uint64_t count = 0;
    for (const auto& w : sorted_grid(n, params.step)) {
      const double v = bound_value(w, params.search);
      if (top.empty() || v > top.front().value) top = {{v, count, w}};
      ++count;
    }
    SimplexParams once = params;
    once.refine_top = 1;
    return finish(std::move(top), count, once, false, false);
  }
  if (method == SimplexMethod::local) {
    SimplexParams all = params;
    all.refine_top = params.restarts;
    auto starts = local_starts(n, params);
    for (auto& s : starts) s.value = bound_value(s.w, params.search);
    return finish(std::move(starts), params.restarts, all, true, false);
  }
  // One pass over the same per-block streams, keeping a single top list.
  std::vector<Candidate> top;
  const std::size_t keep = std::max<std::size_t>(params.refine_top, 1);
  std::optional<SimplexStream> stream;
  for (std::uint64_t i = 0; i < params.samples; ++i) {
    if (i % kSampleBlock == 0) stream.emplace(n, params.seed, i / kSampleBlock);
    std::vector<double> w = stream->next();
    const double v = bound_value(w, params.search);
    top.push_back({v, i, std::move(w)});
    if (top.size() >= 4 * keep) keep_top(top, keep);
  }
  return finish(std::move(top), params.samples, params, true, false);
}

std::vector<HeatmapRow> heatmap_grid(double step) {
  const std::size_t steps = grid_steps(step);
  std::vector<HeatmapRow> rows;
  for (const auto& p : heatmap_points(steps)) rows.push_back(heatmap_row(p[0], p[1], p[2], steps));
  return rows;
}

}  // namespace serial

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_heatmap_csv(std::ostream& out, const std::vector<HeatmapRow>& rows) {
  out << "w1,w2,w3,value,dominating_rule\n";
  for (const auto& r : rows) {
    out << format_real(r.w1) << ',' << format_real(r.w2) << ',' << format_real(r.w3) << ','
        << format_real(r.value) << ',' << r.dominating_rule << '\n';
  }
}

void write_sampling_csv(std::ostream& out, std::size_t n, SimplexMethod method, const SimplexParams& params,
                        const SimplexMax& result) {
  out << "n,method,samples,seed,max_bound,argmax_weights\n";
  const std::uint64_t samples = method == SimplexMethod::sample  ? params.samples
                                : method == SimplexMethod::local ? params.restarts
                                                                 : result.evaluations;
  out << n << ',' << to_string(method) << ',' << samples << ',' << params.seed << ','
      << format_real(result.value) << ',';
  for (std::size_t i = 0; i < result.argmax.size(); ++i) out << (i ? ";" : "") << format_real(result.argmax[i]);
  out << '\n';
}

}  // namespace chorediv
