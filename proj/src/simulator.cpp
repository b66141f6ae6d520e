#include "mrrsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mrrsim/encoding.hpp"
#include "mrrsim/errors.hpp"

namespace mrrsim {

namespace {

// Stream id for the analog input realization; tile indices stay below this.
constexpr std::uint64_t kAnalogInputStream = std::uint64_t(1) << 32;

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

// Digit planes of the streamed operand: entry(i, k) encoded at slot t lives at
// d[(i * width + k) * (n_t + 1) + t].
struct DigitMatrix {
  std::int64_t count = 0;
  std::int64_t width = 0;
  int n_t = 0;
  std::vector<std::int8_t> d;
};

DigitMatrix digitize(const Mat& src, bool transpose, int n_t) {
  DigitMatrix dm;
  dm.count = transpose ? src.cols : src.rows;
  dm.width = transpose ? src.rows : src.cols;
  dm.n_t = n_t;
  const std::int64_t slots = n_t + 1;
  dm.d.resize(static_cast<std::size_t>(dm.count * dm.width * slots));
  const double lim = 1.0 - std::ldexp(1.0, -(n_t + 1));
  for (std::int64_t i = 0; i < dm.count; ++i) {
    for (std::int64_t k = 0; k < dm.width; ++k) {
      const double v = transpose ? src.at(k, i) : src.at(i, k);
      if (!(std::abs(v) <= 1.0))
        throw RangeError("simulate_layer: streamed operand entries must lie in [-1, 1]");
      const DigitStream s = encode_signed_digits(std::clamp(v, -lim, lim), n_t);
      std::int8_t* out = &dm.d[static_cast<std::size_t>((i * dm.width + k) * slots)];
      for (std::int64_t t = 0; t < slots; ++t) out[t] = s.digits[static_cast<std::size_t>(t)];
    }
  }
  return dm;
}

void check_shapes(const GemmShape& g, const Mat& w, const Mat& x) {
  if (g.m < 1 || g.k < 1 || g.n < 1) throw ShapeError("simulate_layer: gemm dims must be >= 1");
  if (w.rows != g.k || w.cols != g.n) throw ShapeError("simulate_layer: weights must be K x N");
  if (x.rows != g.m || x.cols != g.k) throw ShapeError("simulate_layer: inputs must be M x K");
}

// Realizes one stationary tile padded to the full rows*tiles x columns array
// footprint, so the draw sequence per tile is fixed by geometry alone.
// stationary(lane, k) reads the occupied entries.
template <typename Source>
Mat realize_tile(Source&& stationary, std::int64_t lane0, std::int64_t lanes_eff, std::int64_t k0,
                 std::int64_t k_eff, std::int64_t lanes_pad, std::int64_t cols_pad,
                 const WeightMap& map, const NoiseParams& n, RngStream& rng) {
  Mat block(lanes_eff, k_eff);
  for (std::int64_t r = 0; r < lanes_pad; ++r) {
    for (std::int64_t c = 0; c < cols_pad; ++c) {
      const bool occupied = r < lanes_eff && c < k_eff;
      const double target = occupied ? stationary(lane0 + r, k0 + c) : 0.0;
      const double realized = map.noisy(map.voltage(target), n, rng);
      if (occupied) block.at(r, c) = realized;
    }
  }
  return block;
}

Mat simulate_streamed(const GemmShape& g, const Mat& w, const Mat& x, bool ws, const OpeConfig& ope,
                      const MrrParams& p, const NoiseParams& n, SimTrace* trace) {
  const WeightMap map(p);
  const std::int64_t rt = static_cast<std::int64_t>(ope.rows) * ope.tiles;
  const std::int64_t cols = ope.columns;
  const std::int64_t lanes_total = ws ? g.n : g.m;
  const std::int64_t streamed_count = ws ? g.m : g.n;
  const std::int64_t k_blocks = ceil_div(g.k, cols);
  const std::int64_t lane_blocks = ceil_div(lanes_total, rt);
  const std::int64_t slots = ope.n_t + 1;

  // Streamed operand is digit-serialized once up front.
  const DigitMatrix dig = digitize(ws ? x : w, /*transpose=*/!ws, ope.n_t);

  std::vector<double> scale(static_cast<std::size_t>(slots));
  for (std::int64_t t = 0; t < slots; ++t)
    scale[static_cast<std::size_t>(t)] = std::ldexp(1.0, static_cast<int>(t) - ope.n_t);

  const auto stationary = [&](std::int64_t lane, std::int64_t k) {
    return ws ? w.at(k, lane) : x.at(lane, k);
  };

  Mat out(g.m, g.n);
  // Stationary-lane blocks outermost, reduction blocks innermost; this fixes
  // both the tile indexing and the partial-sum accumulation order.
  for (std::int64_t lb = 0; lb < lane_blocks; ++lb) {
    const std::int64_t lane0 = lb * rt;
    const std::int64_t lanes_eff = std::min(rt, lanes_total - lane0);
    for (std::int64_t kb = 0; kb < k_blocks; ++kb) {
      const std::int64_t k0 = kb * cols;
      const std::int64_t k_eff = std::min(cols, g.k - k0);
      const std::uint64_t tile_index = static_cast<std::uint64_t>(lb * k_blocks + kb);
      RngStream rng(n.seed, tile_index);
      const Mat block = realize_tile(stationary, lane0, lanes_eff, k0, k_eff, rt, cols, map, n, rng);
      if (trace) trace->realized_tiles.push_back(block);

      for (std::int64_t s = 0; s < streamed_count; ++s) {
        const std::int8_t* dbase = &dig.d[static_cast<std::size_t>((s * g.k + k0) * slots)];
        for (std::int64_t r = 0; r < lanes_eff; ++r) {
          const double* wrow = &block.a[static_cast<std::size_t>(r * k_eff)];
          double acc = 0.0;
          for (std::int64_t t = 0; t < slots; ++t) {
            double slot = 0.0;
            for (std::int64_t c = 0; c < k_eff; ++c)
              slot += wrow[c] * static_cast<double>(dbase[c * slots + t]);
            acc += slot * scale[static_cast<std::size_t>(t)];
          }
          if (ws)
            out.at(s, lane0 + r) += acc;
          else
            out.at(lane0 + r, s) += acc;
        }
      }
    }
  }
  return out;
}

Mat simulate_analog(const GemmShape& g, const Mat& w, const Mat& x, const OpeConfig& ope,
                    const MrrParams& p, const NoiseParams& n, SimTrace* trace) {
  const WeightMap map(p);
  const std::int64_t rt = static_cast<std::int64_t>(ope.rows) * ope.tiles;
  const std::int64_t cols = ope.columns;
  const std::int64_t k_blocks = ceil_div(g.k, cols);
  const std::int64_t lane_blocks = ceil_div(g.n, rt);

  // Weights realize exactly as in the ws mapping.
  Mat wr(g.k, g.n);
  const auto stationary = [&](std::int64_t lane, std::int64_t k) { return w.at(k, lane); };
  for (std::int64_t lb = 0; lb < lane_blocks; ++lb) {
    const std::int64_t lane0 = lb * rt;
    const std::int64_t lanes_eff = std::min(rt, g.n - lane0);
    for (std::int64_t kb = 0; kb < k_blocks; ++kb) {
      const std::int64_t k0 = kb * cols;
      const std::int64_t k_eff = std::min(cols, g.k - k0);
      RngStream rng(n.seed, static_cast<std::uint64_t>(lb * k_blocks + kb));
      const Mat block = realize_tile(stationary, lane0, lanes_eff, k0, k_eff, rt, cols, map, n, rng);
      if (trace) trace->realized_tiles.push_back(block);
      for (std::int64_t r = 0; r < lanes_eff; ++r)
        for (std::int64_t c = 0; c < k_eff; ++c) wr.at(k0 + c, lane0 + r) = block.at(r, c);
    }
  }

  // Inputs pass through the same chain, one draw pair per element.
  RngStream rng(n.seed, kAnalogInputStream);
  Mat xr(g.m, g.k);
  for (std::int64_t i = 0; i < g.m; ++i)
    for (std::int64_t k = 0; k < g.k; ++k) xr.at(i, k) = map.noisy(map.voltage(x.at(i, k)), n, rng);
  if (trace) trace->realized_inputs = xr;

  Mat out(g.m, g.n);
  for (std::int64_t i = 0; i < g.m; ++i) {
    for (std::int64_t j = 0; j < g.n; ++j) {
      double acc = 0.0;
      for (std::int64_t k = 0; k < g.k; ++k) acc += wr.at(k, j) * xr.at(i, k);
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

Mat program_tile(const Mat& values, const MrrParams& p, const NoiseParams& n, RngStream& rng) {
  const WeightMap map(p);
  Mat out(values.rows, values.cols);
  for (std::int64_t r = 0; r < values.rows; ++r)
    for (std::int64_t c = 0; c < values.cols; ++c)
      out.at(r, c) = map.noisy(map.voltage(values.at(r, c)), n, rng);
  return out;
}

Mat simulate_layer(const GemmShape& g, const Mat& weights, const Mat& inputs, MappingMode mode,
                   const OpeConfig& ope, const MrrParams& p, const NoiseParams& n, SimTrace* trace) {
  check_shapes(g, weights, inputs);
  ope.validate();
  n.validate();
  if (mode == MappingMode::Analog) return simulate_analog(g, weights, inputs, ope, p, n, trace);
  return simulate_streamed(g, weights, inputs, mode == MappingMode::WeightStationary, ope, p, n, trace);
}

Mat reference_layer(const GemmShape& g, const Mat& weights, const Mat& inputs, int n_t) {
  check_shapes(g, weights, inputs);
  Mat wq(g.k, g.n);
  for (std::int64_t k = 0; k < g.k; ++k)
    for (std::int64_t j = 0; j < g.n; ++j) wq.at(k, j) = quantize_unit(weights.at(k, j), n_t);
  Mat xq(g.m, g.k);
  for (std::int64_t i = 0; i < g.m; ++i)
    for (std::int64_t k = 0; k < g.k; ++k) xq.at(i, k) = quantize_unit(inputs.at(i, k), n_t);
  Mat out(g.m, g.n);
  for (std::int64_t i = 0; i < g.m; ++i) {
    for (std::int64_t j = 0; j < g.n; ++j) {
      double acc = 0.0;
      for (std::int64_t k = 0; k < g.k; ++k) acc += wq.at(k, j) * xq.at(i, k);
      out.at(i, j) = acc;
    }
  }
  return out;
}

}  // namespace mrrsim
