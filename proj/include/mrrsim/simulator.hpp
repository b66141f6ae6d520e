#pragma once

#include <vector>

#include "mrrsim/device.hpp"
#include "mrrsim/matrix.hpp"
#include "mrrsim/ope.hpp"
#include "mrrsim/workload.hpp"

namespace mrrsim {

// Realizes a block of target weights through one noisy programming pass
// (row-major element order). With zero sigmas the result matches the targets
// to the voltage-inversion tolerance.
Mat program_tile(const Mat& values, const MrrParams& p, const NoiseParams& n, RngStream& rng);

// Diagnostics captured during simulate_layer. One realized block per
// stationary tile event, in tile order; analog runs also record the realized
// streamed operand.
struct SimTrace {
  std::vector<Mat> realized_tiles;
  Mat realized_inputs;
};

// Runs one GEMM through the array at value level. weights is K x N, inputs
// M x K, result M x N.
//   ws:     weights realized on the rings tile by tile, inputs digit-streamed.
//   is:     inputs realized on the rings, weight columns digit-streamed.
//   analog: both operands realized through the noisy chain, no digit coding.
// Every stationary tile draws from its own (seed, tile-index) stream, so
// results are independent of worker scheduling, and under ws the realized
// weights do not depend on the input matrix.
Mat simulate_layer(const GemmShape& g, const Mat& weights, const Mat& inputs, MappingMode mode,
                   const OpeConfig& ope, const MrrParams& p, const NoiseParams& n,
                   SimTrace* trace = nullptr);

// Exact GEMM over digit-quantized operands; the digital baseline the
// streaming paths are compared against.
Mat reference_layer(const GemmShape& g, const Mat& weights, const Mat& inputs, int n_t);

}  // namespace mrrsim
