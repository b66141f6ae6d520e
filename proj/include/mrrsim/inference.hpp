#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrrsim/device.hpp"
#include "mrrsim/matrix.hpp"
#include "mrrsim/ope.hpp"
#include "mrrsim/workload.hpp"

namespace mrrsim {

// One layer of the bundled quantized model. Weights are stored unit-normalized
// (already on the signed-digit grid); weight_scale and act_scale are the
// multipliers that recover real-valued outputs after a MAC on normalized
// operands. Convolutions are stride 1.
struct QuantLayer {
  LayerKind kind = LayerKind::Gemm;
  std::string name;
  std::int64_t c_in = 0, c_out = 0, k_h = 0, k_w = 0;
  std::int64_t h_in = 0, w_in = 0, pad = 0;
  std::int64_t k = 0, n = 0;
  double weight_scale = 1.0;
  double act_scale = 1.0;
  std::vector<float> weights;  // conv: [c_out][c_in][k_h][k_w]; gemm: [n][k]

  std::int64_t h_out() const { return h_in + 2 * pad - k_h + 1; }
  std::int64_t w_out() const { return w_in + 2 * pad - k_w + 1; }
  std::int64_t weight_count() const;
  std::int64_t input_width() const;   // flattened activation count consumed
  std::int64_t output_width() const;  // flattened activation count produced
};

struct ToyModel {
  std::string name;
  int n_t = 7;  // digit precision the weights were frozen on
  std::vector<QuantLayer> layers;

  void validate() const;
};

// Sidecar JSON describes shapes and scales; the flat little-endian f32 blob it
// points to holds the normalized weights in layer order.
ToyModel load_toy_model(const std::string& sidecar_path);
void save_toy_model(const ToyModel& m, const std::string& sidecar_path,
                    const std::string& weights_filename);

// Synthetic labeled 2D patterns: one random prototype per class, samples are
// Gaussian jitters around their class prototype.
struct EvalSet {
  std::int64_t height = 8, width = 8;
  int classes = 10;
  Mat samples;  // count x (height*width), values in (-1, 1)
  std::vector<int> labels;

  std::int64_t count() const { return samples.rows; }
};

EvalSet make_eval_set(std::uint64_t seed, std::int64_t count = 512, int classes = 10,
                      std::int64_t height = 8, std::int64_t width = 8);

// How each layer's MAC is evaluated during a forward pass.
enum class LayerPath { Exact, WeightStationary, InputStationary, Analog };

LayerPath layer_path_from_mode(MappingMode mode);

struct ForwardTrace {
  std::vector<Mat> layer_outputs;  // real-valued activations after each layer
};

// Forward pass over the whole eval set; activations are normalized, clamped,
// and digit-quantized at each layer input per the model's quantization
// contract, whatever path then evaluates the MAC.
Mat forward_logits(const ToyModel& m, const EvalSet& ev, const std::vector<LayerPath>& paths,
                   const OpeConfig& ope, const MrrParams& p, const NoiseParams& n,
                   ForwardTrace* trace = nullptr);

double run_inference(const ToyModel& m, const EvalSet& ev, const std::vector<LayerPath>& paths,
                     const OpeConfig& ope, const MrrParams& p, const NoiseParams& n,
                     ForwardTrace* trace = nullptr);

// Noise-free quantized reference accuracy at the model's native precision.
double accuracy_eval(const ToyModel& m, const EvalSet& ev);

// Accuracy drop in percentage points when only one layer runs through the
// noisy device chain, averaged over `reps` derived seeds and floored at 0.
double layer_degradation_pct(const ToyModel& m, const EvalSet& ev, std::size_t layer_index,
                             MappingMode mode, int reps, const OpeConfig& ope, const MrrParams& p,
                             const NoiseParams& n);

}  // namespace mrrsim
