#include "mrrsim/inference.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "mrrsim/encoding.hpp"
#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"
#include "mrrsim/rng.hpp"
#include "mrrsim/simulator.hpp"

namespace mrrsim {

namespace {

// Stream-id bases carving the seed space: class prototypes, per-sample
// jitter, per-layer noise, per-repetition reseeding.
constexpr std::uint64_t kProtoStream = 1000;
constexpr std::uint64_t kSampleStream = 2000;
constexpr std::uint64_t kLayerSalt = 100;
constexpr std::uint64_t kRepSalt = 5000;

}  // namespace

std::int64_t QuantLayer::weight_count() const {
  return kind == LayerKind::Conv ? c_out * c_in * k_h * k_w : n * k;
}

std::int64_t QuantLayer::input_width() const {
  return kind == LayerKind::Conv ? c_in * h_in * w_in : k;
}

std::int64_t QuantLayer::output_width() const {
  return kind == LayerKind::Conv ? c_out * h_out() * w_out() : n;
}

void ToyModel::validate() const {
  if (layers.empty()) throw ValidationError("model '" + name + "': needs at least one layer");
  if (n_t < 0 || n_t > 60) throw ValidationError("model '" + name + "': n_t out of range");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const QuantLayer& l = layers[i];
    const std::string where = "model '" + name + "' layer '" + l.name + "'";
    if (l.kind == LayerKind::Conv) {
      if (l.c_in < 1 || l.c_out < 1 || l.k_h < 1 || l.k_w < 1 || l.h_in < 1 || l.w_in < 1 || l.pad < 0)
        throw ValidationError(where + ": bad conv dims");
      if (l.h_out() < 1 || l.w_out() < 1) throw ValidationError(where + ": kernel exceeds padded input");
    } else {
      if (l.k < 1 || l.n < 1) throw ValidationError(where + ": bad gemm dims");
    }
    if (!(l.weight_scale > 0.0) || !(l.act_scale > 0.0))
      throw ValidationError(where + ": scales must be positive");
    if (l.weights.size() != static_cast<std::size_t>(l.weight_count()))
      throw ValidationError(where + ": weight count mismatch");
    for (float w : l.weights)
      if (!(std::abs(w) <= 1.0f)) throw ValidationError(where + ": normalized weights must lie in [-1, 1]");
    if (i > 0 && layers[i - 1].output_width() != l.input_width())
      throw ValidationError(where + ": input width does not chain from previous layer");
  }
}

namespace {

QuantLayer layer_from_json(const nlohmann::json& j) {
  QuantLayer l;
  const std::string kind = require_string(j, "kind", "model layer");
  if (kind == "conv") {
    check_keys(j,
               {"kind", "name", "c_in", "c_out", "k_h", "k_w", "h_in", "w_in", "pad",
                "weight_scale", "act_scale"},
               {}, "model conv layer");
    l.kind = LayerKind::Conv;
    l.c_in = require_integer(j, "c_in", "model conv layer");
    l.c_out = require_integer(j, "c_out", "model conv layer");
    l.k_h = require_integer(j, "k_h", "model conv layer");
    l.k_w = require_integer(j, "k_w", "model conv layer");
    l.h_in = require_integer(j, "h_in", "model conv layer");
    l.w_in = require_integer(j, "w_in", "model conv layer");
    l.pad = require_integer(j, "pad", "model conv layer");
  } else if (kind == "gemm") {
    check_keys(j, {"kind", "name", "k", "n", "weight_scale", "act_scale"}, {}, "model gemm layer");
    l.kind = LayerKind::Gemm;
    l.k = require_integer(j, "k", "model gemm layer");
    l.n = require_integer(j, "n", "model gemm layer");
  } else {
    throw ParseError("model layer: kind must be 'conv' or 'gemm'");
  }
  l.name = require_string(j, "name", "model layer");
  l.weight_scale = require_number(j, "weight_scale", "model layer");
  l.act_scale = require_number(j, "act_scale", "model layer");
  return l;
}

nlohmann::json layer_to_json(const QuantLayer& l) {
  nlohmann::json j;
  if (l.kind == LayerKind::Conv) {
    j["kind"] = "conv";
    j["name"] = l.name;
    j["c_in"] = l.c_in;
    j["c_out"] = l.c_out;
    j["k_h"] = l.k_h;
    j["k_w"] = l.k_w;
    j["h_in"] = l.h_in;
    j["w_in"] = l.w_in;
    j["pad"] = l.pad;
  } else {
    j["kind"] = "gemm";
    j["name"] = l.name;
    j["k"] = l.k;
    j["n"] = l.n;
  }
  j["weight_scale"] = l.weight_scale;
  j["act_scale"] = l.act_scale;
  return j;
}

}  // namespace

ToyModel load_toy_model(const std::string& sidecar_path) {
  const nlohmann::json j = load_json_file(sidecar_path);
  check_keys(j, {"name", "n_t", "weights_file", "layers"}, {}, "model sidecar");
  ToyModel m;
  m.name = require_string(j, "name", "model sidecar");
  m.n_t = static_cast<int>(require_integer(j, "n_t", "model sidecar"));
  const std::string weights_file = require_string(j, "weights_file", "model sidecar");
  if (!j.at("layers").is_array() || j.at("layers").empty())
    throw ParseError("model sidecar: layers must be a nonempty array");
  for (const auto& lj : j.at("layers")) m.layers.push_back(layer_from_json(lj));

  const std::filesystem::path bin =
      std::filesystem::path(sidecar_path).parent_path() / weights_file;
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw IoError("cannot open weight file: " + bin.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  std::int64_t total = 0;
  for (const QuantLayer& l : m.layers) total += l.weight_count();
  if (bytes.size() != static_cast<std::size_t>(total) * 4)
    throw ParseError("weight file " + bin.string() + ": expected " + std::to_string(total * 4) +
                     " bytes, got " + std::to_string(bytes.size()));
  std::size_t off = 0;
  for (QuantLayer& l : m.layers) {
    l.weights.resize(static_cast<std::size_t>(l.weight_count()));
    for (float& w : l.weights) {
      const std::uint32_t u = static_cast<std::uint32_t>(bytes[off]) |
                              static_cast<std::uint32_t>(bytes[off + 1]) << 8 |
                              static_cast<std::uint32_t>(bytes[off + 2]) << 16 |
                              static_cast<std::uint32_t>(bytes[off + 3]) << 24;
      w = std::bit_cast<float>(u);
      off += 4;
    }
  }
  m.validate();
  return m;
}

void save_toy_model(const ToyModel& m, const std::string& sidecar_path,
                    const std::string& weights_filename) {
  m.validate();
  nlohmann::json j;
  j["name"] = m.name;
  j["n_t"] = m.n_t;
  j["weights_file"] = weights_filename;
  j["layers"] = nlohmann::json::array();
  for (const QuantLayer& l : m.layers) j["layers"].push_back(layer_to_json(l));
  write_text_file(sidecar_path, j.dump(2) + "\n");

  const std::filesystem::path bin =
      std::filesystem::path(sidecar_path).parent_path() / weights_filename;
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw IoError("cannot write weight file: " + bin.string());
  for (const QuantLayer& l : m.layers) {
    for (float w : l.weights) {
      const std::uint32_t u = std::bit_cast<std::uint32_t>(w);
      const unsigned char b[4] = {static_cast<unsigned char>(u & 0xFF),
                                  static_cast<unsigned char>(u >> 8 & 0xFF),
                                  static_cast<unsigned char>(u >> 16 & 0xFF),
                                  static_cast<unsigned char>(u >> 24 & 0xFF)};
      out.write(reinterpret_cast<const char*>(b), 4);
    }
  }
  if (!out) throw IoError("failed writing weight file: " + bin.string());
}

EvalSet make_eval_set(std::uint64_t seed, std::int64_t count, int classes, std::int64_t height,
                      std::int64_t width) {
  if (count < 1 || classes < 2 || height < 1 || width < 1)
    throw ValidationError("eval set: count >= 1, classes >= 2, positive dims required");
  EvalSet ev;
  ev.height = height;
  ev.width = width;
  ev.classes = classes;
  const std::int64_t pixels = height * width;

  std::vector<std::vector<double>> protos(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    RngStream rng(seed, kProtoStream + static_cast<std::uint64_t>(c));
    auto& p = protos[static_cast<std::size_t>(c)];
    p.resize(static_cast<std::size_t>(pixels));
    for (double& v : p) v = rng.uniform(-0.8, 0.8);
  }

  ev.samples = Mat(count, pixels);
  ev.labels.resize(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % classes);
    ev.labels[static_cast<std::size_t>(i)] = label;
    RngStream rng(seed, kSampleStream + static_cast<std::uint64_t>(i));
    const auto& p = protos[static_cast<std::size_t>(label)];
    for (std::int64_t j = 0; j < pixels; ++j)
      ev.samples.at(i, j) =
          std::clamp(p[static_cast<std::size_t>(j)] + rng.normal(0.15), -0.99, 0.99);
  }
  return ev;
}

LayerPath layer_path_from_mode(MappingMode mode) {
  switch (mode) {
    case MappingMode::WeightStationary:
      return LayerPath::WeightStationary;
    case MappingMode::InputStationary:
      return LayerPath::InputStationary;
    case MappingMode::Analog:
      return LayerPath::Analog;
  }
  throw ValidationError("unknown mapping mode");
}

namespace {

// Normalized, clamped, digit-quantized copy of the raw activations; the
// model's quantization applies before any hardware path sees the values.
Mat quantize_activations(const Mat& a, double act_scale, int n_t) {
  Mat q(a.rows, a.cols);
  for (std::int64_t r = 0; r < a.rows; ++r)
    for (std::int64_t c = 0; c < a.cols; ++c)
      q.at(r, c) = quantize_unit(std::clamp(a.at(r, c) / act_scale, -1.0, 1.0), n_t);
  return q;
}

// Unrolls stride-1 convolution inputs: one row per (sample, oy, ox), columns
// ordered (c_in, k_h, k_w) to match the weight matrix rows.
Mat im2col(const Mat& acts, const QuantLayer& l) {
  const std::int64_t ho = l.h_out(), wo = l.w_out();
  Mat x(acts.rows * ho * wo, l.c_in * l.k_h * l.k_w);
  for (std::int64_t s = 0; s < acts.rows; ++s) {
    for (std::int64_t oy = 0; oy < ho; ++oy) {
      for (std::int64_t ox = 0; ox < wo; ++ox) {
        const std::int64_t row = (s * ho + oy) * wo + ox;
        std::int64_t col = 0;
        for (std::int64_t ci = 0; ci < l.c_in; ++ci) {
          for (std::int64_t kh = 0; kh < l.k_h; ++kh) {
            for (std::int64_t kw = 0; kw < l.k_w; ++kw, ++col) {
              const std::int64_t iy = oy - l.pad + kh;
              const std::int64_t ix = ox - l.pad + kw;
              const bool inside = iy >= 0 && iy < l.h_in && ix >= 0 && ix < l.w_in;
              x.at(row, col) = inside ? acts.at(s, (ci * l.h_in + iy) * l.w_in + ix) : 0.0;
            }
          }
        }
      }
    }
  }
  return x;
}

Mat weight_matrix(const QuantLayer& l) {
  if (l.kind == LayerKind::Conv) {
    Mat w(l.c_in * l.k_h * l.k_w, l.c_out);
    for (std::int64_t co = 0; co < l.c_out; ++co)
      for (std::int64_t ci = 0; ci < l.c_in; ++ci)
        for (std::int64_t kh = 0; kh < l.k_h; ++kh)
          for (std::int64_t kw = 0; kw < l.k_w; ++kw)
            w.at((ci * l.k_h + kh) * l.k_w + kw, co) = static_cast<double>(
                l.weights[static_cast<std::size_t>(((co * l.c_in + ci) * l.k_h + kh) * l.k_w + kw)]);
    return w;
  }
  Mat w(l.k, l.n);
  for (std::int64_t nn = 0; nn < l.n; ++nn)
    for (std::int64_t kk = 0; kk < l.k; ++kk)
      w.at(kk, nn) = static_cast<double>(l.weights[static_cast<std::size_t>(nn * l.k + kk)]);
  return w;
}

// Folds conv GEMM rows (sample, oy, ox) x c_out back into per-sample
// activation rows laid out channel-major.
Mat fold_conv_output(const Mat& y, const QuantLayer& l, std::int64_t samples) {
  const std::int64_t ho = l.h_out(), wo = l.w_out();
  Mat a(samples, l.c_out * ho * wo);
  for (std::int64_t s = 0; s < samples; ++s)
    for (std::int64_t oy = 0; oy < ho; ++oy)
      for (std::int64_t ox = 0; ox < wo; ++ox)
        for (std::int64_t co = 0; co < l.c_out; ++co)
          a.at(s, (co * ho + oy) * wo + ox) = y.at((s * ho + oy) * wo + ox, co);
  return a;
}

}  // namespace

Mat forward_logits(const ToyModel& m, const EvalSet& ev, const std::vector<LayerPath>& paths,
                   const OpeConfig& ope, const MrrParams& p, const NoiseParams& n,
                   ForwardTrace* trace) {
  m.validate();
  if (paths.size() != m.layers.size())
    throw ShapeError("forward: need one path per layer, got " + std::to_string(paths.size()) +
                     " for " + std::to_string(m.layers.size()) + " layers");
  if (ev.samples.cols != m.layers.front().input_width())
    throw ShapeError("forward: eval samples are " + std::to_string(ev.samples.cols) +
                     " wide, model expects " + std::to_string(m.layers.front().input_width()));

  Mat acts = ev.samples;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const QuantLayer& l = m.layers[li];
    const Mat norm = quantize_activations(acts, l.act_scale, ope.n_t);
    const Mat x = l.kind == LayerKind::Conv ? im2col(norm, l) : norm;
    const Mat w = weight_matrix(l);
    const GemmShape g{x.rows, x.cols, w.cols};

    Mat y;
    if (paths[li] == LayerPath::Exact) {
      y = reference_layer(g, w, x, ope.n_t);
    } else {
      MappingMode mode = paths[li] == LayerPath::WeightStationary ? MappingMode::WeightStationary
                         : paths[li] == LayerPath::InputStationary ? MappingMode::InputStationary
                                                                   : MappingMode::Analog;
      NoiseParams ln = n;
      ln.seed = mix_seed(n.seed, kLayerSalt + static_cast<std::uint64_t>(li));
      y = simulate_layer(g, w, x, mode, ope, p, ln);
    }

    const double back = l.weight_scale * l.act_scale;
    const bool last = li + 1 == m.layers.size();
    Mat out = l.kind == LayerKind::Conv ? fold_conv_output(y, l, acts.rows) : std::move(y);
    for (double& v : out.a) {
      v *= back;
      if (!last && v < 0.0) v = 0.0;
    }
    acts = std::move(out);
    if (trace) trace->layer_outputs.push_back(acts);
  }
  return acts;
}

double run_inference(const ToyModel& m, const EvalSet& ev, const std::vector<LayerPath>& paths,
                     const OpeConfig& ope, const MrrParams& p, const NoiseParams& n,
                     ForwardTrace* trace) {
  const Mat logits = forward_logits(m, ev, paths, ope, p, n, trace);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < logits.rows; ++s) {
    std::int64_t best = 0;
    for (std::int64_t c = 1; c < logits.cols; ++c)
      if (logits.at(s, c) > logits.at(s, best)) best = c;
    if (best == ev.labels[static_cast<std::size_t>(s)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(logits.rows);
}

double accuracy_eval(const ToyModel& m, const EvalSet& ev) {
  OpeConfig ope;
  ope.n_t = m.n_t;
  const std::vector<LayerPath> paths(m.layers.size(), LayerPath::Exact);
  return run_inference(m, ev, paths, ope, MrrParams{}, NoiseParams{});
}

double layer_degradation_pct(const ToyModel& m, const EvalSet& ev, std::size_t layer_index,
                             MappingMode mode, int reps, const OpeConfig& ope, const MrrParams& p,
                             const NoiseParams& n) {
  if (layer_index >= m.layers.size()) throw RangeError("layer_degradation_pct: layer index out of range");
  if (reps < 1) throw ValidationError("layer_degradation_pct: reps must be >= 1");

  std::vector<LayerPath> paths(m.layers.size(), LayerPath::Exact);
  const double clean = run_inference(m, ev, paths, ope, p, NoiseParams{.sigma_dac = 0, .sigma_th = 0});

  paths[layer_index] = layer_path_from_mode(mode);
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    NoiseParams rep = n;
    rep.seed = mix_seed(n.seed, kRepSalt + static_cast<std::uint64_t>(r),
                        static_cast<std::uint64_t>(layer_index));
    sum += run_inference(m, ev, paths, ope, p, rep);
  }
  const double noisy = sum / reps;
  return std::max(0.0, (clean - noisy) * 100.0);
}

}  // namespace mrrsim
