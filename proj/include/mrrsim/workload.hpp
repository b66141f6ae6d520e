#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mrrsim {

enum class LayerKind { Conv, Gemm };

struct ConvDims {
  int c_in = 0;
  int c_out = 0;
  int k_h = 0;
  int k_w = 0;
  int h_out = 0;
  int w_out = 0;
};

struct GemmShape {
  std::int64_t m = 0;
  std::int64_t k = 0;
  std::int64_t n = 0;
};

struct LayerSpec {
  LayerKind kind = LayerKind::Gemm;
  std::string name;
  ConvDims conv;
  GemmShape gemm;
};

struct NetworkSpec {
  std::string name;
  std::string description;  // free-form shape provenance
  std::vector<LayerSpec> layers;
};

// im2col lowering: every output pixel becomes one GEMM row, every kernel
// element of every input channel one reduction column. A gemm layer passes
// through unchanged. Total multiply-accumulates are preserved.
GemmShape conv_to_gemm(const LayerSpec& layer);

void validate_network(const NetworkSpec& net);

NetworkSpec load_network(const std::string& path);
NetworkSpec network_from_json(const nlohmann::json& j);
nlohmann::json network_to_json(const NetworkSpec& net);
std::string save_network(const NetworkSpec& net);  // canonical serialized form

// Bundled desk-scale descriptors of well-known networks (shapes only).
std::vector<NetworkSpec> builtin_workloads();

}  // namespace mrrsim
