#include "mrrsim/workload.hpp"

#include <sstream>

#include "mrrsim/errors.hpp"
#include "mrrsim/json_util.hpp"

namespace mrrsim {

GemmShape conv_to_gemm(const LayerSpec& layer) {
  if (layer.kind == LayerKind::Gemm) return layer.gemm;
  const ConvDims& c = layer.conv;
  GemmShape g;
  g.m = static_cast<std::int64_t>(c.h_out) * c.w_out;
  g.k = static_cast<std::int64_t>(c.k_h) * c.k_w * c.c_in;
  g.n = c.c_out;
  return g;
}

void validate_network(const NetworkSpec& net) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const LayerSpec& l = net.layers[i];
    bool ok = true;
    if (l.kind == LayerKind::Conv) {
      const ConvDims& c = l.conv;
      ok = c.c_in >= 1 && c.c_out >= 1 && c.k_h >= 1 && c.k_w >= 1 && c.h_out >= 1 && c.w_out >= 1;
    } else {
      ok = l.gemm.m >= 1 && l.gemm.k >= 1 && l.gemm.n >= 1;
    }
    if (!ok) bad.push_back("layer " + std::to_string(i) + " ('" + l.name + "')");
  }
  if (net.name.empty()) bad.insert(bad.begin(), "network name must be non-empty");
  if (net.layers.empty()) bad.push_back("network must contain at least one layer");
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "workload '" << net.name << "': dimensions must all be >= 1; offending: ";
    for (std::size_t i = 0; i < bad.size(); ++i) msg << (i ? ", " : "") << bad[i];
    throw ValidationError(msg.str());
  }
}

NetworkSpec network_from_json(const nlohmann::json& j) {
  check_keys(j, {"name", "layers"}, {"description"}, "workload");
  NetworkSpec net;
  net.name = require_string(j, "name", "workload");
  if (j.contains("description")) net.description = require_string(j, "description", "workload");
  if (!j["layers"].is_array()) throw ValidationError("workload: key 'layers' must be an array");
  for (std::size_t i = 0; i < j["layers"].size(); ++i) {
    const nlohmann::json& lj = j["layers"][i];
    const std::string ctx = "layer " + std::to_string(i);
    const std::string kind = require_string(lj, "kind", ctx);
    LayerSpec l;
    l.name = require_string(lj, "name", ctx);
    if (kind == "conv") {
      check_keys(lj, {"kind", "name", "c_in", "c_out", "k_h", "k_w", "h_out", "w_out"}, {}, ctx);
      l.kind = LayerKind::Conv;
      l.conv.c_in = static_cast<int>(require_integer(lj, "c_in", ctx));
      l.conv.c_out = static_cast<int>(require_integer(lj, "c_out", ctx));
      l.conv.k_h = static_cast<int>(require_integer(lj, "k_h", ctx));
      l.conv.k_w = static_cast<int>(require_integer(lj, "k_w", ctx));
      l.conv.h_out = static_cast<int>(require_integer(lj, "h_out", ctx));
      l.conv.w_out = static_cast<int>(require_integer(lj, "w_out", ctx));
    } else if (kind == "gemm") {
      check_keys(lj, {"kind", "name", "m", "k", "n"}, {}, ctx);
      l.kind = LayerKind::Gemm;
      l.gemm.m = require_integer(lj, "m", ctx);
      l.gemm.k = require_integer(lj, "k", ctx);
      l.gemm.n = require_integer(lj, "n", ctx);
    } else {
      throw ValidationError(ctx + ": kind must be 'conv' or 'gemm', got '" + kind + "'");
    }
    net.layers.push_back(std::move(l));
  }
  validate_network(net);
  return net;
}

NetworkSpec load_network(const std::string& path) { return network_from_json(load_json_file(path)); }

nlohmann::json network_to_json(const NetworkSpec& net) {
  nlohmann::ordered_json j;
  j["name"] = net.name;
  if (!net.description.empty()) j["description"] = net.description;
  j["layers"] = nlohmann::ordered_json::array();
  for (const LayerSpec& l : net.layers) {
    nlohmann::ordered_json lj;
    lj["kind"] = l.kind == LayerKind::Conv ? "conv" : "gemm";
    lj["name"] = l.name;
    if (l.kind == LayerKind::Conv) {
      lj["c_in"] = l.conv.c_in;
      lj["c_out"] = l.conv.c_out;
      lj["k_h"] = l.conv.k_h;
      lj["k_w"] = l.conv.k_w;
      lj["h_out"] = l.conv.h_out;
      lj["w_out"] = l.conv.w_out;
    } else {
      lj["m"] = l.gemm.m;
      lj["k"] = l.gemm.k;
      lj["n"] = l.gemm.n;
    }
    j["layers"].push_back(lj);
  }
  return j;
}

std::string save_network(const NetworkSpec& net) { return network_to_json(net).dump(2) + "\n"; }

namespace {

LayerSpec conv(std::string name, int c_in, int c_out, int k, int h_out, int w_out) {
  LayerSpec l;
  l.kind = LayerKind::Conv;
  l.name = std::move(name);
  l.conv = {c_in, c_out, k, k, h_out, w_out};
  return l;
}

LayerSpec gemm(std::string name, std::int64_t m, std::int64_t k, std::int64_t n) {
  LayerSpec l;
  l.kind = LayerKind::Gemm;
  l.name = std::move(name);
  l.gemm = {m, k, n};
  return l;
}

NetworkSpec make_alexnet() {
  NetworkSpec net;
  net.name = "alexnet";
  net.description = "Shapes follow the torchvision AlexNet definition (224x224 input).";
  net.layers = {
      conv("conv1", 3, 64, 11, 55, 55),  conv("conv2", 64, 192, 5, 27, 27),
      conv("conv3", 192, 384, 3, 13, 13), conv("conv4", 384, 256, 3, 13, 13),
      conv("conv5", 256, 256, 3, 13, 13), gemm("fc6", 1, 9216, 4096),
      gemm("fc7", 1, 4096, 4096),         gemm("fc8", 1, 4096, 1000),
  };
  return net;
}

NetworkSpec make_vgg16() {
  NetworkSpec net;
  net.name = "vgg16";
  net.description = "Shapes follow the VGG-16 configuration D (224x224 input).";
  net.layers = {
      conv("conv1_1", 3, 64, 3, 224, 224),   conv("conv1_2", 64, 64, 3, 224, 224),
      conv("conv2_1", 64, 128, 3, 112, 112), conv("conv2_2", 128, 128, 3, 112, 112),
      conv("conv3_1", 128, 256, 3, 56, 56),  conv("conv3_2", 256, 256, 3, 56, 56),
      conv("conv3_3", 256, 256, 3, 56, 56),  conv("conv4_1", 256, 512, 3, 28, 28),
      conv("conv4_2", 512, 512, 3, 28, 28),  conv("conv4_3", 512, 512, 3, 28, 28),
      conv("conv5_1", 512, 512, 3, 14, 14),  conv("conv5_2", 512, 512, 3, 14, 14),
      conv("conv5_3", 512, 512, 3, 14, 14),  gemm("fc6", 1, 25088, 4096),
      gemm("fc7", 1, 4096, 4096),            gemm("fc8", 1, 4096, 1000),
  };
  return net;
}

NetworkSpec make_resnet18() {
  NetworkSpec net;
  net.name = "resnet18";
  net.description =
      "Shapes follow the torchvision ResNet-18 definition (224x224 input), "
      "including the 1x1 downsample convolutions.";
  net.layers.push_back(conv("conv1", 3, 64, 7, 112, 112));
  const struct {
    int c_in, c_out, hw;
  } stages[] = {{64, 64, 56}, {64, 128, 28}, {128, 256, 14}, {256, 512, 7}};
  for (int s = 0; s < 4; ++s) {
    const auto& st = stages[s];
    const std::string p = "layer" + std::to_string(s + 1);
    net.layers.push_back(conv(p + ".0.conv1", st.c_in, st.c_out, 3, st.hw, st.hw));
    net.layers.push_back(conv(p + ".0.conv2", st.c_out, st.c_out, 3, st.hw, st.hw));
    if (st.c_in != st.c_out)
      net.layers.push_back(conv(p + ".0.downsample", st.c_in, st.c_out, 1, st.hw, st.hw));
    net.layers.push_back(conv(p + ".1.conv1", st.c_out, st.c_out, 3, st.hw, st.hw));
    net.layers.push_back(conv(p + ".1.conv2", st.c_out, st.c_out, 3, st.hw, st.hw));
  }
  net.layers.push_back(gemm("fc", 1, 512, 1000));
  return net;
}

NetworkSpec make_mobilenet_v3() {
  NetworkSpec net;
  net.name = "mobilenet_v3";
  net.description =
      "Shapes follow the MobileNetV3-Large table (224x224 input). Depthwise "
      "stages are modeled as single-input-channel convolutions with the same "
      "multiply-accumulate count; squeeze-excite blocks are omitted.";
  net.layers.push_back(conv("stem", 3, 16, 3, 112, 112));
  // {input res, kernel, expansion, c_in, c_out, stride}
  const struct {
    int res, k, exp, c_in, c_out, stride;
  } rows[] = {
      {112, 3, 16, 16, 16, 1},  {112, 3, 64, 16, 24, 2},  {56, 3, 72, 24, 24, 1},
      {56, 5, 72, 24, 40, 2},   {28, 5, 120, 40, 40, 1},  {28, 5, 120, 40, 40, 1},
      {28, 3, 240, 40, 80, 2},  {14, 3, 200, 80, 80, 1},  {14, 3, 184, 80, 80, 1},
      {14, 3, 184, 80, 80, 1},  {14, 3, 480, 80, 112, 1}, {14, 3, 672, 112, 112, 1},
      {14, 5, 672, 112, 160, 2}, {7, 5, 960, 160, 160, 1}, {7, 5, 960, 160, 160, 1},
  };
  int idx = 1;
  for (const auto& r : rows) {
    const std::string p = "bneck" + std::to_string(idx++);
    const int out_res = r.res / r.stride;
    if (r.exp != r.c_in) net.layers.push_back(conv(p + ".expand", r.c_in, r.exp, 1, r.res, r.res));
    net.layers.push_back(conv(p + ".dw", 1, r.exp, r.k, out_res, out_res));
    net.layers.push_back(conv(p + ".project", r.exp, r.c_out, 1, out_res, out_res));
  }
  net.layers.push_back(conv("head.conv", 160, 960, 1, 7, 7));
  net.layers.push_back(gemm("head.fc1", 1, 960, 1280));
  net.layers.push_back(gemm("head.fc2", 1, 1280, 1000));
  return net;
}

NetworkSpec make_gpt2_medium() {
  NetworkSpec net;
  net.name = "gpt2_medium";
  net.description =
      "Projection GEMMs of GPT-2 Medium (24 blocks, width 1024) at sequence "
      "length 1024; attention score/value products are omitted.";
  for (int b = 0; b < 24; ++b) {
    const std::string p = "h" + std::to_string(b);
    net.layers.push_back(gemm(p + ".attn.qkv", 1024, 1024, 3072));
    net.layers.push_back(gemm(p + ".attn.out", 1024, 1024, 1024));
    net.layers.push_back(gemm(p + ".mlp.up", 1024, 1024, 4096));
    net.layers.push_back(gemm(p + ".mlp.down", 1024, 4096, 1024));
  }
  return net;
}

NetworkSpec make_vit_base() {
  NetworkSpec net;
  net.name = "vit_base";
  net.description =
      "ViT-Base/16 at 224x224: patch-embedding convolution plus the projection "
      "GEMMs of 12 blocks (197 tokens, width 768).";
  net.layers.push_back(conv("patch_embed", 3, 768, 16, 14, 14));
  for (int b = 0; b < 12; ++b) {
    const std::string p = "block" + std::to_string(b);
    net.layers.push_back(gemm(p + ".attn.qkv", 197, 768, 2304));
    net.layers.push_back(gemm(p + ".attn.out", 197, 768, 768));
    net.layers.push_back(gemm(p + ".mlp.up", 197, 768, 3072));
    net.layers.push_back(gemm(p + ".mlp.down", 197, 3072, 768));
  }
  net.layers.push_back(gemm("head", 1, 768, 1000));
  return net;
}

}  // namespace

std::vector<NetworkSpec> builtin_workloads() {
  return {make_alexnet(),      make_vgg16(),       make_resnet18(),
          make_mobilenet_v3(), make_gpt2_medium(), make_vit_base()};
}

}  // namespace mrrsim
