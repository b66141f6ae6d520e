#include "mrrsim/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrrsim/errors.hpp"

namespace mrrsim {

namespace {
constexpr int kMaxNt = 60;  // keeps 2^n_t exact in both int64 and double paths

void check_nt(int n_t) {
  if (n_t < 0 || n_t > kMaxNt)
    throw DomainError("digit stream: n_t must lie in [0, " + std::to_string(kMaxNt) + "]");
}
}  // namespace

DigitStream encode_signed_digits(double x, int n_t) {
  check_nt(n_t);
  if (!(std::abs(x) < 1.0)) throw RangeError("encode_signed_digits: |x| must be < 1");
  DigitStream s;
  s.n_t = n_t;
  s.digits.assign(static_cast<std::size_t>(n_t) + 1, 0);
  double residual = x;
  for (int t = n_t; t >= 0; --t) {
    const double unit = std::ldexp(1.0, t - n_t);
    int best = 0;
    double best_err = std::abs(residual);
    for (const int d : {-1, +1}) {
      const double err = std::abs(residual - d * unit);
      if (err < best_err) {
        best = d;
        best_err = err;
      }
    }
    s.digits[static_cast<std::size_t>(t)] = static_cast<std::int8_t>(best);
    residual -= best * unit;
  }
  return s;
}

double decode_value(const DigitStream& s) {
  check_nt(s.n_t);
  if (s.digits.size() != static_cast<std::size_t>(s.n_t) + 1)
    throw ShapeError("decode_value: digit count must be n_t + 1");
  std::int64_t acc = 0;
  for (int t = 0; t <= s.n_t; ++t) {
    const int d = s.digits[static_cast<std::size_t>(t)];
    if (d < -1 || d > 1) throw DomainError("decode_value: digits must lie in {-1, 0, +1}");
    acc += static_cast<std::int64_t>(d) << t;
  }
  return std::ldexp(static_cast<double>(acc), -s.n_t);
}

double quantize_unit(double x, int n_t) {
  check_nt(n_t);
  const double lim = 1.0 - std::ldexp(1.0, -(n_t + 1));
  return decode_value(encode_signed_digits(std::clamp(x, -lim, lim), n_t));
}

double osa_mac(std::span<const double> weights, std::span<const DigitStream> inputs) {
  if (weights.size() != inputs.size())
    throw ShapeError("osa_mac: weights and inputs must have equal channel counts");
  if (weights.empty()) throw ShapeError("osa_mac: channel count must be >= 1");
  const int n_t = inputs[0].n_t;
  check_nt(n_t);
  for (const DigitStream& s : inputs) {
    if (s.n_t != n_t) throw ShapeError("osa_mac: all inputs must share one n_t");
    if (s.digits.size() != static_cast<std::size_t>(n_t) + 1)
      throw ShapeError("osa_mac: digit count must be n_t + 1");
  }
  double y = 0.0;
  for (int t = 0; t <= n_t; ++t) {
    double slot = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k)
      slot += weights[k] * inputs[k].digits[static_cast<std::size_t>(t)];
    y += std::ldexp(slot, t - n_t);
  }
  return y;
}

SlotTally slot_tally(int n_lambda, int n_t, bool osa_enabled) {
  check_nt(n_t);
  if (n_lambda < 1) throw DomainError("slot_tally: n_lambda must be >= 1");
  SlotTally tally;
  const std::uint64_t slots = static_cast<std::uint64_t>(n_t) + 1;
  tally.slot_products = slots * static_cast<std::uint64_t>(n_lambda);
  tally.detect_events = osa_enabled ? 1 : slots;
  return tally;
}

}  // namespace mrrsim
