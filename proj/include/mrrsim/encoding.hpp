#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mrrsim {

// Balanced signed-digit stream: digits[t] in {-1, 0, +1} for t = 0..n_t,
// digits[0] the least significant slot. The decoded value is
// sum_t digits[t] * 2^(t - n_t).
struct DigitStream {
  int n_t = 0;
  std::vector<std::int8_t> digits;
};

// Greedy most-significant-first encoding: at each slot pick the digit that
// minimizes the remaining residual (ties prefer the zero digit). Requires
// |x| < 1; the decoded result is the closest representable value, so the
// round-trip error is at most 2^-(n_t+1).
DigitStream encode_signed_digits(double x, int n_t);

double decode_value(const DigitStream& s);

// Clamps into the encodable range, then quantizes through the digit grid.
// Shared by the reference GEMM and the streaming simulator so both sides of a
// comparison see identical operand quantization.
double quantize_unit(double x, int n_t);

// Shift-and-add MAC across wavelength channels: per slot t the per-channel
// products w_k * digit_k,t sum optically, then slots combine with the
// 2^(t - n_t) weighting. Equals sum_k w_k * decode(inputs[k]) up to rounding.
double osa_mac(std::span<const double> weights, std::span<const DigitStream> inputs);

// Detection bookkeeping for one MAC. With the shift-and-add stage enabled the
// slot results combine in the optical/analog domain and one detect-and-sum
// event reaches the converter; without it every slot is detected separately.
struct SlotTally {
  std::uint64_t slot_products = 0;
  std::uint64_t detect_events = 0;
};
SlotTally slot_tally(int n_lambda, int n_t, bool osa_enabled);

}  // namespace mrrsim
