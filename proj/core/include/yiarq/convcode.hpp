#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace yiarq::convcode {

using BigInt = boost::multiprecision::cpp_int;

// Feedforward binary convolutional code, one input bit per branch.
// Generator masks are m+1 bits wide with the most significant bit tapping
// the current input, so octal "5" with m=2 is 1 + D^2.
struct CodeSpec {
  int k_c = 1;
  int n_c = 0;
  int m = 0;
  std::vector<std::uint32_t> generators;

  // Parses "5,7" style octal generator lists.  The memory order is taken
  // from the highest tap degree across all generators.
  static CodeSpec from_octal(const std::string& text);

  double rate() const { return static_cast<double>(k_c) / n_c; }
  int constraint_length() const { return m + 1; }
  std::string to_octal() const;
  void validate() const;
};

struct Trellis {
  struct Edge {
    int next = 0;
    std::uint32_t out_bits = 0;  // bit i = i-th output bit of the branch
  };

  int n_c = 0;
  int m = 0;
  int num_states = 1;
  std::vector<std::array<Edge, 2>> edges;  // [state][input]

  // Antipodal symbol for output position i of the (state, input) branch.
  // Bit 0 maps to +1, bit 1 to -1.
  int symbol(int state, int input, int i) const {
    return (edges[state][input].out_bits >> i) & 1u ? -1 : +1;
  }
};

Trellis build_trellis(const CodeSpec& spec);

// Coded bits for info followed by the m-zero tail; length n_c*(H+m).
std::vector<std::uint8_t> encode_bits(const Trellis& trellis,
                                      const std::vector<std::uint8_t>& info);

// Antipodal symbols (+1/-1) for info followed by the m-zero tail.
std::vector<int> encode(const Trellis& trellis,
                        const std::vector<std::uint8_t>& info);

// Minimum output Hamming weight over paths that leave state 0 and first
// return to it.  Throws std::runtime_error if no remerging path has weight
// <= k_cap.
int free_distance(const Trellis& trellis, int k_cap = 64);

struct TransferCoefficients {
  int d_f = 0;
  int k_max = 0;
  std::vector<BigInt> a;  // a[k] = number of first-return detours of weight k
  std::vector<BigInt> c;  // c[k] = total input weight of those detours
};

// Exact detour enumeration up to output weight k_max by dynamic programming
// over (state, accumulated weight).
TransferCoefficients compute_transfer_coefficients(const Trellis& trellis,
                                                   int k_max);

// Combinatorial upper bound on the number of weight-k detours of length L
// branches; zero when k > L*n_c.
BigInt ak_length_bound(int k, int L, int n_c);

}  // namespace yiarq::convcode
