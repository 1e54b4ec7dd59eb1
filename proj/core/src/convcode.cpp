#include "yiarq/convcode.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace yiarq::convcode {

CodeSpec CodeSpec::from_octal(const std::string& text) {
  CodeSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      throw std::invalid_argument("CodeSpec: empty generator in \"" + text +
                                  "\"");
    }
    std::uint32_t mask = 0;
    for (char ch : item) {
      if (ch < '0' || ch > '7') {
        throw std::invalid_argument("CodeSpec: generator \"" + item +
                                    "\" is not octal");
      }
      mask = mask * 8 + static_cast<std::uint32_t>(ch - '0');
    }
    spec.generators.push_back(mask);
  }
  if (spec.generators.empty()) {
    throw std::invalid_argument("CodeSpec: no generators in \"" + text + "\"");
  }
  spec.n_c = static_cast<int>(spec.generators.size());
  std::uint32_t all = 0;
  for (auto g : spec.generators) all |= g;
  if (all == 0) {
    throw std::invalid_argument("CodeSpec: all generators zero");
  }
  spec.m = std::bit_width(all) - 1;
  spec.validate();
  return spec;
}

std::string CodeSpec::to_octal() const {
  std::string out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (i) out += ',';
    std::string digits;
    std::uint32_t g = generators[i];
    do {
      digits.insert(digits.begin(), static_cast<char>('0' + (g & 7u)));
      g >>= 3;
    } while (g != 0);
    out += digits;
  }
  return out;
}

void CodeSpec::validate() const {
  if (k_c != 1) {
    throw std::invalid_argument("CodeSpec: only one input bit per branch");
  }
  if (n_c < 1 || static_cast<int>(generators.size()) != n_c) {
    throw std::invalid_argument("CodeSpec: generators must have n_c entries");
  }
  if (m < 0 || m > 30) {
    throw std::invalid_argument("CodeSpec: memory order out of range");
  }
  const std::uint32_t width_mask = (2u << m) - 1u;
  bool top_tap = false;
  for (auto g : generators) {
    if (g == 0) {
      throw std::invalid_argument("CodeSpec: zero generator mask");
    }
    if (g & ~width_mask) {
      throw std::invalid_argument("CodeSpec: generator wider than m+1 taps");
    }
    // the register vector is (input << m) | state, so bit 0 is the oldest tap
    if (g & 1u) top_tap = true;
  }
  if (m > 0 && !top_tap) {
    throw std::invalid_argument(
        "CodeSpec: no generator taps the oldest register bit; m overstated");
  }
}

Trellis build_trellis(const CodeSpec& spec) {
  spec.validate();
  Trellis t;
  t.n_c = spec.n_c;
  t.m = spec.m;
  t.num_states = 1 << spec.m;
  t.edges.resize(static_cast<std::size_t>(t.num_states));
  for (int s = 0; s < t.num_states; ++s) {
    for (int b = 0; b < 2; ++b) {
      // register = current input in the top bit, then newest to oldest state
      const std::uint32_t reg =
          (static_cast<std::uint32_t>(b) << spec.m) |
          static_cast<std::uint32_t>(s);
      Trellis::Edge e;
      e.next = spec.m == 0 ? 0 : ((s >> 1) | (b << (spec.m - 1)));
      for (int i = 0; i < spec.n_c; ++i) {
        const std::uint32_t bit = std::popcount(spec.generators[i] & reg) & 1u;
        e.out_bits |= bit << i;
      }
      t.edges[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)] = e;
    }
  }
  return t;
}

std::vector<std::uint8_t> encode_bits(const Trellis& trellis,
                                      const std::vector<std::uint8_t>& info) {
  if (info.empty()) {
    throw std::invalid_argument("encode: empty input block");
  }
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(trellis.n_c) *
              (info.size() + static_cast<std::size_t>(trellis.m)));
  int state = 0;
  auto push_branch = [&](int bit) {
    const auto& e = trellis.edges[static_cast<std::size_t>(state)]
                                 [static_cast<std::size_t>(bit)];
    for (int i = 0; i < trellis.n_c; ++i) {
      out.push_back(static_cast<std::uint8_t>((e.out_bits >> i) & 1u));
    }
    state = e.next;
  };
  for (auto bit : info) {
    if (bit > 1) {
      throw std::invalid_argument("encode: input bits must be 0 or 1");
    }
    push_branch(bit);
  }
  for (int j = 0; j < trellis.m; ++j) push_branch(0);
  return out;
}

std::vector<int> encode(const Trellis& trellis,
                        const std::vector<std::uint8_t>& info) {
  const auto bits = encode_bits(trellis, info);
  std::vector<int> symbols(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    symbols[i] = bits[i] ? -1 : +1;
  }
  return symbols;
}

int free_distance(const Trellis& trellis, int k_cap) {
  // Dijkstra over nonzero states with branch output weights as edge costs.
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(trellis.num_states), inf);
  using Item = std::pair<int, int>;  // (distance, state)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

  const auto& leave = trellis.edges[0][1];  // input 1 departs the zero state
  const int w_leave = std::popcount(leave.out_bits);
  int best_return = inf;
  if (leave.next == 0) {
    best_return = w_leave;  // memoryless code, immediate remerge
  } else {
    dist[static_cast<std::size_t>(leave.next)] = w_leave;
    heap.emplace(w_leave, leave.next);
  }
  while (!heap.empty()) {
    auto [d, s] = heap.top();
    heap.pop();
    if (d > dist[static_cast<std::size_t>(s)]) continue;
    if (d >= best_return) break;
    for (int b = 0; b < 2; ++b) {
      const auto& e = trellis.edges[static_cast<std::size_t>(s)]
                                   [static_cast<std::size_t>(b)];
      const int nd = d + std::popcount(e.out_bits);
      if (e.next == 0) {
        best_return = std::min(best_return, nd);
      } else if (nd < dist[static_cast<std::size_t>(e.next)]) {
        dist[static_cast<std::size_t>(e.next)] = nd;
        heap.emplace(nd, e.next);
      }
    }
  }
  if (best_return == inf || best_return > k_cap) {
    throw std::runtime_error(
        "free_distance: no remerging path within the weight cap");
  }
  return best_return;
}

TransferCoefficients compute_transfer_coefficients(const Trellis& trellis,
                                                   int k_max) {
  if (k_max < 1) {
    throw std::invalid_argument("transfer coefficients: k_max must be >= 1");
  }
  TransferCoefficients tc;
  tc.k_max = k_max;
  tc.a.assign(static_cast<std::size_t>(k_max) + 1, BigInt(0));
  tc.c.assign(static_cast<std::size_t>(k_max) + 1, BigInt(0));

  struct Cell {
    BigInt count{0};
    BigInt bits{0};
  };
  const std::size_t weights = static_cast<std::size_t>(k_max) + 1;
  const std::size_t states = static_cast<std::size_t>(trellis.num_states);
  std::vector<Cell> active(states * weights), next(states * weights);
  auto at = [&](std::vector<Cell>& v, int s, int w) -> Cell& {
    return v[static_cast<std::size_t>(s) * weights +
             static_cast<std::size_t>(w)];
  };

  auto settle = [&](int w, const BigInt& count, const BigInt& bits) {
    tc.a[static_cast<std::size_t>(w)] += count;
    tc.c[static_cast<std::size_t>(w)] += bits;
  };

  // First branch: input 1 leaves the zero state.
  {
    const auto& e = trellis.edges[0][1];
    const int w = std::popcount(e.out_bits);
    if (w <= k_max) {
      if (e.next == 0) {
        settle(w, 1, 1);
      } else {
        at(active, e.next, w) = {1, 1};
      }
    }
  }

  // Any detour with weight <= k_max that is still open after this many
  // branches must contain a zero-weight cycle.
  const long step_cap =
      static_cast<long>(trellis.num_states) * (k_max + 1) + trellis.m + 2;
  bool any_active = true;
  for (long step = 0; any_active; ++step) {
    if (step > step_cap) {
      throw std::runtime_error(
          "transfer coefficients: zero-weight loop, catastrophic code");
    }
    any_active = false;
    for (auto& cell : next) cell = Cell{};
    for (int s = 0; s < trellis.num_states; ++s) {
      for (int w = 0; w <= k_max; ++w) {
        Cell& cur = at(active, s, w);
        if (cur.count == 0) continue;
        for (int b = 0; b < 2; ++b) {
          const auto& e = trellis.edges[static_cast<std::size_t>(s)]
                                       [static_cast<std::size_t>(b)];
          const int nw = w + std::popcount(e.out_bits);
          if (nw > k_max) continue;
          const BigInt bits = cur.bits + (b ? cur.count : BigInt(0));
          if (e.next == 0) {
            settle(nw, cur.count, bits);
          } else {
            Cell& dst = at(next, e.next, nw);
            dst.count += cur.count;
            dst.bits += bits;
            any_active = true;
          }
        }
      }
    }
    active.swap(next);
  }

  tc.d_f = 0;
  for (int k = 0; k <= k_max; ++k) {
    if (tc.a[static_cast<std::size_t>(k)] != 0) {
      tc.d_f = k;
      break;
    }
  }
  if (tc.d_f == 0) {
    throw std::invalid_argument(
        "transfer coefficients: k_max is below the free distance");
  }
  return tc;
}

static BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt result = 1;
  for (int i = 1; i <= r; ++i) {
    result *= n - r + i;
    result /= i;
  }
  return result;
}

BigInt ak_length_bound(int k, int L, int n_c) {
  if (k < 1 || L < 1 || n_c < 1) {
    throw std::invalid_argument("ak_length_bound: k, L, n_c must be >= 1");
  }
  if (k > L * n_c) return 0;
  BigInt sum = 0;
  for (int l = 0; l <= L - 1; ++l) {
    if (L - l - 1 > k - 1) continue;
    sum += binomial(L, l) * binomial(k - 1, L - l - 1);
  }
  return sum;
}

}  // namespace yiarq::convcode
