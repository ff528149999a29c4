#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qcap/errors.hpp"
#include "qcap/infoquant.hpp"

namespace qcap {
namespace {

void check_witness_args(int n, std::size_t d, int j) {
  if (n < 1) throw std::invalid_argument("witness needs n >= 1");
  if (d < 2) throw std::invalid_argument("witness needs d >= 2");
  if (j < 2) throw std::invalid_argument("witness needs j >= 2 uses");
}

std::size_t paired_rockets(int n, int j) { return static_cast<std::size_t>(std::min(n, j - 1)); }

DensityOperator ket0(std::size_t d) {
  const std::vector<std::size_t> zero{0};
  return DensityOperator::basis_state(SystemLayout({d}), zero);
}

// Flat register index helpers for the layout [use][flag, 2n data registers].
struct Registers {
  int n;
  bool with_flags;

  std::size_t per_use() const { return static_cast<std::size_t>(2 * n) + (with_flags ? 1 : 0); }
  std::size_t flag(int use) const { return static_cast<std::size_t>(use) * per_use(); }
  // Data register `slot` (0-based, < 2n) of `use` (0-based).
  std::size_t data(int use, std::size_t slot) const {
    return static_cast<std::size_t>(use) * per_use() + (with_flags ? 1 : 0) + slot;
  }
};

// Builds the witness input as a tensor product of pieces, then permutes into register order.
DensityOperator build_witness(int n, std::size_t d, int j, bool with_flags) {
  const Registers regs{n, with_flags};
  const std::size_t total_regs = regs.per_use() * static_cast<std::size_t>(j);

  // Fail fast before materializing anything.
  std::size_t dim = 1;
  for (std::size_t r = 0; r < total_regs; ++r) {
    const bool is_flag = with_flags && r % regs.per_use() == 0;
    dim *= is_flag ? 2 : d;
    check_dimension(dim, "witness state");
  }

  std::vector<DensityOperator> pieces;
  std::vector<std::size_t> piece_order;  // register index of each subsystem, in tensor order
  std::vector<bool> placed(total_regs, false);
  auto place = [&](DensityOperator piece, std::initializer_list<std::size_t> regs_of_piece) {
    for (std::size_t r : regs_of_piece) {
      piece_order.push_back(r);
      placed[r] = true;
    }
    pieces.push_back(std::move(piece));
  };

  if (with_flags) {
    for (int u = 0; u < j; ++u) {
      const std::vector<std::size_t> idx{u == 0 ? std::size_t{0} : std::size_t{1}};
      place(DensityOperator::basis_state(SystemLayout({2}), idx), {regs.flag(u)});
    }
  }
  const DensityOperator mixed = DensityOperator::maximally_mixed(SystemLayout({d}));
  const DensityOperator phi = max_entangled(d).density();
  for (std::size_t k = 0; k < paired_rockets(n, j); ++k) {
    place(mixed, {regs.data(0, 2 * k)});
    place(phi, {regs.data(0, 2 * k + 1), regs.data(static_cast<int>(k) + 1, 0)});
  }
  for (std::size_t r = 0; r < total_regs; ++r) {
    if (!placed[r]) place(ket0(d), {r});
  }

  const DensityOperator product = tensor(pieces);
  // Result subsystem r is product subsystem perm[r].
  std::vector<std::size_t> perm(total_regs);
  for (std::size_t pos = 0; pos < piece_order.size(); ++pos) perm[piece_order[pos]] = pos;
  return permute_systems(product, perm);
}

struct Accumulator {
  double hb = 0;
  double he = 0;
  double min_eigenvalue = 0;
  double trace_error = 0;

  void add(const InfoResult& r) {
    hb += r.component("H(B)");
    he += r.component("H(E)");
    min_eigenvalue = std::min(min_eigenvalue, r.min_eigenvalue);
    trace_error = std::max(trace_error, r.trace_error);
  }
};

InfoResult finish(const Accumulator& acc, int n, int j) {
  InfoResult r;
  r.value = acc.hb - acc.he;
  r.components = {{"H(B)", acc.hb},
                  {"H(E)", acc.he},
                  {"rate", r.value / static_cast<double>(j)},
                  {"pairs", static_cast<double>(paired_rockets(n, j))},
                  {"uses", static_cast<double>(j)}};
  r.min_eigenvalue = acc.min_eigenvalue;
  r.trace_error = acc.trace_error;
  return r;
}

}  // namespace

std::vector<std::string> witness_register_names(int n, int j) {
  std::vector<std::string> names;
  for (int u = 1; u <= j; ++u) {
    const std::string use = "u" + std::to_string(u) + ".";
    names.push_back(use + "flag");
    if (u == 1) {
      for (int k = 1; k <= n; ++k) {
        names.push_back(use + "rocket" + std::to_string(k) + ".A1");
        names.push_back(use + "rocket" + std::to_string(k) + ".A2");
      }
    } else {
      names.push_back(use + "erasure.data");
      for (int s = 1; s <= 2 * n - 1; ++s) names.push_back(use + "pad" + std::to_string(s));
    }
  }
  return names;
}

WitnessState witness_state(int n, std::size_t d, int j) {
  check_witness_args(n, d, j);
  DensityOperator state = build_witness(n, d, j, true);
  auto names = witness_register_names(n, j);
  std::vector<std::size_t> dims = state.layout().dims();
  SystemLayout labeled(std::move(dims), names);
  return WitnessState{DensityOperator::assume_valid(std::move(labeled), state.matrix()), std::move(names)};
}

InfoResult witness_coherent_info(int n, const Rational& p, std::size_t d, int j, RocketEnsemble kind) {
  check_witness_args(n, d, j);
  // With both flags pinned, the j uses act as rocket^(x)n (x) padded_erasure^(x)(j-1) and the
  // input factorizes into independent register groups; entropies of product states add.
  std::size_t pad = 1;
  for (int i = 0; i < 2 * n - 1; ++i) {
    pad *= d;
    check_dimension(pad, "witness pad register");
  }
  const QuantumChannel rocket = rocket_channel(d, kind);
  const QuantumChannel erasure = erasure_channel(p, d);
  const std::size_t pairs = paired_rockets(n, j);

  Accumulator acc;
  // Rocket k paired with use k+1: A1 is half of a reference-held Phi+, A2 entangled with the erasure data.
  if (pairs > 0) {
    const QuantumChannel group = tensor_channels(rocket, erasure);
    const DensityOperator input =
        tensor(DensityOperator::maximally_mixed(SystemLayout({d})), max_entangled(d).density());
    const InfoResult paired = coherent_information(group, input);
    for (std::size_t k = 0; k < pairs; ++k) acc.add(paired);
  }
  // Unpaired rockets carry |00>.
  if (static_cast<std::size_t>(n) > pairs) {
    const InfoResult idle = coherent_information(rocket, tensor(ket0(d), ket0(d)));
    for (std::size_t k = pairs; k < static_cast<std::size_t>(n); ++k) acc.add(idle);
  }
  // Erasure uses: pads always |0>, data registers beyond the paired ones |0>.
  const InfoResult pad_part = coherent_information(full_erasure(pad), ket0(pad));
  const InfoResult idle_data = coherent_information(erasure, ket0(d));
  for (int u = 2; u <= j; ++u) {
    acc.add(pad_part);
    if (static_cast<std::size_t>(u - 1) > pairs) acc.add(idle_data);
  }
  return finish(acc, n, j);
}

InfoResult witness_coherent_info_pinned_block(int n, const Rational& p, std::size_t d, int j, RocketEnsemble kind) {
  check_witness_args(n, d, j);
  std::vector<QuantumChannel> uses;
  uses.push_back(main_channel_component(n, p, d, 0, kind));
  const QuantumChannel erasure_use = main_channel_component(n, p, d, 1, kind);
  for (int u = 2; u <= j; ++u) uses.push_back(erasure_use);
  const QuantumChannel block = tensor_channels(uses);
  Accumulator acc;
  acc.add(coherent_information(block, build_witness(n, d, j, false)));
  return finish(acc, n, j);
}

InfoResult witness_coherent_info_full(int n, const Rational& p, std::size_t d, int j, RocketEnsemble kind) {
  check_witness_args(n, d, j);
  const QuantumChannel one = main_channel(n, p, d, kind);
  std::vector<QuantumChannel> uses(static_cast<std::size_t>(j), one);
  const QuantumChannel all = tensor_channels(uses);
  Accumulator acc;
  acc.add(coherent_information(all, build_witness(n, d, j, true)));
  return finish(acc, n, j);
}

}  // namespace qcap
