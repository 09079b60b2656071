#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vc/dataparallel.hpp"
#include "vc/gkr.hpp"

namespace vc {

// A concrete instance of one protocol: the prover and the verifier bound to their inputs.
struct ProtocolInstance {
  ProtocolId protocol = ProtocolId::kCircuit;
  std::uint64_t size = 0;  // problem size as reported in tables
  std::function<ProveResult(std::uint64_t seed)> prove;
  std::function<Verdict(std::span<const std::uint8_t>)> verify;
};

// GKR over the MATMULT circuit; `addition_tree` selects the shortcut for the sum layers.
ProtocolInstance matmul_gkr_instance(std::vector<Fe> a, std::vector<Fe> b, std::size_t n, bool addition_tree);
// Special-purpose product protocol. eval_ms is the prover's own naive product time.
ProtocolInstance matmul_special_instance(std::vector<Fe> a, std::vector<Fe> b, std::size_t n, bool in_place);
ProtocolInstance matrix_power_instance(std::vector<Fe> m, std::size_t n, unsigned k);
ProtocolInstance distinct_instance(std::vector<StreamUpdate> updates, std::uint64_t n);
ProtocolInstance pattern_instance(std::vector<Fe> text, std::vector<Fe> pattern);
// `input` is copy-major: copy 0's base input, then copy 1's, and so on.
ProtocolInstance dataparallel_instance(SuperCircuit sc, std::span<const Fe> input);
// Plain GKR over a binary add or mul tree.
ProtocolInstance tree_instance(std::vector<Fe> leaves, GateOp op);

// Random instance of the given size. Sizes are the matrix dimension, stream universe,
// text length, copy count or leaf count.
ProtocolInstance random_instance(ProtocolId id, std::uint64_t size, Rng& rng);
ProtocolId parse_protocol(const std::string& name);  // throws std::invalid_argument

}  // namespace vc
