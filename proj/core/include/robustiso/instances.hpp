#pragma once

#include "robustiso/graph.hpp"
#include "robustiso/qap.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace robustiso {

struct InstanceBundle {
    Graph g;
    Graph h;
    std::string family;
    std::map<std::string, std::string> params;
    /// Properties of the construction, e.g. "non_isomorphic" -> "true".
    std::map<std::string, std::string> claims;
    std::optional<std::uint64_t> seed;
};

/// 0/1 instance on [n] with c(n-1, v_A, 0, x) = 1 for every A of [k] and
/// x in A, where k = floor(log2 n) and v_A has the bits of A.
QapInstance gen_lemma36_qap(std::size_t n);

/// Names accepted by cfi_base.
std::vector<std::string> cfi_base_names();

/// Stock 3-regular connected base graphs: k4, prism, k33, cube, petersen.
Graph cfi_base(const std::string& name);

/// Gadget graph over a 3-regular connected base. Base vertex u with incident
/// edges e1 < e2 < e3 gives vertices 4u + j for the even subsets
/// {}, {e1,e2}, {e1,e3}, {e2,e3}; each (u, e) gives a pair a0, a1. Middle
/// vertices meet a1 on the edges of their subset and a0 on the others. Base
/// edge uv joins a_i(u) to a_i(v), or a_i(u) to a_(1-i)(v) when twisted.
Graph cfi_graph(const Graph& base, const std::vector<std::pair<Vertex, Vertex>>& twisted);

/// (untwisted, twisted on the lexicographically smallest base edge).
InstanceBundle gen_cfi_pair(const Graph& base);
InstanceBundle gen_cfi_pair(const std::string& base_name);

/// (G^(ell), H^(ell)) with the input's claims carried over.
InstanceBundle gen_blowup_pair(const InstanceBundle& bundle, std::size_t ell);

/// Erdos-Renyi: each pair u < v in lexicographic order is an edge with probability p.
Graph gen_random_graph(std::size_t n, double p, std::uint64_t seed);

inline constexpr std::size_t kDefaultVcRetries = 1000;

/// Draws from gen_random_graph(n, p, mix_seed(seed, i)) until the
/// neighbourhood system has VC dimension target_vc; throws VerificationFailed
/// after `retries` draws.
Graph gen_random_graph_with_vc(std::size_t n, double p, int target_vc, std::uint64_t seed,
                               std::size_t retries = kDefaultVcRetries);

/// Writes G.graph, H.graph and metadata.json into `dir`, creating it.
void write_bundle(const std::filesystem::path& dir, const InstanceBundle& bundle);
InstanceBundle read_bundle(const std::filesystem::path& dir);

}  // namespace robustiso
