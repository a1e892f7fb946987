#pragma once

#include "robustiso/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace robustiso {

using Vertex = std::uint32_t;
using Colour = std::uint32_t;
using VertexSet = boost::dynamic_bitset<>;

/// A bijection [n] -> [n] in array form.
class Assignment {
  public:
    Assignment() = default;
    /// Throws InvalidArgument unless `mapping` is a permutation of 0..n-1.
    explicit Assignment(std::vector<Vertex> mapping);

    static Assignment identity(std::size_t n);

    std::size_t size() const noexcept { return mapping_.size(); }
    Vertex operator[](Vertex v) const { return mapping_[v]; }
    const std::vector<Vertex>& mapping() const noexcept { return mapping_; }
    Assignment inverse() const;

    friend bool operator==(const Assignment&, const Assignment&) = default;
    friend auto operator<=>(const Assignment& a, const Assignment& b) { return a.mapping_ <=> b.mapping_; }

  private:
    std::vector<Vertex> mapping_;
};

/// A set of (source, target) pairs with distinct sources and distinct targets,
/// kept sorted by source.
class PartialInjection {
  public:
    using Pair = std::pair<Vertex, Vertex>;

    PartialInjection() = default;
    /// Throws InvalidArgument if two pairs share a source or a target.
    explicit PartialInjection(std::vector<Pair> pairs);

    /// graph(phi) = {(v, phi(v))}.
    static PartialInjection graph_of(const Assignment& phi);

    std::size_t size() const noexcept { return pairs_.size(); }
    bool empty() const noexcept { return pairs_.empty(); }
    const std::vector<Pair>& pairs() const noexcept { return pairs_; }
    auto begin() const noexcept { return pairs_.begin(); }
    auto end() const noexcept { return pairs_.end(); }

    /// True iff every pair (v, v') has v' = phi(v).
    bool is_subset_of(const Assignment& phi) const;
    /// Largest vertex index mentioned plus one (0 when empty).
    std::size_t span() const;

    friend bool operator==(const PartialInjection&, const PartialInjection&) = default;

  private:
    std::vector<Pair> pairs_;
};

/// Undirected simple graph on vertices 0..n-1 with optional exact edge
/// weights and optional vertex colours.
///
/// An unweighted edge behaves as weight 1; a non-edge has weight 0. Adding a
/// weighted edge turns the whole graph weighted, with earlier edges keeping
/// weight 1. Uncoloured graphs report colour 0 for every vertex.
class Graph {
  public:
    explicit Graph(std::size_t n = 0);

    std::size_t order() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    bool is_weighted() const noexcept { return !weights_.empty(); }
    bool is_coloured() const noexcept { return !colours_.empty(); }

    void add_edge(Vertex u, Vertex v);
    void add_edge(Vertex u, Vertex v, const Rational& weight);
    void set_colour(Vertex v, Colour colour);
    /// Sets every vertex colour at once; size must equal order().
    void set_colours(std::vector<Colour> colours);

    bool has_edge(Vertex u, Vertex v) const;
    Rational weight(Vertex u, Vertex v) const;
    Colour colour(Vertex v) const;
    const VertexSet& neighbourhood(Vertex v) const;
    std::size_t degree(Vertex v) const { return neighbourhood(v).count(); }

    /// Edges as (u, v) with u < v in lexicographic order.
    std::vector<std::pair<Vertex, Vertex>> edges() const;
    std::vector<Colour> colours() const;
    /// Maximum absolute stored weight, 1 for unweighted graphs with edges, 0 if edgeless.
    Rational weight_bound() const;
    /// Largest colour class size; the order of the graph if uncoloured.
    std::size_t max_colour_class_size() const;

    /// The image graph under pi: vertex v becomes pi[v].
    Graph permuted(const Assignment& pi) const;

    friend bool operator==(const Graph& a, const Graph& b);

  private:
    void check_vertex(Vertex v) const;
    void check_new_edge(Vertex u, Vertex v) const;

    std::vector<VertexSet> adjacency_;
    std::size_t edge_count_ = 0;
    std::vector<Rational> weights_;  // dense n*n, empty when unweighted
    std::vector<Colour> colours_;    // empty when uncoloured
};

/// Edit cost of pi between same-order graphs: number of unordered pairs whose
/// edge status disagrees, or the summed absolute weight difference when either
/// graph is weighted. Coloured inputs require a colour-preserving pi.
Rational edit_cost(const Graph& g, const Graph& h, const Assignment& pi);

struct EditDistanceResult {
    Rational cost;
    Assignment assignment;
};

inline constexpr std::size_t kDefaultBruteForceCap = 10;

/// Exact edit distance by enumerating all (colour-preserving) bijections in
/// lexicographic order; ties keep the lexicographically smallest bijection.
EditDistanceResult edit_distance_bruteforce(const Graph& g, const Graph& h,
                                            std::size_t cap = kDefaultBruteForceCap);

/// N(v) symmetric-difference N(w).
VertexSet mixed_neighbourhood(const Graph& g, Vertex v, Vertex w);

/// Unweighted graph keeping the edges of weight strictly greater than t.
Graph threshold_graph(const Graph& g, const Rational& t);

/// Each vertex v becomes v*ell + i for i in [0, ell); each edge becomes a
/// complete bipartite graph between the copies; copy i of v gets colour
/// colour(v)*ell + i.
Graph blowup(const Graph& g, std::size_t ell);

Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& g);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const Graph& g);

}  // namespace robustiso
