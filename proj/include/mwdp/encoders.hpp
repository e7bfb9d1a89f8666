#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwdp/instance.hpp"
#include "mwdp/solver.hpp"

namespace mwdp {

/// Directed TSP input: costs[i][j] is the cost of travelling i -> j,
/// 0 <= costs[i][j] <= cost_bound, diagonal ignored. Vertices are 1-based
/// in the encoding's terms; vertex 1 is the fixed tour anchor.
struct TspGraph {
    int32_t n = 0;
    int64_t cost_bound = 0;
    std::vector<std::vector<int64_t>> costs;
};

/// Layered DP over pairs (H, i): H the set of vertices still to be placed,
/// i the vertex the partial (reversed) tour currently ends on. State index
/// is the bijection bitmask(H) * n + (i - 1) over all pairs, including
/// never-reached padding pairs with i not in H; the layer of a pair is
/// n - |H|. A move to j consumes i from H and pays reward
/// cost_bound + 1 - cost[j][i]; at singleton H = {i} the move to vertex 1
/// closes the tour and pays cost_bound + 1 - cost[1][i]. Every other move
/// pays 0 (padding; a pair with i not in H consumes min(H) to keep layers
/// advancing). Rewards are then shifted by validation, so
///   v*(initial) = n * (cost_bound + 1 + shift) - optimal tour cost.
struct TspEncoding {
    DpInstance instance;
    TspGraph graph;
    int32_t state_of(uint32_t mask, int32_t vertex) const; // vertex 1-based
    uint32_t mask_of(int32_t state) const;
    int32_t vertex_of(int32_t state) const; // 1-based
};

/// Throws input_error(graph_too_small) for n < 3, bad_parameter on a
/// malformed cost matrix.
TspEncoding encode_tsp(const TspGraph& g);

struct TspSolution {
    std::vector<int32_t> tour; // 1, v_2, ..., v_n (1-based vertices)
    int64_t cost = 0;
};

/// Reads the tour off a full trace of the encoded instance. Throws
/// solver_negative(not_hamiltonian) when the trace left the real chain
/// (repeated or missing vertices).
TspSolution decode_tsp(const TspEncoding& enc, const PolicyTrace& trace);

/// Exhaustive minimum over all (n-1)! tours. Throws input_error(too_large)
/// for n > 10.
TspSolution brute_force_tsp(const TspGraph& g);

/// Minimum set cover input: universe {1, ..., universe_size}, sets listed
/// 0-based in encounter order.
struct MscInstance {
    int32_t universe_size = 0;
    std::vector<std::vector<int32_t>> sets;
};

/// Layered DP scanning the family once: at step t the state is the set of
/// still-uncovered elements, action 1 includes set t (reward 0), action 0
/// skips it (reward 1); the final step pays m + 1 iff nothing is left
/// uncovered. State index is t * 2^universe_size + bitmask(uncovered), plus
/// one terminus state; horizon is m + 1. With k the minimum cover size,
///   v*(initial) = 2m + 1 - k + shift * (m + 1).
struct MscEncoding {
    DpInstance instance;
    MscInstance input;
    int32_t state_of(int32_t t, uint32_t uncovered) const;
    int32_t step_of(int32_t state) const;
    uint32_t uncovered_of(int32_t state) const;
    int32_t terminus() const;
};

/// Throws input_error(bad_parameter) for an empty family or universe, or
/// elements outside the universe; input_error(too_large) past 14 elements
/// or 20 sets.
MscEncoding encode_msc(const MscInstance& in);

struct MscSolution {
    bool covered = false;
    std::vector<int32_t> chosen; // set indices, ascending
    int32_t size = 0;
};

/// Reads the chosen subfamily off a full trace of the encoded instance.
MscSolution decode_msc(const MscEncoding& enc, const PolicyTrace& trace);

/// Exhaustive minimum over all 2^m subfamilies. Throws
/// input_error(too_large) for m > 20.
MscSolution brute_force_msc(const MscInstance& in);

} // namespace mwdp
