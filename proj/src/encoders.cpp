#include "mwdp/encoders.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mwdp {

int32_t TspEncoding::state_of(uint32_t mask, int32_t vertex) const {
    return static_cast<int32_t>(mask) * graph.n + (vertex - 1);
}
uint32_t TspEncoding::mask_of(int32_t state) const {
    return static_cast<uint32_t>(state) / static_cast<uint32_t>(graph.n);
}
int32_t TspEncoding::vertex_of(int32_t state) const { return state % graph.n + 1; }

namespace {

void check_graph(const TspGraph& g) {
    if (g.n < 3)
        throw input_error(errc::graph_too_small, "need at least three vertices");
    if (g.n > 12)
        throw input_error(errc::too_large, "bitmask encoding capped at 12 vertices");
    if (g.cost_bound < 1)
        throw input_error(errc::bad_parameter, "cost bound must be >= 1");
    if (g.costs.size() != static_cast<std::size_t>(g.n))
        throw input_error(errc::bad_parameter, "cost matrix must be n x n");
    for (const auto& row : g.costs) {
        if (row.size() != static_cast<std::size_t>(g.n))
            throw input_error(errc::bad_parameter, "cost matrix must be n x n");
        for (int64_t c : row)
            if (c < 0 || c > g.cost_bound)
                throw input_error(errc::bad_parameter, "costs must lie in [0, cost_bound]");
    }
}

} // namespace

TspEncoding encode_tsp(const TspGraph& g) {
    check_graph(g);
    const int32_t n = g.n;
    const uint32_t full = (1u << n) - 1;
    auto cost = [&](int32_t from, int32_t to) { return g.costs[from - 1][to - 1]; };

    TspEncoding enc;
    enc.graph = g;

    InstanceData raw;
    raw.num_states = static_cast<int32_t>(full + 1) * n;
    raw.num_actions = n;
    raw.horizon = n;
    raw.time_dependent = false;
    raw.layered = true;
    raw.layer_of.resize(raw.num_states);
    raw.transitions.resize(static_cast<std::size_t>(raw.num_states) * n);
    raw.initial_state = static_cast<int32_t>(full) * n + 0; // (all vertices, at 1)

    for (uint32_t mask = 0; mask <= full; ++mask) {
        int32_t layer = n - std::popcount(mask);
        for (int32_t i = 1; i <= n; ++i) {
            int32_t s = static_cast<int32_t>(mask) * n + (i - 1);
            raw.layer_of[s] = layer;
            for (int32_t j = 1; j <= n; ++j) {
                Transition tr{0, 0};
                uint32_t ibit = 1u << (i - 1);
                if (mask == 0) {
                    tr = {s, 0}; // past the last layer, absorbing
                } else if (mask & ibit) {
                    uint32_t rest = mask & ~ibit;
                    tr.next = static_cast<int32_t>(rest) * n + (j - 1);
                    if (rest == 0) {
                        // Singleton {i}: only the move back to the anchor
                        // carries the closing edge of the tour.
                        tr.reward = (j == 1) ? g.cost_bound + 1 - cost(1, i) : 0;
                    } else {
                        bool real = (rest >> (j - 1)) & 1u;
                        tr.reward = real ? g.cost_bound + 1 - cost(j, i) : 0;
                    }
                } else {
                    // Padding pair: consume the lowest remaining vertex so the
                    // layer still advances.
                    uint32_t low = mask & (~mask + 1);
                    tr.next = static_cast<int32_t>(mask & ~low) * n + (j - 1);
                    tr.reward = 0;
                }
                raw.transitions[static_cast<std::size_t>(s) * n + (j - 1)] = tr;
            }
        }
    }
    enc.instance = validate_instance(raw);
    return enc;
}

TspSolution decode_tsp(const TspEncoding& enc, const PolicyTrace& trace) {
    const int32_t n = enc.graph.n;
    if (static_cast<int32_t>(trace.steps.size()) != n)
        throw input_error(errc::dimension_mismatch, "trace must cover the whole horizon");
    std::vector<int32_t> ends; // tour read backwards: i_1, ..., i_{n-1}
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    seen[1] = true;
    for (int32_t t = 1; t < n; ++t) {
        int32_t state = trace.steps[t].state;
        uint32_t mask = enc.mask_of(state);
        int32_t v = enc.vertex_of(state);
        if (!(mask & (1u << (v - 1))) || seen[v])
            throw solver_negative(errc::not_hamiltonian, "trace left the real chain");
        seen[v] = true;
        ends.push_back(v);
    }
    if (trace.steps.back().action != 0) // action "go to vertex 1" closes the tour
        throw solver_negative(errc::not_hamiltonian, "trace never closed the tour");
    TspSolution out;
    out.tour.push_back(1);
    for (auto it = ends.rbegin(); it != ends.rend(); ++it) out.tour.push_back(*it);
    int32_t prev = 1;
    for (std::size_t k = 1; k < out.tour.size(); ++k) {
        out.cost += enc.graph.costs[prev - 1][out.tour[k] - 1];
        prev = out.tour[k];
    }
    out.cost += enc.graph.costs[prev - 1][0];
    return out;
}

TspSolution brute_force_tsp(const TspGraph& g) {
    check_graph(g);
    if (g.n > 10)
        throw input_error(errc::too_large, "factorial search capped at 10 vertices");
    std::vector<int32_t> rest(static_cast<std::size_t>(g.n) - 1);
    std::iota(rest.begin(), rest.end(), 2);
    TspSolution best;
    best.cost = -1;
    do {
        int64_t c = g.costs[0][rest.front() - 1];
        for (std::size_t k = 0; k + 1 < rest.size(); ++k)
            c += g.costs[rest[k] - 1][rest[k + 1] - 1];
        c += g.costs[rest.back() - 1][0];
        if (best.cost < 0 || c < best.cost) {
            best.cost = c;
            best.tour.assign(1, 1);
            best.tour.insert(best.tour.end(), rest.begin(), rest.end());
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

int32_t MscEncoding::state_of(int32_t t, uint32_t uncovered) const {
    return t * (1 << input.universe_size) + static_cast<int32_t>(uncovered);
}
int32_t MscEncoding::step_of(int32_t state) const {
    return state / (1 << input.universe_size);
}
uint32_t MscEncoding::uncovered_of(int32_t state) const {
    return static_cast<uint32_t>(state) % (1u << input.universe_size);
}
int32_t MscEncoding::terminus() const {
    return (static_cast<int32_t>(input.sets.size()) + 1) << input.universe_size;
}

MscEncoding encode_msc(const MscInstance& in) {
    if (in.universe_size < 1)
        throw input_error(errc::bad_parameter, "universe must be non-empty");
    if (in.universe_size > 14)
        throw input_error(errc::too_large, "bitmask encoding capped at 14 elements");
    if (in.sets.empty())
        throw input_error(errc::bad_parameter, "family must hold at least one set");
    if (in.sets.size() > 20)
        throw input_error(errc::too_large, "encoding capped at 20 sets");
    const int32_t m = static_cast<int32_t>(in.sets.size());
    const int32_t width = 1 << in.universe_size;
    std::vector<uint32_t> set_mask(static_cast<std::size_t>(m), 0);
    for (int32_t k = 0; k < m; ++k)
        for (int32_t e : in.sets[k]) {
            if (e < 1 || e > in.universe_size)
                throw input_error(errc::bad_parameter, "set element outside the universe");
            set_mask[k] |= 1u << (e - 1);
        }

    MscEncoding enc;
    enc.input = in;

    InstanceData raw;
    raw.num_states = (m + 1) * width + 1; // steps 0..m plus the terminus
    raw.num_actions = 2;
    raw.horizon = m + 1;
    raw.time_dependent = false;
    raw.layered = true;
    raw.layer_of.resize(raw.num_states);
    raw.transitions.resize(static_cast<std::size_t>(raw.num_states) * 2);
    raw.initial_state = static_cast<int32_t>((1u << in.universe_size) - 1);

    const int32_t terminus = (m + 1) * width;
    for (int32_t t = 0; t <= m; ++t) {
        for (int32_t u = 0; u < width; ++u) {
            int32_t s = t * width + u;
            raw.layer_of[s] = t;
            std::size_t base = static_cast<std::size_t>(s) * 2;
            if (t < m) {
                uint32_t kept = static_cast<uint32_t>(u);
                uint32_t cleared = kept & ~set_mask[t];
                raw.transitions[base + 0] = {(t + 1) * width + static_cast<int32_t>(kept), 1};
                raw.transitions[base + 1] = {(t + 1) * width + static_cast<int32_t>(cleared), 0};
            } else {
                int64_t pay = (u == 0) ? m + 1 : 0;
                raw.transitions[base + 0] = {terminus, pay};
                raw.transitions[base + 1] = {terminus, pay};
            }
        }
    }
    raw.layer_of[terminus] = m + 1;
    raw.transitions[static_cast<std::size_t>(terminus) * 2 + 0] = {terminus, 0};
    raw.transitions[static_cast<std::size_t>(terminus) * 2 + 1] = {terminus, 0};

    enc.instance = validate_instance(raw);
    return enc;
}

MscSolution decode_msc(const MscEncoding& enc, const PolicyTrace& trace) {
    const int32_t m = static_cast<int32_t>(enc.input.sets.size());
    if (static_cast<int32_t>(trace.steps.size()) != m + 1)
        throw input_error(errc::dimension_mismatch, "trace must cover the whole horizon");
    MscSolution out;
    for (int32_t t = 0; t < m; ++t)
        if (trace.steps[t].action == 1) out.chosen.push_back(t);
    out.size = static_cast<int32_t>(out.chosen.size());
    out.covered = enc.uncovered_of(trace.steps[m].state) == 0;
    if (!out.covered) { out.chosen.clear(); out.size = 0; }
    return out;
}

MscSolution brute_force_msc(const MscInstance& in) {
    if (in.universe_size < 1 || in.sets.empty())
        throw input_error(errc::bad_parameter, "universe and family must be non-empty");
    const int32_t m = static_cast<int32_t>(in.sets.size());
    if (m > 20)
        throw input_error(errc::too_large, "subset search capped at 20 sets");
    std::vector<uint32_t> set_mask(static_cast<std::size_t>(m), 0);
    for (int32_t k = 0; k < m; ++k)
        for (int32_t e : in.sets[k]) {
            if (e < 1 || e > in.universe_size)
                throw input_error(errc::bad_parameter, "set element outside the universe");
            set_mask[k] |= 1u << (e - 1);
        }
    const uint32_t full = (1u << in.universe_size) - 1;
    MscSolution best;
    for (uint32_t pick = 0; pick < (1u << m); ++pick) {
        uint32_t got = 0;
        for (int32_t k = 0; k < m; ++k)
            if (pick & (1u << k)) got |= set_mask[k];
        if (got != full) continue;
        int32_t size = std::popcount(pick);
        if (!best.covered || size < best.size) {
            best.covered = true;
            best.size = size;
            best.chosen.clear();
            for (int32_t k = 0; k < m; ++k)
                if (pick & (1u << k)) best.chosen.push_back(k);
        }
    }
    return best;
}

} // namespace mwdp
