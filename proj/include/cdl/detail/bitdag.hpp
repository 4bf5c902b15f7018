#pragma once

// Bitmask DAG used by the enumeration kernels. Node i owns bit (1 << i).

#include <array>
#include <bit>
#include <cstdint>

namespace cdl::detail {

inline constexpr int kMaxBitNodes = 16;
using Mask = std::uint32_t;

struct BitDag {
    int n = 0;
    std::array<Mask, kMaxBitNodes> parents{};
    std::array<Mask, kMaxBitNodes> children{};

    void add_edge(int from, int to) {
        parents[to] |= Mask{1} << from;
        children[from] |= Mask{1} << to;
    }
};

[[nodiscard]] inline bool bit_is_acyclic(const BitDag& g) {
    Mask remaining = (g.n >= 32) ? ~Mask{0} : ((Mask{1} << g.n) - 1);
    while (remaining != 0) {
        Mask sources = 0;
        for (Mask m = remaining; m != 0; m &= m - 1) {
            const int v = std::countr_zero(m);
            if ((g.parents[v] & remaining) == 0) sources |= Mask{1} << v;
        }
        if (sources == 0) return false;
        remaining &= ~sources;
    }
    return true;
}

/// Reachability-based d-separation (the "reachable" procedure over
/// (node, direction) states): y is d-connected to x given z iff y is reached.
[[nodiscard]] inline bool bit_d_separated(const BitDag& g, int x, int y, Mask z) {
    // Ancestors of z (including z) decide whether a collider is open.
    Mask anc = z;
    Mask frontier = z;
    while (frontier != 0) {
        Mask next = 0;
        for (Mask m = frontier; m != 0; m &= m - 1) next |= g.parents[std::countr_zero(m)];
        next &= ~anc;
        anc |= next;
        frontier = next;
    }

    // Direction 0: arrived from a child (travelling up); 1: arrived from a parent.
    Mask visited_up = 0;
    Mask visited_down = 0;
    Mask stack_up = Mask{1} << x;
    Mask stack_down = 0;
    while ((stack_up | stack_down) != 0) {
        if (stack_up != 0) {
            const int v = std::countr_zero(stack_up);
            const Mask bit = Mask{1} << v;
            stack_up &= ~bit;
            if (visited_up & bit) continue;
            visited_up |= bit;
            if (v == y) return false;
            if ((z & bit) == 0) {
                stack_up |= g.parents[v] & ~visited_up;
                stack_down |= g.children[v] & ~visited_down;
            }
        } else {
            const int v = std::countr_zero(stack_down);
            const Mask bit = Mask{1} << v;
            stack_down &= ~bit;
            if (visited_down & bit) continue;
            visited_down |= bit;
            if (v == y) return false;
            if ((z & bit) == 0) stack_down |= g.children[v] & ~visited_down;
            if (anc & bit) stack_up |= g.parents[v] & ~visited_up;
        }
    }
    return true;
}

}  // namespace cdl::detail
