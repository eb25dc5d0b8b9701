#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rsg {

// A player subset encoded as a bitmask: bit n set <=> player n is a member.
// Patterns and bids are dense vectors of length 1 << n_players indexed by mask.
using SubsetId = std::uint32_t;

// Hard cap on the player count; 2^N vectors explode beyond this.
inline constexpr int kMaxPlayers = 10;

inline bool contains(SubsetId s, int player) {
    return (s >> player) & 1u;
}

inline int subset_size(SubsetId s) {
    return std::popcount(s);
}

inline SubsetId full_set(int n_players) {
    return (SubsetId{1} << n_players) - 1u;
}

inline std::size_t pattern_length(int n_players) {
    return std::size_t{1} << n_players;
}

inline void check_player_count(int n_players) {
    if (n_players < 2 || n_players > kMaxPlayers)
        throw std::invalid_argument("player count must be in [2, " +
                                    std::to_string(kMaxPlayers) + "], got " +
                                    std::to_string(n_players));
}

/// All 2^{N-1} subsets containing `player`, in increasing mask order.
inline std::vector<SubsetId> subsets_containing(int player, int n_players) {
    check_player_count(n_players);
    if (player < 0 || player >= n_players)
        throw std::invalid_argument("player index out of range");
    std::vector<SubsetId> out;
    out.reserve(pattern_length(n_players) / 2);
    for (SubsetId s = 0; s <= full_set(n_players); ++s)
        if (contains(s, player)) out.push_back(s);
    return out;
}

/// Multi-player subsets (|S| >= 2), increasing mask order.
inline std::vector<SubsetId> multiplayer_subsets(int n_players) {
    check_player_count(n_players);
    std::vector<SubsetId> out;
    for (SubsetId s = 0; s <= full_set(n_players); ++s)
        if (subset_size(s) >= 2) out.push_back(s);
    return out;
}

} // namespace rsg
