#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "gcnn/graph.hpp"

namespace gcnn {

/// Connected induced patterns on 3, 4 and 5 nodes. Five-node classes other
/// than the path share the OtherFive bucket.
enum class Pattern : std::uint8_t {
    Triangle,
    OpenTriangle,
    FourPath,
    ThreeStar,
    FourCycle,
    TailedTriangle,
    Diamond,
    FourClique,
    FivePath,
    OtherFive,
};

inline constexpr std::size_t kPatternCount = 10;

inline constexpr std::array<Pattern, kPatternCount> kAllPatterns = {
    Pattern::Triangle,       Pattern::OpenTriangle, Pattern::FourPath,   Pattern::ThreeStar, Pattern::FourCycle,
    Pattern::TailedTriangle, Pattern::Diamond,      Pattern::FourClique, Pattern::FivePath,  Pattern::OtherFive,
};

std::string_view pattern_name(Pattern p);

/// Accepts the names returned by pattern_name. Throws UnknownPattern.
Pattern parse_pattern(std::string_view name);

/// Node count k of the pattern.
int pattern_size(Pattern p);

/// Edge count q. Throws UnknownPattern for OtherFive, which mixes classes.
int pattern_edge_count(Pattern p);

/// All patterns with k nodes, in enum order.
std::span<const Pattern> patterns_of_size(int k);

/// A labelled representative of the pattern. Throws UnknownPattern for OtherFive.
Graph pattern_graph(Pattern p);

/// Bit b of a k-node code is the adjacency of the b-th pair in the order
/// (0,1),(0,2),...,(0,k-1),(1,2),...,(k-2,k-1).
std::uint32_t adjacency_code(std::span<const std::uint8_t> adj, int k);

/// Minimum code over all k! relabelings.
std::uint32_t canonical_code(std::uint32_t code, int k);

/// Table-driven classification of a k-node code (3 <= k <= 5). Returns -1 for
/// a disconnected code, otherwise the Pattern value.
int classify_code(std::uint32_t code, int k);

/// Classification of a k×k symmetric zero-diagonal matrix through the
/// canonical code. Throws Disconnected, or UnknownPattern for k outside [3,5].
Pattern classify(std::span<const std::uint8_t> adj, int k);

/// k <= 4 route keyed on (edge count, sorted degree sequence) only.
Pattern classify_by_degrees(std::span<const std::uint8_t> adj, int k);

}  // namespace gcnn
