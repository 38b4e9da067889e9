#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tpsqli {

// The six SQL injection technique families.
enum class Technique {
    BooleanBlind,
    ErrorBased,
    UnionBased,
    StackBased,
    TimeBlind,
    InlineQuery,
};

inline constexpr std::size_t kTechniqueCount = 6;

// Fixed default order "BEUSTQ". Used as the cold-start baseline order and as
// the deterministic tie-break whenever two techniques carry equal scores.
inline constexpr std::array<Technique, kTechniqueCount> kDefaultOrder = {
    Technique::BooleanBlind, Technique::ErrorBased, Technique::UnionBased,
    Technique::StackBased,   Technique::TimeBlind,  Technique::InlineQuery,
};

constexpr std::size_t technique_index(Technique t) { return static_cast<std::size_t>(t); }

char technique_letter(Technique t);
std::string_view technique_name(Technique t);
std::string_view technique_description(Technique t);

// Accepts one of B, E, U, S, T, Q (case-sensitive); throws ValidationError otherwise.
Technique technique_from_letter(char letter);

// "BEUSTQ"-style string for an ordered technique list.
std::string order_letters(std::span<const Technique> order);

// Inverse of order_letters; throws ValidationError on unknown letters.
std::vector<Technique> order_from_letters(std::string_view letters);

}  // namespace tpsqli
