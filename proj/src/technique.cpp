#include "tpsqli/technique.hpp"

#include "tpsqli/errors.hpp"

namespace tpsqli {

char technique_letter(Technique t) {
    switch (t) {
        case Technique::BooleanBlind: return 'B';
        case Technique::ErrorBased: return 'E';
        case Technique::UnionBased: return 'U';
        case Technique::StackBased: return 'S';
        case Technique::TimeBlind: return 'T';
        case Technique::InlineQuery: return 'Q';
    }
    throw ValidationError("unknown technique id");
}

std::string_view technique_name(Technique t) {
    switch (t) {
        case Technique::BooleanBlind: return "Boolean-based blind";
        case Technique::ErrorBased: return "Error-based";
        case Technique::UnionBased: return "Union-based";
        case Technique::StackBased: return "Stack-based";
        case Technique::TimeBlind: return "Time-based blind";
        case Technique::InlineQuery: return "Inline queries";
    }
    throw ValidationError("unknown technique id");
}

std::string_view technique_description(Technique t) {
    switch (t) {
        case Technique::BooleanBlind:
            return "Compares responses to always-true and always-false injected "
                   "conditions and infers a flaw from the content divergence.";
        case Technique::ErrorBased:
            return "Breaks query syntax on purpose and looks for database error "
                   "text leaking into the response.";
        case Technique::UnionBased:
            return "Appends a UNION SELECT carrying a unique marker and checks "
                   "whether the marker is reflected in the page.";
        case Technique::StackBased:
            return "Terminates the original statement and appends a second one; "
                   "detected through a reflected marker or an induced delay.";
        case Technique::TimeBlind:
            return "Injects a database sleep and measures whether the response "
                   "latency grows by the requested amount.";
        case Technique::InlineQuery:
            return "Embeds a scalar subquery whose marker value becomes visible "
                   "in the response when evaluated.";
    }
    throw ValidationError("unknown technique id");
}

Technique technique_from_letter(char letter) {
    for (Technique t : kDefaultOrder) {
        if (technique_letter(t) == letter) return t;
    }
    throw ValidationError(std::string("unknown technique letter '") + letter + "'");
}

std::string order_letters(std::span<const Technique> order) {
    std::string out;
    out.reserve(order.size());
    for (Technique t : order) out.push_back(technique_letter(t));
    return out;
}

std::vector<Technique> order_from_letters(std::string_view letters) {
    std::vector<Technique> out;
    out.reserve(letters.size());
    for (char c : letters) out.push_back(technique_from_letter(c));
    return out;
}

}  // namespace tpsqli
