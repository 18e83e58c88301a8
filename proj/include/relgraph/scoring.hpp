#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace relgraph {

/// Partial credit on the three-point scale 0, 0.5, 1, stored in halves.
enum class Credit : std::uint8_t { None = 0, Half = 1, Full = 2 };

int halves(Credit c);
std::string credit_text(Credit c); // "0", "0.5", "1"
std::optional<Credit> parse_credit(std::string_view s);

/// Index (distance or step) -> credit.
using GradeVector = std::map<int, Credit>;

/// Exact fraction in [0, 1]; rendered as a percentage.
struct Score {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double percent() const { return 100.0 * static_cast<double>(num) / static_cast<double>(den); }
    /// Percentage with two decimals, rounded half up: "7.14", "100.00".
    std::string text() const;

    friend bool operator==(const Score& a, const Score& b) { return a.num * b.den == b.num * a.den; }
};

/// Distance-weighted mean over indices 2..5. Throws IncompleteGradeVector.
Score reasoning_score(const GradeVector& g);

/// Step-weighted means over steps 1..5, distance-1 tasks weighted 1/4 and
/// distance-2 tasks 3/4. Throws IncompleteGradeVector.
Score memory_score(const GradeVector& g1, const GradeVector& g2);

} // namespace relgraph
