#include "relgraph/scoring.hpp"

#include "relgraph/error.hpp"

#include <cstdio>

namespace relgraph {

namespace {

/// Sum of halves(p_i) * i over lo..hi; the vector must cover exactly lo..hi.
std::int64_t weighted_halves(const GradeVector& g, int lo, int hi, std::string_view what) {
    std::int64_t sum = 0;
    for (int i = lo; i <= hi; ++i) {
        const auto it = g.find(i);
        if (it == g.end()) {
            throw IncompleteGradeVector(std::string(what) + " grade vector lacks index " + std::to_string(i));
        }
        sum += static_cast<std::int64_t>(halves(it->second)) * i;
    }
    if (g.size() != static_cast<std::size_t>(hi - lo + 1)) {
        throw IncompleteGradeVector(std::string(what) + " grade vector has indices outside " + std::to_string(lo) +
                                    ".." + std::to_string(hi));
    }
    return sum;
}

} // namespace

int halves(Credit c) { return static_cast<int>(c); }

std::string credit_text(Credit c) {
    switch (c) {
    case Credit::None: return "0";
    case Credit::Half: return "0.5";
    case Credit::Full: return "1";
    }
    return "0";
}

std::optional<Credit> parse_credit(std::string_view s) {
    if (s == "0") return Credit::None;
    if (s == "0.5") return Credit::Half;
    if (s == "1") return Credit::Full;
    return std::nullopt;
}

std::string Score::text() const {
    // round(10000 * num / den) half up, in hundredths of a percent
    const std::int64_t hundredths = (20000 * num + den) / (2 * den);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                  static_cast<long long>(hundredths % 100));
    return buf;
}

Score reasoning_score(const GradeVector& g) {
    // sum p_i * i / sum i with p in halves: denominator 2 * (2+3+4+5)
    return Score{weighted_halves(g, 2, 5, "reasoning"), 28};
}

Score memory_score(const GradeVector& g1, const GradeVector& g2) {
    // (1/4) s1/15 + (3/4) s2/15 = (s1 + 3 s2) / 60, in halves / 120
    const auto s1 = weighted_halves(g1, 1, 5, "memory distance-1");
    const auto s2 = weighted_halves(g2, 1, 5, "memory distance-2");
    return Score{s1 + 3 * s2, 120};
}

} // namespace relgraph
