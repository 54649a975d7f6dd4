#pragma once

#include <string>
#include <vector>

#include "eifsim/taxonomy.hpp"

namespace eifsim {

// PDDL-style goal predicates over categories. A predicate holds when some
// instance of the category satisfies it (per-conjunct existential binding,
// which is also what partial-credit GC counting needs).
enum class PredicateKind : std::uint8_t {
    Sliced,
    Open,
    Closed,
    On,
    Off,
    In,      // in(a, b): instance of a contained in / resting on instance of b
    Held,
    Heated,
};

struct Predicate {
    PredicateKind kind;
    CategoryId a = -1;
    CategoryId b = -1;  // only for In

    std::string to_text() const;
    friend bool operator==(const Predicate&, const Predicate&) = default;
};

struct GoalCondition {
    std::vector<Predicate> conjuncts;

    bool empty() const { return conjuncts.empty(); }
    std::string to_text() const;
};

const char* to_string(PredicateKind k);
bool predicate_kind_from_string(const std::string& s, PredicateKind& out);

}  // namespace eifsim
