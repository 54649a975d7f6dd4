#include "eifsim/goal.hpp"

namespace eifsim {

const char* to_string(PredicateKind k) {
    switch (k) {
        case PredicateKind::Sliced: return "sliced";
        case PredicateKind::Open: return "open";
        case PredicateKind::Closed: return "closed";
        case PredicateKind::On: return "on";
        case PredicateKind::Off: return "off";
        case PredicateKind::In: return "in";
        case PredicateKind::Held: return "held";
        case PredicateKind::Heated: return "heated";
    }
    return "sliced";
}

bool predicate_kind_from_string(const std::string& s, PredicateKind& out) {
    if (s == "sliced") out = PredicateKind::Sliced;
    else if (s == "open") out = PredicateKind::Open;
    else if (s == "closed") out = PredicateKind::Closed;
    else if (s == "on") out = PredicateKind::On;
    else if (s == "off") out = PredicateKind::Off;
    else if (s == "in") out = PredicateKind::In;
    else if (s == "held") out = PredicateKind::Held;
    else if (s == "heated") out = PredicateKind::Heated;
    else return false;
    return true;
}

std::string Predicate::to_text() const {
    std::string t = to_string(kind);
    t += "(";
    t += category_name(a);
    if (kind == PredicateKind::In) {
        t += ", ";
        t += category_name(b);
    }
    t += ")";
    return t;
}

std::string GoalCondition::to_text() const {
    std::string t;
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
        if (i) t += " & ";
        t += conjuncts[i].to_text();
    }
    return t;
}

}  // namespace eifsim
