#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgb/sgb_all.hpp"
#include "sgb/types.hpp"

namespace sgb {

// Malformed query text; position is 1-based.
struct ParseError : std::runtime_error {
    int line;
    int column;

    ParseError(int l, int c, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + message),
          line(l),
          column(c) {}
};

// Well-formed query that cannot be executed as written (unknown column,
// non-positive threshold, overlap clause on distance-to-any, ...).
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class AggregateFn { Count, Sum, Avg, Min, Max, Collect, HullPolygon };

struct AggregateSpec {
    AggregateFn fn = AggregateFn::Count;
    std::vector<std::string> args;  // "*" for count(*), columns otherwise

    friend bool operator==(const AggregateSpec&, const AggregateSpec&) = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct FilterPredicate {
    std::string column;
    CompareOp op = CompareOp::Eq;
    bool numericLiteral = false;
    double number = 0.0;
    std::string text;

    friend bool operator==(const FilterPredicate&, const FilterPredicate&) = default;
};

struct QueryPlan {
    std::string source;
    std::vector<AggregateSpec> projections;
    std::vector<FilterPredicate> filters;  // conjunction
    std::string groupColX;
    std::string groupColY;
    GroupMode mode = GroupMode::All;
    Metric metric = Metric::L2;
    std::optional<double> epsValue;  // literal threshold ...
    std::string epsParam;            // ... or a named parameter, exactly one set
    OverlapPolicy policy = OverlapPolicy::JoinAny;  // All mode only

    friend bool operator==(const QueryPlan&, const QueryPlan&) = default;
};

// Parses one grouping query. Accepted grammar (keywords case-insensitive;
// identifiers may contain '-' and '_'):
//
//   query      := SELECT aggList FROM ident [WHERE pred (AND pred)*]
//                 GROUP BY col (','|AND) col distClause
//   distClause := allKw [metric] WITHIN eps [USING metric] overlap
//               | anyKw [metric] WITHIN eps [USING metric]
//   allKw      := DISTANCE-TO-ALL | DISTANCE-ALL
//   anyKw      := DISTANCE-TO-ANY | DISTANCE-ANY
//   overlap    := (ON-OVERLAP | ON_OVERLAP) policy
//   policy     := JOIN-ANY | ELIMINATE | FORM-NEW-GROUP | FORM-NEW
//   metric     := L2 | LINF | LTWO | LONE    (lone/ltwo are legacy synonyms)
//   eps        := number | ident             (ident: bound at execution)
//
// The metric must be given exactly once, inline or via USING.
QueryPlan parseQuery(std::string_view text);

// Canonical text for a plan; parses back to an equal plan.
std::string renderPlan(const QueryPlan& plan);

// Shortest round-trip decimal form, shared by every emitter.
std::string formatDouble(double value);

}  // namespace sgb
