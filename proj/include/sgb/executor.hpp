#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sgb/query.hpp"
#include "sgb/relation.hpp"
#include "sgb/sgb_any.hpp"

namespace sgb {

// One output row per group, ordered by group id. Column order is fixed:
// group_id, group_size, then the projected aggregates.
struct ResultSet {
    using Value = std::variant<std::int64_t, double, std::string>;

    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    std::size_t eliminatedCount = 0;

    friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

struct ExecOptions {
    Strategy allStrategy = Strategy::Indexed;
    SgbAnyConfig::Strategy anyStrategy = SgbAnyConfig::Strategy::Indexed;
    std::optional<std::uint64_t> joinAnySeed;
    std::map<std::string, double> params;  // WITHIN parameter bindings
};

// Filters, projects the grouping columns to points, runs the configured
// engine and evaluates the aggregates. Throws SemanticError for plans that do
// not fit the relation (unknown columns, text grouping columns, unbound
// threshold parameters, ...).
ResultSet execute(const QueryPlan& plan, const Relation& relation, const ExecOptions& options = {});

enum class OutputFormat { Csv, Json };

std::string renderResult(const ResultSet& result, OutputFormat format);

std::string formatValue(const ResultSet::Value& value);

}  // namespace sgb
