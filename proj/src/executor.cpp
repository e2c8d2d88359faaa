#include "sgb/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace sgb {

namespace {

const Column& requireColumn(const Relation& rel, const std::string& name) {
    const Column* col = rel.findColumn(name);
    if (col == nullptr) {
        throw SemanticError("unknown column '" + name + "' in relation '" + rel.name + "'");
    }
    return *col;
}

bool rowPasses(const FilterPredicate& pred, const Column& col, std::size_t row) {
    int cmp = 0;
    if (pred.numericLiteral) {
        if (!col.numeric()) {
            throw SemanticError("numeric comparison against text column '" + col.name + "'");
        }
        const double v = col.numberAt(row);
        cmp = v < pred.number ? -1 : (v > pred.number ? 1 : 0);
    } else {
        if (col.numeric()) {
            throw SemanticError("string comparison against numeric column '" + col.name + "'");
        }
        cmp = col.texts[row].compare(pred.text);
        cmp = cmp < 0 ? -1 : (cmp > 0 ? 1 : 0);
    }
    switch (pred.op) {
        case CompareOp::Eq:
            return cmp == 0;
        case CompareOp::Ne:
            return cmp != 0;
        case CompareOp::Lt:
            return cmp < 0;
        case CompareOp::Le:
            return cmp <= 0;
        case CompareOp::Gt:
            return cmp > 0;
        case CompareOp::Ge:
            return cmp >= 0;
    }
    return false;
}

std::string aggregateColumnName(const AggregateSpec& agg, const QueryPlan& plan) {
    std::string name;
    switch (agg.fn) {
        case AggregateFn::Count:
            name = "count";
            break;
        case AggregateFn::Sum:
            name = "sum";
            break;
        case AggregateFn::Avg:
            name = "avg";
            break;
        case AggregateFn::Min:
            name = "min";
            break;
        case AggregateFn::Max:
            name = "max";
            break;
        case AggregateFn::Collect:
            name = "collect";
            break;
        case AggregateFn::HullPolygon:
            return "hull_polygon(" + plan.groupColX + ", " + plan.groupColY + ")";
    }
    name += "(";
    for (std::size_t i = 0; i < agg.args.size(); ++i) {
        if (i > 0) {
            name += ", ";
        }
        name += agg.args[i];
    }
    name += ")";
    return name;
}

std::string renderHull(const std::vector<Point>& memberPoints) {
    const Hull hull = convexHull(memberPoints);
    std::string out;
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += formatDouble(hull.vertices[i].x) + " " + formatDouble(hull.vertices[i].y);
    }
    return out;
}

ResultSet::Value evaluateAggregate(const AggregateSpec& agg, const Relation& rel,
                                   const std::vector<RecordId>& members,
                                   const std::vector<std::size_t>& rowOf,
                                   const std::vector<Point>& memberPoints) {
    if (agg.fn == AggregateFn::Count) {
        return static_cast<std::int64_t>(members.size());
    }
    if (agg.fn == AggregateFn::HullPolygon) {
        return renderHull(memberPoints);
    }
    const Column& col = *rel.findColumn(agg.args.front());
    if (agg.fn == AggregateFn::Collect) {
        std::vector<std::string> values;
        values.reserve(members.size());
        if (col.numeric()) {
            std::vector<double> nums;
            nums.reserve(members.size());
            for (RecordId m : members) {
                nums.push_back(col.numberAt(rowOf[static_cast<std::size_t>(m)]));
            }
            std::sort(nums.begin(), nums.end());
            for (double v : nums) {
                values.push_back(formatDouble(v));
            }
        } else {
            for (RecordId m : members) {
                values.push_back(col.texts[rowOf[static_cast<std::size_t>(m)]]);
            }
            std::sort(values.begin(), values.end());
        }
        std::string joined;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) {
                joined += ";";
            }
            joined += values[i];
        }
        return joined;
    }

    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (RecordId m : members) {
        const double v = col.numberAt(rowOf[static_cast<std::size_t>(m)]);
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    switch (agg.fn) {
        case AggregateFn::Sum:
            return sum;
        case AggregateFn::Avg:
            return sum / static_cast<double>(members.size());
        case AggregateFn::Min:
            return lo;
        case AggregateFn::Max:
            return hi;
        default:
            throw std::logic_error("unreachable aggregate");
    }
}

}  // namespace

ResultSet execute(const QueryPlan& plan, const Relation& relation, const ExecOptions& options) {
    double eps = 0.0;
    if (plan.epsValue.has_value()) {
        eps = *plan.epsValue;
    } else {
        auto it = options.params.find(plan.epsParam);
        if (it == options.params.end()) {
            throw SemanticError("unbound threshold parameter '" + plan.epsParam + "'");
        }
        eps = it->second;
    }
    if (!(eps > 0.0)) {
        throw SemanticError("similarity threshold must be positive, got " + formatDouble(eps));
    }

    const Column& colX = requireColumn(relation, plan.groupColX);
    const Column& colY = requireColumn(relation, plan.groupColY);
    if (!colX.numeric() || !colY.numeric()) {
        throw SemanticError("grouping columns must be numeric");
    }
    for (const auto& pred : plan.filters) {
        requireColumn(relation, pred.column);
    }
    for (const auto& agg : plan.projections) {
        if (agg.fn == AggregateFn::HullPolygon || agg.args.front() == "*") {
            continue;
        }
        const Column& col = requireColumn(relation, agg.args.front());
        const bool needsNumber = agg.fn == AggregateFn::Sum || agg.fn == AggregateFn::Avg ||
                                 agg.fn == AggregateFn::Min || agg.fn == AggregateFn::Max;
        if (needsNumber && !col.numeric()) {
            throw SemanticError("aggregate over text column '" + col.name + "'");
        }
    }

    // Filter, then project the grouping columns. Record ids are dense over
    // the filtered rows; rowOf maps them back to relation rows.
    std::vector<InputPoint> points;
    std::vector<std::size_t> rowOf;
    points.reserve(relation.rowCount);
    rowOf.reserve(relation.rowCount);
    for (std::size_t row = 0; row < relation.rowCount; ++row) {
        bool pass = true;
        for (const auto& pred : plan.filters) {
            if (!rowPasses(pred, *relation.findColumn(pred.column), row)) {
                pass = false;
                break;
            }
        }
        if (!pass) {
            continue;
        }
        const RecordId id = static_cast<RecordId>(points.size());
        points.push_back({id, {colX.numberAt(row), colY.numberAt(row)}});
        rowOf.push_back(row);
    }

    GroupingResult grouping;
    if (plan.mode == GroupMode::All) {
        SgbAllConfig cfg;
        cfg.metric = plan.metric;
        cfg.eps = eps;
        cfg.policy = plan.policy;
        cfg.strategy = options.allStrategy;
        cfg.joinAnySeed = options.joinAnySeed;
        grouping = runSgbAll(points, cfg);
    } else {
        SgbAnyConfig cfg;
        cfg.metric = plan.metric;
        cfg.eps = eps;
        cfg.strategy = options.anyStrategy;
        grouping = runSgbAny(points, cfg);
    }

    ResultSet result;
    result.eliminatedCount = grouping.eliminated.size();
    result.columns = {"group_id", "group_size"};
    for (const auto& agg : plan.projections) {
        result.columns.push_back(aggregateColumnName(agg, plan));
    }
    for (const auto& group : grouping.groups) {
        std::vector<ResultSet::Value> row;
        row.reserve(result.columns.size());
        row.emplace_back(group.id);
        row.emplace_back(static_cast<std::int64_t>(group.members.size()));
        std::vector<Point> memberPoints;
        memberPoints.reserve(group.members.size());
        for (RecordId m : group.members) {
            memberPoints.push_back(points[static_cast<std::size_t>(m)].pos);
        }
        for (const auto& agg : plan.projections) {
            row.push_back(evaluateAggregate(agg, relation, group.members, rowOf, memberPoints));
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::string formatValue(const ResultSet::Value& value) {
    if (std::holds_alternative<std::int64_t>(value)) {
        return std::to_string(std::get<std::int64_t>(value));
    }
    if (std::holds_alternative<double>(value)) {
        return formatDouble(std::get<double>(value));
    }
    return std::get<std::string>(value);
}

namespace {

std::string csvEscape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out += "\"";
    return out;
}

}  // namespace

std::string renderResult(const ResultSet& result, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        std::string out;
        for (std::size_t i = 0; i < result.columns.size(); ++i) {
            if (i > 0) {
                out += ",";
            }
            out += csvEscape(result.columns[i]);
        }
        out += "\n";
        for (const auto& row : result.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i > 0) {
                    out += ",";
                }
                out += csvEscape(formatValue(row[i]));
            }
            out += "\n";
        }
        return out;
    }

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& v = row[i];
            if (std::holds_alternative<std::int64_t>(v)) {
                obj[result.columns[i]] = std::get<std::int64_t>(v);
            } else if (std::holds_alternative<double>(v)) {
                obj[result.columns[i]] = std::get<double>(v);
            } else {
                obj[result.columns[i]] = std::get<std::string>(v);
            }
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

}  // namespace sgb
