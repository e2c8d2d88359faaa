#include "sgb/query.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace sgb {

std::string formatDouble(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

enum class TokenKind { Word, Number, String, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;   // uppercased for words, raw otherwise
    std::string raw;    // original spelling
    double number = 0.0;
    int line = 1;
    int column = 1;
};

bool isWordStart(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool isWordChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> tokens;
        while (true) {
            skipSpace();
            Token t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= text_.size()) {
                tokens.push_back(t);
                return tokens;
            }
            const char c = text_[pos_];
            if (isWordStart(c)) {
                std::string word;
                while (pos_ < text_.size() && isWordChar(text_[pos_])) {
                    word.push_back(text_[pos_]);
                    advance();
                }
                t.kind = TokenKind::Word;
                t.raw = word;
                t.text = upper(word);
            } else if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' ||
                       ((c == '-' || c == '+') && pos_ + 1 < text_.size() &&
                        (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) != 0 ||
                         text_[pos_ + 1] == '.'))) {
                std::string num;
                num.push_back(c);
                advance();
                while (pos_ < text_.size() &&
                       (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 ||
                        text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                        ((text_[pos_] == '-' || text_[pos_] == '+') &&
                         (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
                    num.push_back(text_[pos_]);
                    advance();
                }
                char* end = nullptr;
                t.number = std::strtod(num.c_str(), &end);
                if (end != num.c_str() + num.size()) {
                    throw ParseError(t.line, t.column, "malformed number '" + num + "'");
                }
                t.kind = TokenKind::Number;
                t.raw = t.text = num;
            } else if (c == '\'') {
                advance();
                std::string s;
                bool closed = false;
                while (pos_ < text_.size()) {
                    if (text_[pos_] == '\'') {
                        advance();
                        closed = true;
                        break;
                    }
                    s.push_back(text_[pos_]);
                    advance();
                }
                if (!closed) {
                    throw ParseError(t.line, t.column, "unterminated string literal");
                }
                t.kind = TokenKind::String;
                t.raw = t.text = s;
            } else {
                std::string p(1, c);
                advance();
                // two-char comparison operators
                if ((p == "<" || p == ">" || p == "!") && pos_ < text_.size() &&
                    text_[pos_] == '=') {
                    p.push_back('=');
                    advance();
                }
                t.kind = TokenKind::Punct;
                t.raw = t.text = p;
            }
            tokens.push_back(std::move(t));
        }
    }

private:
    void skipSpace() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            advance();
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

    QueryPlan run() {
        QueryPlan plan;
        expectWord("SELECT");
        plan.projections.push_back(parseAggregate());
        while (acceptPunct(",")) {
            plan.projections.push_back(parseAggregate());
        }
        expectWord("FROM");
        plan.source = expectIdentifier("relation name");
        if (acceptWord("WHERE")) {
            plan.filters.push_back(parsePredicate());
            while (peekIsWord("AND") && peekAheadIsPredicate()) {
                expectWord("AND");
                plan.filters.push_back(parsePredicate());
            }
        }
        expectWord("GROUP");
        expectWord("BY");
        plan.groupColX = expectIdentifier("grouping column");
        if (!acceptPunct(",") && !acceptWord("AND")) {
            fail("expected ',' or AND between the two grouping columns");
        }
        plan.groupColY = expectIdentifier("grouping column");
        parseDistanceClause(plan);
        if (peek().kind != TokenKind::End) {
            fail("unexpected trailing input");
        }
        validate(plan);
        return plan;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        std::string got = t.kind == TokenKind::End ? "end of input" : "'" + t.raw + "'";
        throw ParseError(t.line, t.column, message + " (got " + got + ")");
    }

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    const Token& next() {
        const Token& t = peek();
        if (t.kind != TokenKind::End) {
            ++pos_;
        }
        return t;
    }

    bool peekIsWord(std::string_view word, std::size_t ahead = 0) const {
        return peek(ahead).kind == TokenKind::Word && peek(ahead).text == word;
    }

    bool acceptWord(std::string_view word) {
        if (peekIsWord(word)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expectWord(std::string_view word) {
        if (!acceptWord(word)) {
            fail("expected " + std::string(word));
        }
    }

    bool acceptPunct(std::string_view p) {
        if (peek().kind == TokenKind::Punct && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expectPunct(std::string_view p) {
        if (!acceptPunct(p)) {
            fail("expected '" + std::string(p) + "'");
        }
    }

    std::string expectIdentifier(const std::string& what) {
        if (peek().kind != TokenKind::Word) {
            fail("expected " + what);
        }
        return next().raw;
    }

    // WHERE lookahead: AND followed by "ident cmp literal" continues the
    // conjunction; otherwise the AND belongs to GROUP BY's column separator.
    bool peekAheadIsPredicate() const {
        if (peek(1).kind != TokenKind::Word) {
            return false;
        }
        const Token& op = peek(2);
        return op.kind == TokenKind::Punct &&
               (op.text == "=" || op.text == "!=" || op.text == "<" || op.text == "<=" ||
                op.text == ">" || op.text == ">=");
    }

    AggregateSpec parseAggregate() {
        const Token& fnTok = peek();
        if (fnTok.kind != TokenKind::Word || peek(1).kind != TokenKind::Punct ||
            peek(1).text != "(") {
            fail("expected an aggregate call");
        }
        std::string fnName = upper(expectIdentifier("aggregate function"));
        AggregateSpec spec;
        if (fnName == "COUNT") {
            spec.fn = AggregateFn::Count;
        } else if (fnName == "SUM") {
            spec.fn = AggregateFn::Sum;
        } else if (fnName == "AVG" || fnName == "AVERAGE") {
            spec.fn = AggregateFn::Avg;
        } else if (fnName == "MIN") {
            spec.fn = AggregateFn::Min;
        } else if (fnName == "MAX") {
            spec.fn = AggregateFn::Max;
        } else if (fnName == "COLLECT" || fnName == "LIST-ID" || fnName == "LIST_ID" ||
                   fnName == "ARRAY_AGG") {
            spec.fn = AggregateFn::Collect;
        } else if (fnName == "HULL_POLYGON" || fnName == "ST_POLYGON") {
            spec.fn = AggregateFn::HullPolygon;
        } else {
            throw SemanticError("unknown aggregate function '" + fnTok.raw + "' at " +
                                std::to_string(fnTok.line) + ":" + std::to_string(fnTok.column));
        }
        expectPunct("(");
        if (!acceptPunct(")")) {
            if (acceptPunct("*")) {
                spec.args.push_back("*");
            } else {
                spec.args.push_back(expectIdentifier("aggregate argument"));
                while (acceptPunct(",")) {
                    spec.args.push_back(expectIdentifier("aggregate argument"));
                }
            }
            expectPunct(")");
        }
        return spec;
    }

    FilterPredicate parsePredicate() {
        FilterPredicate pred;
        pred.column = expectIdentifier("filter column");
        if (peek().kind != TokenKind::Punct) {
            fail("expected comparison operator");
        }
        const std::string op = next().text;
        if (op == "=") {
            pred.op = CompareOp::Eq;
        } else if (op == "!=") {
            pred.op = CompareOp::Ne;
        } else if (op == "<") {
            pred.op = CompareOp::Lt;
        } else if (op == "<=") {
            pred.op = CompareOp::Le;
        } else if (op == ">") {
            pred.op = CompareOp::Gt;
        } else if (op == ">=") {
            pred.op = CompareOp::Ge;
        } else {
            fail("expected comparison operator");
        }
        const Token& lit = peek();
        if (lit.kind == TokenKind::Number) {
            pred.numericLiteral = true;
            pred.number = next().number;
        } else if (lit.kind == TokenKind::String) {
            pred.numericLiteral = false;
            pred.text = next().raw;
        } else {
            fail("expected a number or a quoted string literal");
        }
        return pred;
    }

    bool acceptMetric(Metric& out) {
        if (peekIsWord("L2") || peekIsWord("LTWO")) {
            ++pos_;
            out = Metric::L2;
            return true;
        }
        if (peekIsWord("LINF") || peekIsWord("LONE")) {
            ++pos_;
            out = Metric::LInf;
            return true;
        }
        return false;
    }

    void parseDistanceClause(QueryPlan& plan) {
        const Token& kw = peek();
        if (acceptWord("DISTANCE-TO-ALL") || acceptWord("DISTANCE-ALL")) {
            plan.mode = GroupMode::All;
        } else if (acceptWord("DISTANCE-TO-ANY") || acceptWord("DISTANCE-ANY")) {
            plan.mode = GroupMode::Any;
        } else {
            fail("expected DISTANCE-TO-ALL or DISTANCE-TO-ANY");
        }

        Metric metric = Metric::L2;
        bool haveMetric = acceptMetric(metric);
        expectWord("WITHIN");
        if (peek().kind == TokenKind::Number) {
            plan.epsValue = next().number;
        } else if (peek().kind == TokenKind::Word && !peekIsWord("USING")) {
            plan.epsParam = next().raw;
        } else {
            fail("expected a threshold value or parameter name after WITHIN");
        }
        if (acceptWord("USING")) {
            Metric usingMetric = Metric::L2;
            if (!acceptMetric(usingMetric)) {
                fail("expected a metric after USING");
            }
            if (haveMetric) {
                throw SemanticError("metric specified twice at " + std::to_string(kw.line) + ":" +
                                    std::to_string(kw.column));
            }
            metric = usingMetric;
            haveMetric = true;
        }
        if (!haveMetric) {
            throw SemanticError("missing distance metric (inline or USING) at " +
                                std::to_string(kw.line) + ":" + std::to_string(kw.column));
        }
        plan.metric = metric;

        const bool haveOverlap = peekIsWord("ON-OVERLAP") || peekIsWord("ON_OVERLAP");
        if (plan.mode == GroupMode::Any) {
            if (haveOverlap) {
                throw SemanticError("ON-OVERLAP does not apply to DISTANCE-TO-ANY at " +
                                    std::to_string(peek().line) + ":" +
                                    std::to_string(peek().column));
            }
            return;
        }
        if (!haveOverlap) {
            fail("expected ON-OVERLAP");
        }
        ++pos_;
        if (acceptWord("JOIN-ANY")) {
            plan.policy = OverlapPolicy::JoinAny;
        } else if (acceptWord("ELIMINATE")) {
            plan.policy = OverlapPolicy::Eliminate;
        } else if (acceptWord("FORM-NEW-GROUP") || acceptWord("FORM-NEW")) {
            plan.policy = OverlapPolicy::FormNewGroup;
        } else {
            fail("expected JOIN-ANY, ELIMINATE or FORM-NEW-GROUP");
        }
    }

    void validate(const QueryPlan& plan) const {
        if (plan.epsValue.has_value() && !(*plan.epsValue > 0.0)) {
            throw SemanticError("similarity threshold must be positive, got " +
                                formatDouble(*plan.epsValue));
        }
        for (const auto& agg : plan.projections) {
            const bool star =
                std::find(agg.args.begin(), agg.args.end(), "*") != agg.args.end();
            if (star && agg.fn != AggregateFn::Count) {
                throw SemanticError("'*' is only valid in count(*)");
            }
            switch (agg.fn) {
                case AggregateFn::Count:
                case AggregateFn::Sum:
                case AggregateFn::Avg:
                case AggregateFn::Min:
                case AggregateFn::Max:
                case AggregateFn::Collect:
                    if (agg.args.size() != 1) {
                        throw SemanticError("aggregate takes exactly one argument");
                    }
                    break;
                case AggregateFn::HullPolygon:
                    if (!agg.args.empty() &&
                        (agg.args.size() != 2 || agg.args[0] != plan.groupColX ||
                         agg.args[1] != plan.groupColY)) {
                        throw SemanticError("hull polygon takes the two grouping columns");
                    }
                    break;
            }
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string policyName(OverlapPolicy policy) {
    switch (policy) {
        case OverlapPolicy::JoinAny:
            return "JOIN-ANY";
        case OverlapPolicy::Eliminate:
            return "ELIMINATE";
        case OverlapPolicy::FormNewGroup:
            return "FORM-NEW-GROUP";
    }
    return "?";
}

std::string aggName(AggregateFn fn) {
    switch (fn) {
        case AggregateFn::Count:
            return "count";
        case AggregateFn::Sum:
            return "sum";
        case AggregateFn::Avg:
            return "avg";
        case AggregateFn::Min:
            return "min";
        case AggregateFn::Max:
            return "max";
        case AggregateFn::Collect:
            return "collect";
        case AggregateFn::HullPolygon:
            return "hull_polygon";
    }
    return "?";
}

std::string compareOpText(CompareOp op) {
    switch (op) {
        case CompareOp::Eq:
            return "=";
        case CompareOp::Ne:
            return "!=";
        case CompareOp::Lt:
            return "<";
        case CompareOp::Le:
            return "<=";
        case CompareOp::Gt:
            return ">";
        case CompareOp::Ge:
            return ">=";
    }
    return "?";
}

}  // namespace

QueryPlan parseQuery(std::string_view text) {
    return Parser(text).run();
}

std::string renderPlan(const QueryPlan& plan) {
    std::string out = "SELECT ";
    for (std::size_t i = 0; i < plan.projections.size(); ++i) {
        const auto& agg = plan.projections[i];
        if (i > 0) {
            out += ", ";
        }
        out += aggName(agg.fn) + "(";
        for (std::size_t a = 0; a < agg.args.size(); ++a) {
            if (a > 0) {
                out += ", ";
            }
            out += agg.args[a];
        }
        out += ")";
    }
    out += " FROM " + plan.source;
    for (std::size_t i = 0; i < plan.filters.size(); ++i) {
        const auto& f = plan.filters[i];
        out += i == 0 ? " WHERE " : " AND ";
        out += f.column + " " + compareOpText(f.op) + " ";
        out += f.numericLiteral ? formatDouble(f.number) : "'" + f.text + "'";
    }
    out += " GROUP BY " + plan.groupColX + ", " + plan.groupColY;
    out += plan.mode == GroupMode::All ? " DISTANCE-TO-ALL" : " DISTANCE-TO-ANY";
    out += plan.metric == Metric::L2 ? " L2" : " LINF";
    out += " WITHIN ";
    out += plan.epsValue.has_value() ? formatDouble(*plan.epsValue) : plan.epsParam;
    if (plan.mode == GroupMode::All) {
        out += " ON-OVERLAP " + policyName(plan.policy);
    }
    return out;
}

}  // namespace sgb
