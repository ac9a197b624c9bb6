#include "coreforge/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace coreforge::expr {

namespace {

ast make(node n) { return std::make_shared<const node>(std::move(n)); }

}  // namespace

ast make_constant(double v) {
    node n{};
    n.kind = node_kind::constant;
    n.value = v;
    return make(std::move(n));
}

ast make_selector(std::string unit, int component, std::string type_param) {
    if (component < 1) throw error("selector component index must be at least 1");
    node n{};
    n.kind = node_kind::selector;
    n.unit = std::move(unit);
    n.component = component;
    n.type_param = std::move(type_param);
    return make(std::move(n));
}

ast make_add(std::vector<ast> terms) {
    node n{};
    n.kind = node_kind::add;
    n.args = std::move(terms);
    return make(std::move(n));
}

ast make_sub(ast lhs, ast rhs) {
    node n{};
    n.kind = node_kind::sub;
    n.args = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
}

ast make_mul(std::vector<ast> factors) {
    node n{};
    n.kind = node_kind::mul;
    n.args = std::move(factors);
    return make(std::move(n));
}

ast make_power(ast base, ast exponent) {
    node n{};
    n.kind = node_kind::power;
    n.args = {std::move(base), std::move(exponent)};
    return make(std::move(n));
}

ast make_sin_deg(ast arg) {
    node n{};
    n.kind = node_kind::sin_deg;
    n.args = {std::move(arg)};
    return make(std::move(n));
}

ast make_sum_components(std::string unit) {
    node n{};
    n.kind = node_kind::sum_components;
    n.unit = std::move(unit);
    return make(std::move(n));
}

ast make_equality_chain(std::vector<ast> operands) {
    if (operands.size() < 2) throw error("equality chain needs at least two operands");
    node n{};
    n.kind = node_kind::equality_chain;
    n.args = std::move(operands);
    return make(std::move(n));
}

ast make_conjunction(std::vector<ast> operands) {
    if (operands.size() < 2) throw error("conjunction needs at least two operands");
    node n{};
    n.kind = node_kind::conjunction;
    n.args = std::move(operands);
    return make(std::move(n));
}

ast make_comparison(ast lhs, cmp_op op, ast rhs) {
    node n{};
    n.kind = node_kind::comparison;
    n.op = op;
    n.args = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Lexer / recursive-descent parser

namespace {

enum class tok_kind { number, ident, lparen, rparen, plus, minus, star, caret, eq, lt, le, gt, ge, ne, kw_and, end };

struct token {
    tok_kind kind;
    std::string text;
    double number = 0.0;
    std::size_t offset = 0;  // 1-based byte offset of the first character
};

const char* tok_name(tok_kind k) {
    switch (k) {
        case tok_kind::number: return "number";
        case tok_kind::ident: return "identifier";
        case tok_kind::lparen: return "'('";
        case tok_kind::rparen: return "')'";
        case tok_kind::plus: return "'+'";
        case tok_kind::minus: return "'-'";
        case tok_kind::star: return "'*'";
        case tok_kind::caret: return "'^'";
        case tok_kind::eq: return "'='";
        case tok_kind::lt: return "'<'";
        case tok_kind::le: return "'<='";
        case tok_kind::gt: return "'>'";
        case tok_kind::ge: return "'>='";
        case tok_kind::ne: return "'!='";
        case tok_kind::kw_and: return "'and'";
        case tok_kind::end: return "end of input";
    }
    return "?";
}

class lexer {
public:
    explicit lexer(std::string_view text) : text_(text) {}

    std::vector<token> run() {
        std::vector<token> out;
        while (true) {
            skip_ws();
            token t = next();
            bool done = t.kind == tok_kind::end;
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw parse_error("parse error at offset " + std::to_string(pos_ + 1) + ": " + what,
                          pos_ + 1, what);
    }

    token next() {
        if (pos_ >= text_.size()) return {tok_kind::end, "", 0.0, text_.size() + 1};
        std::size_t start = pos_;
        char c = text_[pos_];
        auto tok1 = [&](tok_kind k) {
            ++pos_;
            return token{k, std::string(1, c), 0.0, start + 1};
        };
        switch (c) {
            case '(': return tok1(tok_kind::lparen);
            case ')': return tok1(tok_kind::rparen);
            case '+': return tok1(tok_kind::plus);
            case '-': return tok1(tok_kind::minus);
            case '*': return tok1(tok_kind::star);
            case '^': return tok1(tok_kind::caret);
            case '=': return tok1(tok_kind::eq);
            case '<':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                    pos_ += 2;
                    return {tok_kind::le, "<=", 0.0, start + 1};
                }
                return tok1(tok_kind::lt);
            case '>':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                    pos_ += 2;
                    return {tok_kind::ge, ">=", 0.0, start + 1};
                }
                return tok1(tok_kind::gt);
            case '!':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                    pos_ += 2;
                    return {tok_kind::ne, "!=", 0.0, start + 1};
                }
                fail("expected '=' after '!'");
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.'))
                ++end;
            if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
                std::size_t e = end + 1;
                if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
                if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
                    ++e;
                    while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
                    end = e;
                }
            }
            std::string lit(text_.substr(pos_, end - pos_));
            try {
                double v = std::stod(lit);
                pos_ = end;
                return {tok_kind::number, lit, v, start + 1};
            } catch (const std::exception&) {
                fail("malformed number literal");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string word(text_.substr(pos_, end - pos_));
            pos_ = end;
            if (word == "and") return {tok_kind::kw_and, word, 0.0, start + 1};
            return {tok_kind::ident, word, 0.0, start + 1};
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

class parser {
public:
    explicit parser(std::string_view text) : toks_(lexer(text).run()) {}

    ast run() {
        ast e = conjunction();
        expect(tok_kind::end);
        return e;
    }

private:
    const token& peek() const { return toks_[idx_]; }

    token take() { return toks_[idx_++]; }

    bool accept(tok_kind k) {
        if (peek().kind == k) {
            ++idx_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& expected) {
        const token& t = peek();
        throw parse_error("parse error at offset " + std::to_string(t.offset) + ": expected " +
                              expected + ", found " + tok_name(t.kind),
                          t.offset, expected);
    }

    void expect(tok_kind k) {
        if (!accept(k)) fail(tok_name(k));
    }

    ast conjunction() {
        ast first = equality();
        if (peek().kind != tok_kind::kw_and) return first;
        std::vector<ast> operands{first};
        while (accept(tok_kind::kw_and)) operands.push_back(equality());
        return make_conjunction(std::move(operands));
    }

    ast equality() {
        ast first = comparison();
        if (peek().kind != tok_kind::eq) return first;
        std::vector<ast> operands{first};
        while (accept(tok_kind::eq)) operands.push_back(comparison());
        return make_equality_chain(std::move(operands));
    }

    ast comparison() {
        ast lhs = sum();
        cmp_op op;
        switch (peek().kind) {
            case tok_kind::lt: op = cmp_op::lt; break;
            case tok_kind::le: op = cmp_op::le; break;
            case tok_kind::gt: op = cmp_op::gt; break;
            case tok_kind::ge: op = cmp_op::ge; break;
            case tok_kind::ne: op = cmp_op::ne; break;
            default: return lhs;
        }
        take();
        return make_comparison(std::move(lhs), op, sum());
    }

    // Left-associative; runs of '+' collapse into one n-ary add node.
    ast sum() {
        ast acc = term();
        while (true) {
            if (accept(tok_kind::plus)) {
                ast rhs = term();
                if (acc->kind == node_kind::add) {
                    std::vector<ast> terms = acc->args;
                    terms.push_back(std::move(rhs));
                    acc = make_add(std::move(terms));
                } else {
                    acc = make_add({std::move(acc), std::move(rhs)});
                }
            } else if (accept(tok_kind::minus)) {
                acc = make_sub(std::move(acc), term());
            } else {
                break;
            }
        }
        return acc;
    }

    ast term() {
        ast first = factor();
        if (peek().kind != tok_kind::star) return first;
        std::vector<ast> factors{first};
        while (accept(tok_kind::star)) factors.push_back(factor());
        return make_mul(std::move(factors));
    }

    ast factor() {
        ast base = unary();
        if (accept(tok_kind::caret)) return make_power(std::move(base), factor());
        return base;
    }

    ast unary() {
        if (accept(tok_kind::minus)) {
            ast operand = unary();
            if (operand->kind == node_kind::constant) return make_constant(-operand->value);
            return make_mul({make_constant(-1.0), std::move(operand)});
        }
        return primary();
    }

    ast primary() {
        const token& t = peek();
        if (t.kind == tok_kind::number) {
            take();
            return make_constant(t.number);
        }
        if (t.kind == tok_kind::lparen) {
            take();
            ast inner = conjunction();
            expect(tok_kind::rparen);
            return inner;
        }
        if (t.kind == tok_kind::ident) {
            if (t.text == "sin") {
                take();
                expect(tok_kind::lparen);
                ast arg = conjunction();
                expect(tok_kind::rparen);
                return make_sin_deg(std::move(arg));
            }
            if (t.text == "sum") {
                take();
                expect(tok_kind::lparen);
                if (peek().kind != tok_kind::ident) fail("unit name");
                std::string unit = take().text;
                expect(tok_kind::rparen);
                return make_sum_components(std::move(unit));
            }
            if (is_selector_head(t.text)) return selector();
            fail("number, selector, 'sin', 'sum' or '('");
        }
        fail("number, selector, 'sin', 'sum' or '('");
    }

    static bool is_selector_head(const std::string& word) {
        if (word.size() < 2 || word[0] != 'v') return false;
        return std::all_of(word.begin() + 1, word.end(),
                           [](unsigned char c) { return std::isdigit(c); });
    }

    ast selector() {
        token head = take();  // v<j>
        int comp = 0;
        try {
            comp = std::stoi(head.text.substr(1));
        } catch (const std::out_of_range&) {
            comp = -1;
        }
        if (comp < 1)
            throw parse_error("parse error at offset " + std::to_string(head.offset) +
                                  ": selector component index must be at least 1",
                              head.offset, "component index >= 1");
        expect(tok_kind::lparen);
        if (peek().kind != tok_kind::ident) fail("unit name");
        std::string unit = take().text;
        std::string type_param;
        if (accept(tok_kind::lparen)) {
            if (peek().kind != tok_kind::ident) fail("type name");
            type_param = take().text;
            expect(tok_kind::rparen);
        }
        expect(tok_kind::rparen);
        return make_selector(std::move(unit), comp, std::move(type_param));
    }

    std::vector<token> toks_;
    std::size_t idx_ = 0;
};

}  // namespace

ast parse_expression(std::string_view text) { return parser(text).run(); }

// ---------------------------------------------------------------------------
// Printing

namespace {

// Larger binds tighter.
int precedence(node_kind k) {
    switch (k) {
        case node_kind::conjunction: return 1;
        case node_kind::equality_chain: return 2;
        case node_kind::comparison: return 3;
        case node_kind::add:
        case node_kind::sub: return 4;
        case node_kind::mul: return 5;
        case node_kind::power: return 6;
        default: return 7;
    }
}

const char* cmp_text(cmp_op op) {
    switch (op) {
        case cmp_op::lt: return "<";
        case cmp_op::le: return "<=";
        case cmp_op::gt: return ">";
        case cmp_op::ge: return ">=";
        case cmp_op::ne: return "!=";
    }
    return "<";
}

void print_rec(const ast& e, int parent_prec, std::string& out) {
    int prec = precedence(e->kind);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e->kind) {
        case node_kind::constant:
            out += format_number(e->value);
            break;
        case node_kind::selector:
            out += 'v';
            out += std::to_string(e->component);
            out += '(';
            out += e->unit;
            if (!e->type_param.empty()) {
                out += '(';
                out += e->type_param;
                out += ')';
            }
            out += ')';
            break;
        case node_kind::add:
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out += " + ";
                print_rec(e->args[i], prec, out);
            }
            break;
        case node_kind::sub:
            print_rec(e->args[0], prec, out);
            out += " - ";
            print_rec(e->args[1], prec + 1, out);
            break;
        case node_kind::mul:
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out += " * ";
                print_rec(e->args[i], prec, out);
            }
            break;
        case node_kind::power:
            print_rec(e->args[0], prec + 1, out);
            out += '^';
            print_rec(e->args[1], prec, out);
            break;
        case node_kind::sin_deg:
            out += "sin(";
            print_rec(e->args[0], 0, out);
            out += ')';
            break;
        case node_kind::sum_components:
            out += "sum(";
            out += e->unit;
            out += ')';
            break;
        case node_kind::equality_chain:
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out += " = ";
                print_rec(e->args[i], prec + 1, out);
            }
            break;
        case node_kind::conjunction:
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                if (i) out += " and ";
                print_rec(e->args[i], prec + 1, out);
            }
            break;
        case node_kind::comparison:
            print_rec(e->args[0], prec + 1, out);
            out += ' ';
            out += cmp_text(e->op);
            out += ' ';
            print_rec(e->args[1], prec + 1, out);
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string print_expression(const ast& e) {
    std::string out;
    print_rec(e, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double as_boolean(double v, const char* where) {
    if (v != 0.0 && v != 1.0)
        throw non_boolean_verification(std::string(where) + " operand is neither 0 nor 1: " +
                                       format_number(v));
    return v;
}

double eval_rec(const ast& e, const selector_resolver& resolve) {
    switch (e->kind) {
        case node_kind::constant:
            return e->value;
        case node_kind::selector: {
            const value_tuple* v = resolve(e->unit);
            if (!v) throw unbound_selector("unknown unit in selector: " + e->unit);
            if (e->component < 1 || static_cast<std::size_t>(e->component) > v->arity())
                throw unbound_selector("component index " + std::to_string(e->component) +
                                       " out of range for unit " + e->unit);
            return v->components[static_cast<std::size_t>(e->component) - 1].magnitude;
        }
        case node_kind::add: {
            double acc = 0.0;
            for (const auto& a : e->args) acc += eval_rec(a, resolve);
            return acc;
        }
        case node_kind::sub:
            return eval_rec(e->args[0], resolve) - eval_rec(e->args[1], resolve);
        case node_kind::mul: {
            double acc = 1.0;
            for (const auto& a : e->args) acc *= eval_rec(a, resolve);
            return acc;
        }
        case node_kind::power:
            return std::pow(eval_rec(e->args[0], resolve), eval_rec(e->args[1], resolve));
        case node_kind::sin_deg:
            return std::sin(eval_rec(e->args[0], resolve) * std::numbers::pi / 180.0);
        case node_kind::sum_components: {
            const value_tuple* v = resolve(e->unit);
            if (!v) throw unbound_selector("unknown unit in sum: " + e->unit);
            double acc = 0.0;
            for (const auto& c : v->components) acc += c.magnitude;
            return acc;
        }
        case node_kind::equality_chain: {
            double first = eval_rec(e->args[0], resolve);
            for (std::size_t i = 1; i < e->args.size(); ++i)
                if (eval_rec(e->args[i], resolve) != first) return 0.0;
            return 1.0;
        }
        case node_kind::conjunction: {
            double acc = 1.0;
            for (const auto& a : e->args)
                if (as_boolean(eval_rec(a, resolve), "conjunction") == 0.0) acc = 0.0;
            return acc;
        }
        case node_kind::comparison: {
            double l = eval_rec(e->args[0], resolve);
            double r = eval_rec(e->args[1], resolve);
            switch (e->op) {
                case cmp_op::lt: return l < r ? 1.0 : 0.0;
                case cmp_op::le: return l <= r ? 1.0 : 0.0;
                case cmp_op::gt: return l > r ? 1.0 : 0.0;
                case cmp_op::ge: return l >= r ? 1.0 : 0.0;
                case cmp_op::ne: return l != r ? 1.0 : 0.0;
            }
            return 0.0;
        }
    }
    throw error("unreachable expression node");
}

}  // namespace

double evaluate(const ast& e, const selector_resolver& resolve) { return eval_rec(e, resolve); }

double evaluate_verification(const ast& e, const selector_resolver& resolve) {
    double v = eval_rec(e, resolve);
    if (v != 0.0 && v != 1.0)
        throw non_boolean_verification("verification expression yielded " + format_number(v));
    return v;
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace {

// Flattens nested add/mul, replaces type parameters, sorts commutative
// operand lists by their canonical keys.
ast normalize(const ast& e);

void collect_flat(node_kind k, const ast& e, std::vector<ast>& out) {
    if (e->kind == k) {
        for (const auto& a : e->args) collect_flat(k, a, out);
    } else {
        out.push_back(e);
    }
}

std::string key_of(const ast& e);

std::vector<ast> sorted_by_key(std::vector<ast> v) {
    std::sort(v.begin(), v.end(),
              [](const ast& a, const ast& b) { return key_of(a) < key_of(b); });
    return v;
}

ast normalize(const ast& e) {
    switch (e->kind) {
        case node_kind::constant:
            return e;
        case node_kind::selector:
            // the subscript is presentational; bare and subscripted selectors
            // of one unit must collapse to the same form
            if (e->type_param == "#") return e;
            return make_selector(e->unit, e->component, "#");
        case node_kind::add:
        case node_kind::mul: {
            std::vector<ast> flat;
            collect_flat(e->kind, e, flat);
            for (auto& a : flat) a = normalize(a);
            flat = sorted_by_key(std::move(flat));
            return e->kind == node_kind::add ? make_add(std::move(flat)) : make_mul(std::move(flat));
        }
        case node_kind::sub:
            return make_sub(normalize(e->args[0]), normalize(e->args[1]));
        case node_kind::power:
            return make_power(normalize(e->args[0]), normalize(e->args[1]));
        case node_kind::sin_deg:
            return make_sin_deg(normalize(e->args[0]));
        case node_kind::sum_components:
            return e;
        case node_kind::equality_chain: {
            std::vector<ast> ops = e->args;
            for (auto& a : ops) a = normalize(a);
            return make_equality_chain(sorted_by_key(std::move(ops)));
        }
        case node_kind::conjunction: {
            std::vector<ast> ops = e->args;
            for (auto& a : ops) a = normalize(a);
            return make_conjunction(sorted_by_key(std::move(ops)));
        }
        case node_kind::comparison:
            return make_comparison(normalize(e->args[0]), e->op, normalize(e->args[1]));
    }
    throw error("unreachable expression node");
}

std::string key_of(const ast& e) {
    std::string out;
    switch (e->kind) {
        case node_kind::constant:
            return "(const " + format_number(e->value) + ")";
        case node_kind::selector:
            out = "(sel " + e->unit + " " + std::to_string(e->component);
            if (!e->type_param.empty()) out += " " + e->type_param;
            return out + ")";
        case node_kind::add: out = "(add"; break;
        case node_kind::sub: out = "(sub"; break;
        case node_kind::mul: out = "(mul"; break;
        case node_kind::power: out = "(pow"; break;
        case node_kind::sin_deg: out = "(sin"; break;
        case node_kind::sum_components:
            return "(sum " + e->unit + ")";
        case node_kind::equality_chain: out = "(eq"; break;
        case node_kind::conjunction: out = "(and"; break;
        case node_kind::comparison: out = std::string("(cmp ") + cmp_text(e->op); break;
    }
    for (const auto& a : e->args) {
        out += ' ';
        out += key_of(a);
    }
    return out + ")";
}

}  // namespace

canonical_expr alpha_canonicalize(const ast& e) {
    ast form = normalize(e);
    return canonical_expr{form, key_of(form)};
}

std::vector<std::string> referenced_units(const ast& e) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    std::function<void(const ast&)> walk = [&](const ast& x) {
        if (x->kind == node_kind::selector || x->kind == node_kind::sum_components) {
            if (seen.insert(x->unit).second) out.push_back(x->unit);
        }
        for (const auto& a : x->args) walk(a);
    };
    walk(e);
    return out;
}

}  // namespace coreforge::expr
