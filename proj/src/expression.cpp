#include "fdde/expression.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "fdde/errors.hpp"

namespace fdde {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += (i + 1 == expected.size()) ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

} // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error("syntax error at offset " + std::to_string(offset) + ": expected " + join_expected(expected) +
            ", found " + found),
      offset_(offset), expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t offset, std::string name)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset) +
            " (only x and xd are allowed)"),
      offset_(offset), name_(std::move(name)) {}

} // namespace fdde

namespace fdde::expr {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End, Invalid };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_digit = [&](std::size_t k) { return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k])); };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(i) || (c == '.' && is_digit(i + 1))) {
            while (is_digit(i)) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (is_digit(i)) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (is_digit(k)) {
                    i = k;
                    while (is_digit(i)) ++i;
                }
            }
            out.push_back({Tok::Number, start, src.substr(start, i - start)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) ++i;
            out.push_back({Tok::Ident, start, src.substr(start, i - start)});
            continue;
        }
        Tok kind = Tok::Invalid;
        switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default: break;
        }
        out.push_back({kind, start, src.substr(start, 1)});
        ++i;
    }
    out.push_back({Tok::End, src.size(), {}});
    return out;
}

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + std::string(t.text) + "'";
}

NodePtr make(auto node) { return std::make_shared<const Node>(Node{std::move(node)}); }

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

    NodePtr parse() {
        NodePtr root = expression();
        if (peek().kind != Tok::End) fail({"operator", "end of input"});
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(peek().offset, std::move(expected), describe(peek()));
    }

    NodePtr expression() {
        NodePtr lhs = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const BinaryOp op = advance().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
            lhs = make(Binary{op, lhs, term()});
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const BinaryOp op = advance().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
            lhs = make(Binary{op, lhs, unary()});
        }
        return lhs;
    }

    NodePtr unary() {
        if (peek().kind == Tok::Minus) {
            advance();
            return make(Negate{unary()});
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (peek().kind != Tok::Caret) return base;
        advance();
        const Token& t = peek();
        unsigned exponent = 0;
        bool ok = t.kind == Tok::Number;
        for (char c : t.text) ok = ok && std::isdigit(static_cast<unsigned char>(c));
        if (ok) {
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), exponent);
            ok = ec == std::errc{} && ptr == t.text.data() + t.text.size() && exponent >= 1 && exponent <= 1024;
        }
        if (!ok) fail({"positive integer exponent"});
        advance();
        return make(Power{base, exponent});
    }

    NodePtr primary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Number: {
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail({"finite number"});
            advance();
            return make(Number{value});
        }
        case Tok::Ident: {
            if (t.text == "x" || t.text == "xd") {
                advance();
                return make(Var{t.text == "x" ? Variable::Current : Variable::Delayed});
            }
            throw UnknownIdentifier(t.offset, std::string(t.text));
        }
        case Tok::LParen: {
            advance();
            NodePtr inner = expression();
            if (peek().kind != Tok::RParen) fail({"')'"});
            advance();
            return inner;
        }
        default:
            fail({"number", "x", "xd", "'('", "'-'"});
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

double eval(const Node& node, double x, double xd) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Var>) {
                return n.which == Variable::Current ? x : xd;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval(*n.operand, x, xd);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const double l = eval(*n.lhs, x, xd);
                const double r = eval(*n.rhs, x, xd);
                switch (n.op) {
                case BinaryOp::Add: return l + r;
                case BinaryOp::Sub: return l - r;
                case BinaryOp::Mul: return l * r;
                case BinaryOp::Div: return l / r;
                }
                return 0.0;
            } else {
                const double base = eval(*n.base, x, xd);
                double out = base;
                for (unsigned i = 1; i < n.exponent; ++i) out *= base;
                return out;
            }
        },
        node.kind);
}

// Binding strength used by the printer: + - < * / < unary minus < ^ < atoms.
int precedence(const Node& node) {
    if (const auto* b = std::get_if<Binary>(&node.kind)) {
        return (b->op == BinaryOp::Add || b->op == BinaryOp::Sub) ? 1 : 2;
    }
    if (std::holds_alternative<Negate>(node.kind)) return 3;
    if (std::holds_alternative<Power>(node.kind)) return 4;
    return 5;
}

void print(const Node& node, std::string& out);

void print_wrapped(const Node& node, bool parens, std::string& out) {
    if (parens) out += '(';
    print(node, out);
    if (parens) out += ')';
}

void print(const Node& node, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Number>) {
                char buf[64];
                const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
                out.append(buf, res.ptr);
            } else if constexpr (std::is_same_v<T, Var>) {
                out += n.which == Variable::Current ? "x" : "xd";
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += '-';
                print_wrapped(*n.operand, precedence(*n.operand) < 3, out);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const int p = precedence(node);
                print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
                switch (n.op) {
                case BinaryOp::Add: out += " + "; break;
                case BinaryOp::Sub: out += " - "; break;
                case BinaryOp::Mul: out += '*'; break;
                case BinaryOp::Div: out += '/'; break;
                }
                print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
            } else {
                print_wrapped(*n.base, precedence(*n.base) < 5, out);
                out += '^';
                out += std::to_string(n.exponent);
            }
        },
        node.kind);
}

} // namespace

bool operator==(const Node& lhs, const Node& rhs) {
    if (lhs.kind.index() != rhs.kind.index()) return false;
    return std::visit(
        [&](const auto& l) -> bool {
            using T = std::decay_t<decltype(l)>;
            const auto& r = std::get<T>(rhs.kind);
            if constexpr (std::is_same_v<T, Number>) {
                return l.value == r.value;
            } else if constexpr (std::is_same_v<T, Var>) {
                return l.which == r.which;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return *l.operand == *r.operand;
            } else if constexpr (std::is_same_v<T, Binary>) {
                return l.op == r.op && *l.lhs == *r.lhs && *l.rhs == *r.rhs;
            } else {
                return l.exponent == r.exponent && *l.base == *r.base;
            }
        },
        lhs.kind);
}

Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

double Expression::evaluate(double x, double xd) const { return eval(*root_, x, xd); }

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

} // namespace fdde::expr
