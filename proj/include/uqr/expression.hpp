#pragma once

#include <cctype>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "uqr/errors.hpp"
#include "uqr/grid.hpp"

// Small arithmetic grammar for user-supplied states:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'x' | 'phi' | 'i' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func    := exp | sin | cos | sqrt | abs
// Evaluation is complex-valued; 'x' and 'phi' both bind the grid coordinate.

namespace uqr::expr {

enum class NodeKind { Constant, Coordinate, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Sqrt, Abs };

struct Node {
    NodeKind kind;
    cplx value{};  // Constant only
    std::shared_ptr<Node> lhs;
    std::shared_ptr<Node> rhs;
};

using NodePtr = std::shared_ptr<Node>;

namespace detail {

struct Parser {
    explicit Parser(const std::string& text) : s(text) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos != s.size())
            throw ParseError("expression: unexpected trailing input at '" + s.substr(pos) + "'");
        return e;
    }

private:
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        while (true) {
            if (eat('+')) lhs = binary(NodeKind::Add, lhs, term());
            else if (eat('-')) lhs = binary(NodeKind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (eat('*')) lhs = binary(NodeKind::Mul, lhs, unary());
            else if (eat('/')) lhs = binary(NodeKind::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Neg;
            n->lhs = unary();
            return n;
        }
        return primary();
    }

    NodePtr primary() {
        skip_ws();
        if (pos >= s.size()) throw ParseError("expression: unexpected end of input");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        if (c == '(') {
            ++pos;
            NodePtr e = expression();
            if (!eat(')')) throw ParseError("expression: expected ')'");
            return e;
        }
        throw ParseError(std::string("expression: unexpected character '") + c + "'");
    }

    NodePtr number() {
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' || s[end] == 'e' ||
                s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        const std::string tok = s.substr(pos, end - pos);
        try {
            const double v = std::stod(tok);
            pos = end;
            return constant(v);
        } catch (const std::exception&) {
            throw ParseError("expression: bad numeric literal '" + tok + "'");
        }
    }

    NodePtr identifier() {
        size_t end = pos;
        while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
        const std::string name = s.substr(pos, end - pos);
        pos = end;
        if (name == "x" || name == "phi") {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::Coordinate;
            return n;
        }
        if (name == "i") return constant(cplx(0.0, 1.0));
        if (name == "pi") return constant(std::numbers::pi);
        NodeKind kind;
        if (name == "exp") kind = NodeKind::Exp;
        else if (name == "sin") kind = NodeKind::Sin;
        else if (name == "cos") kind = NodeKind::Cos;
        else if (name == "sqrt") kind = NodeKind::Sqrt;
        else if (name == "abs") kind = NodeKind::Abs;
        else throw ParseError("expression: unknown identifier '" + name + "'");
        if (!eat('(')) throw ParseError("expression: expected '(' after '" + name + "'");
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = expression();
        if (!eat(')')) throw ParseError("expression: expected ')' closing '" + name + "'");
        return n;
    }

    static NodePtr constant(cplx v) {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Constant;
        n->value = v;
        return n;
    }

    static NodePtr binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }
};

}  // namespace detail

inline NodePtr parse(const std::string& text) { return detail::Parser(text).parse(); }

inline cplx evaluate(const Node& node, double coordinate) {
    switch (node.kind) {
        case NodeKind::Constant: return node.value;
        case NodeKind::Coordinate: return coordinate;
        case NodeKind::Add: return evaluate(*node.lhs, coordinate) + evaluate(*node.rhs, coordinate);
        case NodeKind::Sub: return evaluate(*node.lhs, coordinate) - evaluate(*node.rhs, coordinate);
        case NodeKind::Mul: return evaluate(*node.lhs, coordinate) * evaluate(*node.rhs, coordinate);
        case NodeKind::Div: return evaluate(*node.lhs, coordinate) / evaluate(*node.rhs, coordinate);
        case NodeKind::Neg: return -evaluate(*node.lhs, coordinate);
        case NodeKind::Exp: return std::exp(evaluate(*node.lhs, coordinate));
        case NodeKind::Sin: return std::sin(evaluate(*node.lhs, coordinate));
        case NodeKind::Cos: return std::cos(evaluate(*node.lhs, coordinate));
        case NodeKind::Sqrt: return std::sqrt(evaluate(*node.lhs, coordinate));
        case NodeKind::Abs: return cplx(std::abs(evaluate(*node.lhs, coordinate)), 0.0);
    }
    throw StructuralError("expression: corrupt node");
}

}  // namespace uqr::expr
