#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lichlab/common.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

// Closed-form radial coefficients are given as expression strings over the
// variable r with arithmetic (+ - * / ^), parentheses, and the function set
// {exp, log, pow, tanh}.  The grammar is deliberately small so that run
// configurations stay reproducible and parseable.
class Expression {
  public:
    static Expression parse(const std::string& text) {
        Parser p(text);
        Expression e;
        e.source_ = text;
        e.root_ = p.parse_expr();
        p.expect_end();
        return e;
    }

    double operator()(double r) const { return eval(*root_, r); }
    const std::string& source() const { return source_; }

  private:
    struct Node {
        enum class Kind { number, var_r, add, sub, mul, div, pow, neg, exp, log, tanh } kind;
        double value = 0.0;
        std::unique_ptr<Node> lhs, rhs;
    };

    static double eval(const Node& n, double r) {
        using K = Node::Kind;
        switch (n.kind) {
            case K::number: return n.value;
            case K::var_r: return r;
            case K::add: return eval(*n.lhs, r) + eval(*n.rhs, r);
            case K::sub: return eval(*n.lhs, r) - eval(*n.rhs, r);
            case K::mul: return eval(*n.lhs, r) * eval(*n.rhs, r);
            case K::div: return eval(*n.lhs, r) / eval(*n.rhs, r);
            case K::pow: return std::pow(eval(*n.lhs, r), eval(*n.rhs, r));
            case K::neg: return -eval(*n.lhs, r);
            case K::exp: return std::exp(eval(*n.lhs, r));
            case K::log: return std::log(eval(*n.lhs, r));
            case K::tanh: return std::tanh(eval(*n.lhs, r));
        }
        return 0.0;
    }

    class Parser {
      public:
        explicit Parser(const std::string& s) : s_(s) {}

        std::unique_ptr<Node> parse_expr() {
            auto lhs = parse_term();
            while (true) {
                skip_ws();
                if (match('+')) lhs = binary(Node::Kind::add, std::move(lhs), parse_term());
                else if (match('-')) lhs = binary(Node::Kind::sub, std::move(lhs), parse_term());
                else return lhs;
            }
        }

        void expect_end() {
            skip_ws();
            if (pos_ != s_.size())
                fail("unexpected trailing input");
        }

      private:
        std::unique_ptr<Node> parse_term() {
            auto lhs = parse_unary();
            while (true) {
                skip_ws();
                if (match('*')) lhs = binary(Node::Kind::mul, std::move(lhs), parse_unary());
                else if (match('/')) lhs = binary(Node::Kind::div, std::move(lhs), parse_unary());
                else return lhs;
            }
        }

        std::unique_ptr<Node> parse_unary() {
            skip_ws();
            if (match('-')) {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::neg;
                n->lhs = parse_unary();
                return n;
            }
            if (match('+')) return parse_unary();
            return parse_power();
        }

        std::unique_ptr<Node> parse_power() {
            auto base = parse_atom();
            skip_ws();
            if (match('^'))  // right associative
                return binary(Node::Kind::pow, std::move(base), parse_unary());
            return base;
        }

        std::unique_ptr<Node> parse_atom() {
            skip_ws();
            if (pos_ >= s_.size()) fail("unexpected end of expression");
            char c = s_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
            if (match('(')) {
                auto e = parse_expr();
                expect(')');
                return e;
            }
            fail(std::string("unexpected character '") + c + "'");
            return nullptr;
        }

        std::unique_ptr<Node> parse_number() {
            std::size_t end = pos_;
            while (end < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                    s_[end] == 'e' || s_[end] == 'E' ||
                    ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                     (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
                ++end;
            auto n = std::make_unique<Node>();
            n->kind = Node::Kind::number;
            try {
                n->value = std::stod(s_.substr(pos_, end - pos_));
            } catch (const std::exception&) {
                fail("malformed number");
            }
            pos_ = end;
            return n;
        }

        std::unique_ptr<Node> parse_name() {
            std::size_t end = pos_;
            while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
            std::string name = s_.substr(pos_, end - pos_);
            pos_ = end;
            if (name == "r") {
                auto n = std::make_unique<Node>();
                n->kind = Node::Kind::var_r;
                return n;
            }
            if (name == "pow") {
                expect('(');
                auto a = parse_expr();
                expect(',');
                auto b = parse_expr();
                expect(')');
                return binary(Node::Kind::pow, std::move(a), std::move(b));
            }
            Node::Kind k;
            if (name == "exp") k = Node::Kind::exp;
            else if (name == "log") k = Node::Kind::log;
            else if (name == "tanh") k = Node::Kind::tanh;
            else {
                fail("unknown identifier '" + name + "' (allowed: r, exp, log, pow, tanh)");
                return nullptr;
            }
            expect('(');
            auto arg = parse_expr();
            expect(')');
            auto n = std::make_unique<Node>();
            n->kind = k;
            n->lhs = std::move(arg);
            return n;
        }

        static std::unique_ptr<Node> binary(Node::Kind k, std::unique_ptr<Node> a,
                                            std::unique_ptr<Node> b) {
            auto n = std::make_unique<Node>();
            n->kind = k;
            n->lhs = std::move(a);
            n->rhs = std::move(b);
            return n;
        }

        void skip_ws() {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        bool match(char c) {
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == c) {
                ++pos_;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!match(c)) fail(std::string("expected '") + c + "'");
        }
        [[noreturn]] void fail(const std::string& what) const {
            throw config_error("expression '" + s_ + "' at position " + std::to_string(pos_) +
                               ": " + what);
        }

        const std::string& s_;
        std::size_t pos_ = 0;
    };

    std::shared_ptr<Node> root_;
    std::string source_;
};

// A radial coefficient field: either a closed-form expression (evaluable at
// any r >= 0, which enables tail analysis beyond the sampled window) or
// samples with linear interpolation.
struct RadialField {
    std::function<double(double)> f;
    bool closed_form = false;
    std::string source;

    double operator()(double r) const { return f(r); }

    static RadialField constant(double value) {
        RadialField field;
        field.f = [value](double) { return value; };
        field.closed_form = true;
        field.source = std::to_string(value);
        return field;
    }

    static RadialField from_expression(const std::string& text) {
        Expression e = Expression::parse(text);
        RadialField field;
        field.f = [e](double r) { return e(r); };
        field.closed_form = true;
        field.source = text;
        return field;
    }

    static RadialField from_samples(std::vector<double> r, std::vector<double> v) {
        auto fn = std::make_shared<RadialFunctionHolder>();
        fn->fn = RadialFunction(std::move(r), std::move(v));
        RadialField field;
        field.f = [fn](double x) { return fn->fn(x); };
        field.closed_form = false;
        field.source = "samples";
        return field;
    }

    static RadialField from_callable(std::function<double(double)> fn, bool closed,
                                     std::string label) {
        RadialField field;
        field.f = std::move(fn);
        field.closed_form = closed;
        field.source = std::move(label);
        return field;
    }

  private:
    struct RadialFunctionHolder {
        RadialFunction fn;
    };
    // forward decl needs RadialFunction; included via radial.hpp by users
};

}  // namespace lichlab
