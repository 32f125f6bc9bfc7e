#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>

#include "packetlab/error.hpp"

namespace packetlab {

// Arithmetic for configuration values such as "2*pi/256", "2pi/3" or "h^(-1/4)".
// Grammar: expr := term (('+'|'-') term)* ; term := power (('*'|'/')? power)* ;
// power := unary ('^' power)? ; unary := ('+'|'-') unary | atom ;
// atom := number | identifier | '(' expr ')'. Juxtaposition multiplies.
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const std::map<std::string, double>& vars)
        : text_(text), vars_(vars) {}

    double parse() {
        const double v = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw validation_error("expression '" + std::string(text_) + "': " + what);
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool starts_atom() {
        skip();
        if (pos_ >= text_.size()) return false;
        const char c = text_[pos_];
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == '_';
    }

    double expr() {
        double v = term();
        for (;;) {
            if (peek('+')) { ++pos_; v += term(); }
            else if (peek('-')) { ++pos_; v -= term(); }
            else return v;
        }
    }
    double term() {
        double v = power();
        for (;;) {
            if (peek('*')) { ++pos_; v *= power(); }
            else if (peek('/')) { ++pos_; v /= power(); }
            else if (starts_atom()) v *= power();
            else return v;
        }
    }
    double power() {
        const double base = unary();
        if (peek('^')) {
            ++pos_;
            return std::pow(base, power());
        }
        return base;
    }
    double unary() {
        if (peek('-')) { ++pos_; return -unary(); }
        if (peek('+')) { ++pos_; return unary(); }
        return atom();
    }
    double atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            const double v = expr();
            if (!peek(')')) fail("missing ')'");
            ++pos_;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            const std::string rest(text_.substr(pos_));
            double v = 0.0;
            try {
                v = std::stod(rest, &used);
            } catch (const std::exception&) {
                fail("bad number");
            }
            pos_ += used;
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (name == "pi") return std::numbers::pi;
            if (auto it = vars_.find(name); it != vars_.end()) return it->second;
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const std::map<std::string, double>& vars_;
    std::size_t pos_ = 0;
};

inline double evaluate(std::string_view text, const std::map<std::string, double>& vars = {}) {
    return ExpressionParser(text, vars).parse();
}

}  // namespace packetlab
