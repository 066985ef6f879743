#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracstep/types.hpp"

namespace fracstep::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Var { T, U };
enum class Func { Exp, Sin, Cos, Pow, Abs, Re, Im, Conj, Mlf };

struct Number {
    double value = 0.0;
};
struct ImagUnit {};
struct Variable {
    Var var = Var::T;
};
struct Negate {
    NodePtr arg;
};
struct Binary {
    char op = '+';  ///< one of + - * / ^
    NodePtr lhs;
    NodePtr rhs;
};
struct Call {
    Func func = Func::Exp;
    std::vector<NodePtr> args;
};

/// Immutable expression tree node.
struct Node {
    std::variant<Number, ImagUnit, Variable, Negate, Binary, Call> value;
    int height = 1;
};

inline constexpr std::size_t kMaxSourceBytes = 64 * 1024;
inline constexpr int kMaxDepth = 200;
inline constexpr int kMaxHeight = 2000;

///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?          right associative
///   atom  := number | 'i' | 't' | 'u' | ident '(' expr {',' expr} ')' | '(' expr ')'
///
/// Throws ParseError with the byte offset of the offending token.
NodePtr parse(std::string_view source);

/// Complex evaluation at (t, u). `^` uses the principal branch exp(y log x),
/// with exact repeated multiplication for small integer exponents.
/// Throws EvalError on division by |v| < 1e-300 or a non-real mlf order.
Complex evaluate(const Node& node, double t, Complex u);

/// Fully parenthesised text that parses back to an equal tree.
std::string to_string(const Node& node);

bool equal(const Node& a, const Node& b);

/// True when the variable u occurs anywhere in the tree.
bool depends_on_u(const Node& node);

const char* func_name(Func f);

/// Parsed expression bundled with its source text.
class Expression {
public:
    explicit Expression(std::string_view source) : source_(source), root_(parse(source)) {}

    Complex operator()(double t, Complex u) const { return evaluate(*root_, t, u); }
    const Node& root() const noexcept { return *root_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    NodePtr root_;
};

}  // namespace fracstep::expr
