#include "fracstep/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <system_error>

#include "fracstep/special.hpp"

namespace fracstep::expr {

namespace {

struct FuncInfo {
    std::string_view name;
    Func func;
    std::size_t arity;
};

constexpr std::array<FuncInfo, 9> kFuncs{{
    {"exp", Func::Exp, 1},
    {"sin", Func::Sin, 1},
    {"cos", Func::Cos, 1},
    {"pow", Func::Pow, 2},
    {"abs", Func::Abs, 1},
    {"re", Func::Re, 1},
    {"im", Func::Im, 1},
    {"conj", Func::Conj, 1},
    {"mlf", Func::Mlf, 3},
}};

const FuncInfo* find_func(std::string_view name) {
    for (const auto& f : kFuncs) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

const FuncInfo& func_info(Func func) {
    for (const auto& f : kFuncs) {
        if (f.func == func) {
            return f;
        }
    }
    return kFuncs[0];
}

int height_of(const NodePtr& p) { return p ? p->height : 0; }

template <typename T>
int child_height(const T& v) {
    if constexpr (std::is_same_v<T, Negate>) {
        return height_of(v.arg);
    } else if constexpr (std::is_same_v<T, Binary>) {
        return std::max(height_of(v.lhs), height_of(v.rhs));
    } else if constexpr (std::is_same_v<T, Call>) {
        int h = 0;
        for (const auto& a : v.args) {
            h = std::max(h, height_of(a));
        }
        return h;
    } else {
        return 0;
    }
}

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        NodePtr root = parse_expr();
        skip_space();
        if (pos_ < src_.size()) {
            fail("unexpected '" + std::string(1, src_[pos_]) + "', expected operator or end of input");
        }
        return root;
    }

private:
    template <typename T>
    NodePtr make(T value) {
        const int h = child_height(value) + 1;
        if (h > kMaxHeight) {
            fail("expression tree too deep");
        }
        return std::make_shared<const Node>(Node{std::move(value), h});
    }

    [[noreturn]] void fail(const std::string& message) const { throw ParseError(pos_, message); }

    void skip_space() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) {
                p.fail("expression nested too deeply");
            }
        }
        ~DepthGuard() { --p.depth_; }
    };

    NodePtr parse_expr() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Binary{'+', lhs, parse_term()});
            } else if (accept('-')) {
                lhs = make(Binary{'-', lhs, parse_term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Binary{'*', lhs, parse_unary()});
            } else if (accept('/')) {
                lhs = make(Binary{'/', lhs, parse_unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        DepthGuard guard(*this);
        if (accept('-')) {
            return make(Negate{parse_unary()});
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (accept('^')) {
            return make(Binary{'^', base, parse_unary()});
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_space();
        if (pos_ >= src_.size()) {
            fail("unexpected end of input, expected number, variable, function or '('");
        }
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (is_digit(c) || c == '.') {
            return parse_number();
        }
        if (is_alpha(c)) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) {
                ++pos_;
            }
            const std::string_view name = src_.substr(start, pos_ - start);
            if (name == "i") {
                return make(ImagUnit{});
            }
            if (name == "t") {
                return make(Variable{Var::T});
            }
            if (name == "u") {
                return make(Variable{Var::U});
            }
            const FuncInfo* info = find_func(name);
            if (!info) {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            expect('(');
            Call call{info->func, {}};
            call.args.push_back(parse_expr());
            while (accept(',')) {
                call.args.push_back(parse_expr());
            }
            expect(')');
            if (call.args.size() != info->arity) {
                pos_ = start;
                fail(std::string(name) + " takes " + std::to_string(info->arity) +
                     " argument(s), got " + std::to_string(call.args.size()));
            }
            return make(std::move(call));
        }
        fail("unexpected '" + std::string(1, c) + "', expected number, variable, function or '('");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        const auto digits = [&] {
            const std::size_t from = p;
            while (p < src_.size() && is_digit(src_[p])) {
                ++p;
            }
            return p - from;
        };
        std::size_t count = digits();
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            count += digits();
        }
        if (count == 0) {
            fail("malformed number");
        }
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) {
                ++q;
            }
            if (q < src_.size() && is_digit(src_[q])) {
                p = q;
                digits();
            } else {
                pos_ = p;
                fail("malformed exponent");
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + p, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + p || !std::isfinite(value)) {
            fail("number out of range");
        }
        pos_ = p;
        return make(Number{value});
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

Complex checked_real(Complex v, const char* what) {
    if (std::abs(v.imag()) >= 1e-14) {
        throw EvalError(std::string("mlf: ") + what + " must be real");
    }
    return v.real();
}

Complex power(Complex x, Complex y) {
    if (y.imag() == 0.0 && y.real() == std::round(y.real()) && std::abs(y.real()) <= 64.0) {
        long n = static_cast<long>(y.real());
        const bool invert = n < 0;
        n = invert ? -n : n;
        Complex acc{1.0, 0.0};
        Complex b = x;
        while (n > 0) {
            if (n & 1) {
                acc *= b;
            }
            b *= b;
            n >>= 1;
        }
        if (invert) {
            if (std::abs(acc) < 1e-300) {
                throw EvalError("division by zero in negative power");
            }
            return 1.0 / acc;
        }
        return acc;
    }
    if (x == Complex{0.0, 0.0}) {
        if (y.real() > 0.0) {
            return {0.0, 0.0};
        }
        throw EvalError("zero raised to a non-positive power");
    }
    if (x.imag() == 0.0) {
        // A negated real carries -0 in its imaginary part; keep the principal branch.
        x = Complex(x.real(), 0.0);
    }
    return std::exp(y * std::log(x));
}

void print(const Node& node, std::string& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                std::array<char, 32> buf{};
                const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v.value);
                out.append(buf.data(), res.ptr);
            } else if constexpr (std::is_same_v<T, ImagUnit>) {
                out += 'i';
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += v.var == Var::T ? 't' : 'u';
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "(-";
                print(*v.arg, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Binary>) {
                out += '(';
                print(*v.lhs, out);
                out += v.op;
                print(*v.rhs, out);
                out += ')';
            } else {
                out += func_name(v.func);
                out += '(';
                for (std::size_t a = 0; a < v.args.size(); ++a) {
                    if (a > 0) {
                        out += ", ";
                    }
                    print(*v.args[a], out);
                }
                out += ')';
            }
        },
        node.value);
}

}  // namespace

const char* func_name(Func f) { return func_info(f).name.data(); }

NodePtr parse(std::string_view source) {
    if (source.size() > kMaxSourceBytes) {
        throw ParseError(kMaxSourceBytes, "expression exceeds 64 KiB");
    }
    bool blank = true;
    for (char c : source) {
        blank = blank && (c == ' ' || c == '\t' || c == '\n' || c == '\r');
    }
    if (blank) {
        throw ParseError(0, "empty expression");
    }
    return Parser(source).run();
}

Complex evaluate(const Node& node, double t, Complex u) {
    return std::visit(
        [&](const auto& v) -> Complex {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Number>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, ImagUnit>) {
                return {0.0, 1.0};
            } else if constexpr (std::is_same_v<T, Variable>) {
                return v.var == Var::T ? Complex(t) : u;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -evaluate(*v.arg, t, u);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const Complex a = evaluate(*v.lhs, t, u);
                const Complex b = evaluate(*v.rhs, t, u);
                switch (v.op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/':
                        if (std::abs(b) < 1e-300) {
                            throw EvalError("division by zero");
                        }
                        return a / b;
                    default: return power(a, b);
                }
            } else {
                std::vector<Complex> args;
                args.reserve(v.args.size());
                for (const auto& a : v.args) {
                    args.push_back(evaluate(*a, t, u));
                }
                switch (v.func) {
                    case Func::Exp: return std::exp(args[0]);
                    case Func::Sin: return std::sin(args[0]);
                    case Func::Cos: return std::cos(args[0]);
                    case Func::Pow: return power(args[0], args[1]);
                    case Func::Abs: return std::abs(args[0]);
                    case Func::Re: return args[0].real();
                    case Func::Im: return args[0].imag();
                    case Func::Conj: return std::conj(args[0]);
                    case Func::Mlf: {
                        const double a = checked_real(args[0], "order alpha").real();
                        const double b = checked_real(args[1], "order beta").real();
                        try {
                            return mittag_leffler(a, b, args[2]);
                        } catch (const DomainError& e) {
                            throw EvalError(e.what());
                        }
                    }
                }
                throw EvalError("unknown function");
            }
        },
        node.value);
}

std::string to_string(const Node& node) {
    std::string out;
    print(node, out);
    return out;
}

bool equal(const Node& a, const Node& b) {
    if (a.value.index() != b.value.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& va) -> bool {
            using T = std::decay_t<decltype(va)>;
            const auto& vb = std::get<T>(b.value);
            if constexpr (std::is_same_v<T, Number>) {
                return va.value == vb.value;
            } else if constexpr (std::is_same_v<T, ImagUnit>) {
                return true;
            } else if constexpr (std::is_same_v<T, Variable>) {
                return va.var == vb.var;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return equal(*va.arg, *vb.arg);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return va.op == vb.op && equal(*va.lhs, *vb.lhs) && equal(*va.rhs, *vb.rhs);
            } else {
                if (va.func != vb.func || va.args.size() != vb.args.size()) {
                    return false;
                }
                for (std::size_t k = 0; k < va.args.size(); ++k) {
                    if (!equal(*va.args[k], *vb.args[k])) {
                        return false;
                    }
                }
                return true;
            }
        },
        a.value);
}

bool depends_on_u(const Node& node) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Variable>) {
                return v.var == Var::U;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return depends_on_u(*v.arg);
            } else if constexpr (std::is_same_v<T, Binary>) {
                return depends_on_u(*v.lhs) || depends_on_u(*v.rhs);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : v.args) {
                    if (depends_on_u(*a)) {
                        return true;
                    }
                }
                return false;
            } else {
                return false;
            }
        },
        node.value);
}

}  // namespace fracstep::expr
