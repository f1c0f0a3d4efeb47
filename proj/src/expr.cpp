#include "symvp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

namespace symvp {

namespace {

double extMul(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) {
    if (a == 0.0 || b == 0.0) throw std::domain_error("0 * inf is undefined");
    return ((a > 0) == (b > 0)) ? kInf : -kInf;
  }
  return a * b;
}

double extDiv(double a, double b) {
  if (std::isinf(a) && std::isinf(b)) throw std::domain_error("inf / inf is undefined");
  if (b == 0.0) throw std::domain_error("division by zero");
  return a / b;
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  virtual ~Node() = default;
  virtual double eval(const Vector& x) const = 0;
  // Partial derivative with respect to x[k]; nullopt when not smooth.
  virtual std::optional<NodePtr> diff(int k) const = 0;
};

struct Num : Node {
  explicit Num(double v) : v(v) {}
  double v;
  double eval(const Vector&) const override { return v; }
  std::optional<NodePtr> diff(int) const override { return NodePtr(std::make_shared<Num>(0.0)); }
};

NodePtr num(double v) { return std::make_shared<Num>(v); }

bool isZero(const NodePtr& n) {
  auto* c = dynamic_cast<const Num*>(n.get());
  return c && c->v == 0.0;
}
bool isOne(const NodePtr& n) {
  auto* c = dynamic_cast<const Num*>(n.get());
  return c && c->v == 1.0;
}

struct Var : Node {
  explicit Var(int i) : i(i) {}
  int i;
  double eval(const Vector& x) const override { return x[i]; }
  std::optional<NodePtr> diff(int k) const override { return num(k == i ? 1.0 : 0.0); }
};

struct Neg : Node {
  explicit Neg(NodePtr a) : a(std::move(a)) {}
  NodePtr a;
  double eval(const Vector& x) const override { return extMul(-1.0, a->eval(x)); }
  std::optional<NodePtr> diff(int k) const override {
    auto da = a->diff(k);
    if (!da) return std::nullopt;
    return NodePtr(std::make_shared<Neg>(*da));
  }
};

struct Bin : Node {
  Bin(char op, NodePtr a, NodePtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
  char op;
  NodePtr a, b;

  double eval(const Vector& x) const override {
    const double va = a->eval(x);
    const double vb = b->eval(x);
    switch (op) {
      case '+': return extAdd(va, vb);
      case '-': return extAdd(va, extMul(-1.0, vb));
      case '*': return extMul(va, vb);
      case '/': return extDiv(va, vb);
      case '^': return std::pow(va, vb);
    }
    throw std::logic_error("unknown operator");
  }

  std::optional<NodePtr> diff(int k) const override {
    const auto da = a->diff(k);
    if (!da) return std::nullopt;
    if (op == '^') {
      // Only u^c with a constant exponent is differentiated symbolically.
      auto* c = dynamic_cast<const Num*>(b.get());
      if (!c) return std::nullopt;
      if (c->v == 0.0) return num(0.0);
      NodePtr power = c->v == 2.0 ? a
                      : c->v == 1.0 ? num(1.0)
                                    : NodePtr(std::make_shared<Bin>('^', a, num(c->v - 1.0)));
      NodePtr scaled = std::make_shared<Bin>('*', num(c->v), power);
      if (isOne(*da)) return scaled;
      return NodePtr(std::make_shared<Bin>('*', scaled, *da));
    }
    const auto db = b->diff(k);
    if (!db) return std::nullopt;
    switch (op) {
      case '+': return NodePtr(std::make_shared<Bin>('+', *da, *db));
      case '-': return NodePtr(std::make_shared<Bin>('-', *da, *db));
      case '*': {
        if (isZero(*da)) return NodePtr(std::make_shared<Bin>('*', a, *db));
        if (isZero(*db)) return NodePtr(std::make_shared<Bin>('*', *da, b));
        NodePtr l = std::make_shared<Bin>('*', *da, b);
        NodePtr r = std::make_shared<Bin>('*', a, *db);
        return NodePtr(std::make_shared<Bin>('+', l, r));
      }
      case '/': {
        NodePtr l = std::make_shared<Bin>('*', *da, b);
        NodePtr r = std::make_shared<Bin>('*', a, *db);
        NodePtr top = std::make_shared<Bin>('-', l, r);
        NodePtr bot = std::make_shared<Bin>('*', b, b);
        return NodePtr(std::make_shared<Bin>('/', top, bot));
      }
    }
    return std::nullopt;
  }
};

enum class Fn { Abs, Sqrt, Exp, Log, Cosh, Sinh, Tanh };

struct Call : Node {
  Call(Fn fn, NodePtr a) : fn(fn), a(std::move(a)) {}
  Fn fn;
  NodePtr a;

  double eval(const Vector& x) const override {
    const double v = a->eval(x);
    switch (fn) {
      case Fn::Abs: return std::abs(v);
      case Fn::Sqrt: return std::sqrt(v);
      case Fn::Exp: return std::isinf(v) && v < 0 ? 0.0 : std::exp(v);
      case Fn::Log: return std::log(v);
      case Fn::Cosh: return std::cosh(v);
      case Fn::Sinh: return std::sinh(v);
      case Fn::Tanh: return std::tanh(v);
    }
    throw std::logic_error("unknown call");
  }

  std::optional<NodePtr> diff(int k) const override {
    const auto da = a->diff(k);
    if (!da) return std::nullopt;
    NodePtr outer;
    switch (fn) {
      case Fn::Abs: return std::nullopt;
      case Fn::Sqrt: {
        NodePtr twice = std::make_shared<Bin>('*', num(2.0),
                                              NodePtr(std::make_shared<Call>(Fn::Sqrt, a)));
        outer = std::make_shared<Bin>('/', num(1.0), twice);
        break;
      }
      case Fn::Exp: outer = std::make_shared<Call>(Fn::Exp, a); break;
      case Fn::Log: outer = std::make_shared<Bin>('/', num(1.0), a); break;
      case Fn::Cosh: outer = std::make_shared<Call>(Fn::Sinh, a); break;
      case Fn::Sinh: outer = std::make_shared<Call>(Fn::Cosh, a); break;
      case Fn::Tanh: {
        NodePtr th = std::make_shared<Call>(Fn::Tanh, a);
        NodePtr sq = std::make_shared<Bin>('*', th, th);
        outer = std::make_shared<Bin>('-', num(1.0), sq);
        break;
      }
    }
    if (isOne(*da)) return outer;
    return NodePtr(std::make_shared<Bin>('*', outer, *da));
  }
};

struct MaxMin : Node {
  MaxMin(bool isMax, std::vector<NodePtr> args) : isMax(isMax), args(std::move(args)) {}
  bool isMax;
  std::vector<NodePtr> args;
  double eval(const Vector& x) const override {
    double best = args.front()->eval(x);
    for (std::size_t i = 1; i < args.size(); ++i) {
      const double v = args[i]->eval(x);
      best = isMax ? std::max(best, v) : std::min(best, v);
    }
    return best;
  }
  std::optional<NodePtr> diff(int) const override { return std::nullopt; }
};

struct NormNode : Node {
  explicit NormNode(NormKind kind) : kind(kind) {}
  NormKind kind;
  double eval(const Vector& x) const override {
    switch (kind) {
      case NormKind::L1: return x.lpNorm<1>();
      case NormKind::L2: return x.norm();
      case NormKind::LInf: return x.lpNorm<Eigen::Infinity>();
      default: throw std::logic_error("unsupported norm node");
    }
  }
  std::optional<NodePtr> diff(int) const override { return std::nullopt; }
};

struct Indicator : Node {
  Indicator(bool ball, double radius) : ball(ball), radius(radius) {}
  bool ball;  // true: l2 ball, false: linf box
  double radius;
  double eval(const Vector& x) const override {
    const double r = ball ? x.norm() : x.lpNorm<Eigen::Infinity>();
    return r <= radius ? 0.0 : kInf;
  }
  std::optional<NodePtr> diff(int) const override { return std::nullopt; }
};

struct Token {
  enum Kind { Number, Ident, Op, LParen, RParen, Comma, End } kind;
  std::string text;
  double value = 0.0;
  std::size_t pos = 0;  // 1-based
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::size_t pos = i_ + 1;
    if (i_ >= s_.size()) return {Token::End, "", 0.0, pos};
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t consumed = 0;
      double v;
      try {
        v = std::stod(s_.substr(i_), &consumed);
      } catch (const std::exception&) {
        throw ParseError(pos, "malformed number");
      }
      std::string text = s_.substr(i_, consumed);
      i_ += consumed;
      return {Token::Number, text, v, pos};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
        ++j;
      std::string text = s_.substr(i_, j - i_);
      i_ = j;
      return {Token::Ident, text, 0.0, pos};
    }
    ++i_;
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        return {Token::Op, std::string(1, c), 0.0, pos};
      case '(': return {Token::LParen, "(", 0.0, pos};
      case ')': return {Token::RParen, ")", 0.0, pos};
      case ',': return {Token::Comma, ",", 0.0, pos};
    }
    throw ParseError(pos, std::string("unexpected character '") + c + "'");
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(const std::string& s, int dim) : lexer_(s), dim_(dim) { advance(); }

  NodePtr parse() {
    NodePtr e = expr();
    if (tok_.kind != Token::End) throw ParseError(tok_.pos, "unexpected trailing input");
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  bool isOp(const char* text) const { return tok_.kind == Token::Op && tok_.text == text; }

  NodePtr expr() {
    NodePtr e = term();
    while (isOp("+") || isOp("-")) {
      const char op = tok_.text[0];
      advance();
      e = std::make_shared<Bin>(op, e, term());
    }
    return e;
  }

  NodePtr term() {
    NodePtr e = factor();
    while (isOp("*") || isOp("/")) {
      const char op = tok_.text[0];
      advance();
      e = std::make_shared<Bin>(op, e, factor());
    }
    return e;
  }

  // Unary minus binds looser than '^', so -x1^2 means -(x1^2).
  NodePtr factor() {
    if (isOp("-")) {
      advance();
      return std::make_shared<Neg>(factor());
    }
    NodePtr base = primary();
    if (isOp("^")) {
      advance();
      return std::make_shared<Bin>('^', base, factor());
    }
    return base;
  }

  std::vector<NodePtr> argList(const std::string& name, std::size_t atPos, int minArgs,
                               int maxArgs) {
    if (tok_.kind != Token::LParen)
      throw ParseError(tok_.pos, "'" + name + "' expects an argument list");
    advance();
    std::vector<NodePtr> args;
    if (tok_.kind != Token::RParen) {
      args.push_back(expr());
      while (tok_.kind == Token::Comma) {
        advance();
        args.push_back(expr());
      }
    }
    if (tok_.kind != Token::RParen) throw ParseError(tok_.pos, "expected ')'");
    advance();
    const int n = static_cast<int>(args.size());
    if (n < minArgs || (maxArgs >= 0 && n > maxArgs))
      throw ParseError(atPos, "'" + name + "' got " + std::to_string(n) + " arguments");
    return args;
  }

  double literalArg(const std::string& name, std::size_t atPos) {
    auto args = argList(name, atPos, 1, 1);
    auto* c = dynamic_cast<const Num*>(args[0].get());
    if (!c) throw ParseError(atPos, "'" + name + "' needs a numeric literal argument");
    return c->v;
  }

  NodePtr primary() {
    if (tok_.kind == Token::Number) {
      const double v = tok_.value;
      advance();
      return num(v);
    }
    if (tok_.kind == Token::LParen) {
      advance();
      NodePtr e = expr();
      if (tok_.kind != Token::RParen) throw ParseError(tok_.pos, "expected ')'");
      advance();
      return e;
    }
    if (tok_.kind != Token::Ident)
      throw ParseError(tok_.pos, "expected a number, variable or function");
    const std::string name = tok_.text;
    const std::size_t pos = tok_.pos;
    advance();

    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int idx = std::stoi(name.substr(1));
      if (idx < 1 || idx > dim_)
        throw ParseError(pos, "variable " + name + " is out of range for dimension " +
                                  std::to_string(dim_));
      return std::make_shared<Var>(idx - 1);
    }

    if (name == "norm1") return std::make_shared<NormNode>(NormKind::L1);
    if (name == "norm2") return std::make_shared<NormNode>(NormKind::L2);
    if (name == "norminf") return std::make_shared<NormNode>(NormKind::LInf);
    if (name == "indicator_ball2")
      return std::make_shared<Indicator>(true, literalArg(name, pos));
    if (name == "indicator_box")
      return std::make_shared<Indicator>(false, literalArg(name, pos));
    if (name == "max" || name == "min") {
      auto args = argList(name, pos, 2, -1);
      return std::make_shared<MaxMin>(name == "max", std::move(args));
    }

    static const std::pair<const char*, Fn> unaryFns[] = {
        {"abs", Fn::Abs},   {"sqrt", Fn::Sqrt}, {"exp", Fn::Exp},  {"log", Fn::Log},
        {"cosh", Fn::Cosh}, {"sinh", Fn::Sinh}, {"tanh", Fn::Tanh}};
    for (const auto& [fname, fn] : unaryFns) {
      if (name == fname) {
        auto args = argList(name, pos, 1, 1);
        return std::make_shared<Call>(fn, args[0]);
      }
    }
    throw ParseError(pos, "unknown identifier '" + name + "'");
  }

  Lexer lexer_;
  Token tok_;
  int dim_;
};

}  // namespace

ScalarFunction parseObjective(const std::string& text, int dim, FunctionFlags flags) {
  if (dim < 1) throw std::invalid_argument("objective dimension must be at least 1");
  Parser parser(text, dim);
  NodePtr root = parser.parse();

  std::vector<NodePtr> partials;
  bool smooth = true;
  for (int k = 0; k < dim && smooth; ++k) {
    auto d = root->diff(k);
    if (!d)
      smooth = false;
    else
      partials.push_back(*d);
  }

  auto eval = [root](const Vector& x) { return root->eval(x); };
  ScalarFunction::Grad grad = nullptr;
  if (smooth) {
    grad = [partials](const Vector& x) {
      Vector g(x.size());
      for (Eigen::Index k = 0; k < x.size(); ++k) g[k] = partials[k]->eval(x);
      return g;
    };
  }
  return ScalarFunction(text, dim, std::move(eval), flags, std::move(grad));
}

}  // namespace symvp
