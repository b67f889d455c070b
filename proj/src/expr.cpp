#include "shockform/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "shockform/errors.hpp"

namespace shockform {

struct Expr::Node {
  enum class Kind { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Fn } kind;
  double value = 0.0;
  std::string name;  // variable or function name
  std::shared_ptr<const Node> a, b;
};

using Kind = Expr::Node::Kind;

namespace {

bool known_function(std::string_view f) {
  return f == "sin" || f == "cos" || f == "exp" || f == "log" || f == "sqrt";
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ExpressionInvalid,
                why + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (eat('+'))
        e = e + term();
      else if (eat('-'))
        e = e - term();
      else
        return e;
    }
  }
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (eat('*'))
        e = e * unary();
      else if (eat('/'))
        e = e / unary();
      else
        return e;
    }
  }
  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (eat('^')) return pow(base, unary());  // right associative
    return base;
  }
  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("bad number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return Expr::number(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (known_function(id)) {
        if (!eat('(')) fail("expected '(' after " + id);
        Expr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return Expr::apply(id, arg);
      }
      if (id == "pi") return Expr::number(M_PI);
      for (const auto& v : vars_)
        if (v == id) return Expr::variable(id);
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

std::shared_ptr<const Expr::Node> make(Kind k, std::shared_ptr<const Expr::Node> a = nullptr,
                                       std::shared_ptr<const Expr::Node> b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

Expr Expr::parse(std::string_view text, const std::vector<std::string>& variables) {
  return Parser(text, variables).run();
}

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->value = v;
  return Expr(n);
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Expr(n);
}

bool Expr::is_constant(double* value) const {
  if (node_ && node_->kind == Kind::Num) {
    if (value) *value = node_->value;
    return true;
  }
  return false;
}

// Constructors fold constants and drop neutral elements so that repeated
// differentiation stays small.
Expr operator+(const Expr& a, const Expr& b) {
  double x, y;
  const bool ca = a.is_constant(&x), cb = b.is_constant(&y);
  if (ca && cb) return Expr::number(x + y);
  if (ca && x == 0.0) return b;
  if (cb && y == 0.0) return a;
  return Expr(make(Kind::Add, a.node_, b.node_));
}

Expr operator-(const Expr& a, const Expr& b) {
  double x, y;
  const bool ca = a.is_constant(&x), cb = b.is_constant(&y);
  if (ca && cb) return Expr::number(x - y);
  if (cb && y == 0.0) return a;
  if (ca && x == 0.0) return -b;
  return Expr(make(Kind::Sub, a.node_, b.node_));
}

Expr operator*(const Expr& a, const Expr& b) {
  double x, y;
  const bool ca = a.is_constant(&x), cb = b.is_constant(&y);
  if (ca && cb) return Expr::number(x * y);
  if ((ca && x == 0.0) || (cb && y == 0.0)) return Expr::number(0.0);
  if (ca && x == 1.0) return b;
  if (cb && y == 1.0) return a;
  return Expr(make(Kind::Mul, a.node_, b.node_));
}

Expr operator/(const Expr& a, const Expr& b) {
  double x, y;
  const bool ca = a.is_constant(&x), cb = b.is_constant(&y);
  if (ca && cb && y != 0.0) return Expr::number(x / y);
  if (ca && x == 0.0) return Expr::number(0.0);
  if (cb && y == 1.0) return a;
  return Expr(make(Kind::Div, a.node_, b.node_));
}

Expr operator-(const Expr& a) {
  double x;
  if (a.is_constant(&x)) return Expr::number(-x);
  if (a.node_->kind == Kind::Neg) return Expr(a.node_->a);
  return Expr(make(Kind::Neg, a.node_));
}

Expr pow(const Expr& a, const Expr& b) {
  double x, y;
  const bool ca = a.is_constant(&x), cb = b.is_constant(&y);
  if (ca && cb) return Expr::number(std::pow(x, y));
  if (cb && y == 0.0) return Expr::number(1.0);
  if (cb && y == 1.0) return a;
  return Expr(make(Kind::Pow, a.node_, b.node_));
}

Expr Expr::apply(std::string_view fn, const Expr& arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Fn;
  n->name = std::string(fn);
  n->a = arg.node_;
  double x;
  if (arg.is_constant(&x))
    return number(Expr(n).eval({}));
  return Expr(n);
}

double Expr::eval(const std::map<std::string, double, std::less<>>& env) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Num: return n.value;
    case Kind::Var: {
      auto it = env.find(n.name);
      if (it == env.end()) throw Error(ErrorCode::ExpressionInvalid, "unbound variable " + n.name);
      return it->second;
    }
    case Kind::Add: return Expr(n.a).eval(env) + Expr(n.b).eval(env);
    case Kind::Sub: return Expr(n.a).eval(env) - Expr(n.b).eval(env);
    case Kind::Mul: return Expr(n.a).eval(env) * Expr(n.b).eval(env);
    case Kind::Div: return Expr(n.a).eval(env) / Expr(n.b).eval(env);
    case Kind::Neg: return -Expr(n.a).eval(env);
    case Kind::Pow: {
      const double base = Expr(n.a).eval(env);
      double e;
      if (Expr(n.b).is_constant(&e) && e == std::round(e) && std::fabs(e) <= 16) {
        // integer power: exact for negative bases
        double r = 1.0;
        for (int k = 0; k < std::abs(static_cast<int>(e)); ++k) r *= base;
        return e < 0 ? 1.0 / r : r;
      }
      return std::pow(base, Expr(n.b).eval(env));
    }
    case Kind::Fn: {
      const double x = Expr(n.a).eval(env);
      if (n.name == "sin") return std::sin(x);
      if (n.name == "cos") return std::cos(x);
      if (n.name == "exp") return std::exp(x);
      if (n.name == "log") return std::log(x);
      return std::sqrt(x);
    }
  }
  return 0.0;
}

Expr Expr::derivative(std::string_view var) const {
  const Node& n = *node_;
  const Expr a(n.a), b(n.b);
  switch (n.kind) {
    case Kind::Num: return number(0.0);
    case Kind::Var: return number(n.name == var ? 1.0 : 0.0);
    case Kind::Add: return a.derivative(var) + b.derivative(var);
    case Kind::Sub: return a.derivative(var) - b.derivative(var);
    case Kind::Mul: return a.derivative(var) * b + a * b.derivative(var);
    case Kind::Div: return (a.derivative(var) * b - a * b.derivative(var)) / (b * b);
    case Kind::Neg: return -a.derivative(var);
    case Kind::Pow: {
      double e;
      if (b.is_constant(&e)) return number(e) * pow(a, number(e - 1.0)) * a.derivative(var);
      return *this * (b.derivative(var) * apply("log", a) + b * a.derivative(var) / a);
    }
    case Kind::Fn: {
      const Expr da = a.derivative(var);
      if (n.name == "sin") return apply("cos", a) * da;
      if (n.name == "cos") return -(apply("sin", a) * da);
      if (n.name == "exp") return *this * da;
      if (n.name == "log") return da / a;
      return da / (number(2.0) * *this);
    }
  }
  return number(0.0);
}

std::string Expr::str() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(17);
  switch (n.kind) {
    case Kind::Num: os << n.value; break;
    case Kind::Var: os << n.name; break;
    case Kind::Add: os << "(" << Expr(n.a).str() << " + " << Expr(n.b).str() << ")"; break;
    case Kind::Sub: os << "(" << Expr(n.a).str() << " - " << Expr(n.b).str() << ")"; break;
    case Kind::Mul: os << "(" << Expr(n.a).str() << " * " << Expr(n.b).str() << ")"; break;
    case Kind::Div: os << "(" << Expr(n.a).str() << " / " << Expr(n.b).str() << ")"; break;
    case Kind::Neg: os << "(-" << Expr(n.a).str() << ")"; break;
    case Kind::Pow: os << "(" << Expr(n.a).str() << " ^ " << Expr(n.b).str() << ")"; break;
    case Kind::Fn: os << n.name << "(" << Expr(n.a).str() << ")"; break;
  }
  return os.str();
}

ProblemDefinition expression_problem(std::string_view flux_x, std::string_view flux_y,
                                     std::string_view initial, Box box) {
  auto flux = [](std::string_view text) {
    std::array<Expr, 6> d;
    d[0] = Expr::parse(text, {"u"});
    for (int k = 1; k < 6; ++k) d[k] = d[k - 1].derivative("u");
    return FluxEvaluator([d](double u) {
      const std::map<std::string, double, std::less<>> env{{"u", u}};
      FluxJet j;
      j.primitive = d[0].eval(env);
      for (int k = 0; k < 5; ++k) j.speed[k] = d[k + 1].eval(env);
      return j;
    });
  };

  const Expr u0 = Expr::parse(initial, {"x", "y"});
  // partials[i][j] = d^(i+j) u0 / dx^i dy^j
  std::vector<std::vector<Expr>> partials(kSeriesMaxOrder + 1);
  for (int i = 0; i <= kSeriesMaxOrder; ++i) {
    partials[i].resize(kSeriesMaxOrder + 1 - i);
    partials[i][0] = i == 0 ? u0 : partials[i - 1][0].derivative("x");
    for (int j = 1; i + j <= kSeriesMaxOrder; ++j)
      partials[i][j] = partials[i][j - 1].derivative("y");
  }

  ProblemDefinition def;
  def.flux_x = flux(flux_x);
  def.flux_y = flux(flux_y);
  def.initial = [partials](double x, double y, int order) {
    const std::map<std::string, double, std::less<>> env{{"x", x}, {"y", y}};
    Series2 s(order);
    for (int i = 0; i <= order; ++i)
      for (int j = 0; i + j <= order; ++j) s.set_partial({i, j}, partials[i][j].eval(env));
    return s;
  };
  def.box = box;
  return def;
}

}  // namespace shockform
