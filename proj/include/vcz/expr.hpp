#pragma once

// Small prefix-notation expression trees used to declare plant dynamics,
// virtual dynamics and custom obstacle paths in scenario files.
//
//   expr := number | t | x<i> | ( op expr... )
//   op   := + | - | * | sin | cos
//
// '+' and '*' are n-ary, '-' is unary negation or binary subtraction.
// State variables are 1-based (x1, x2, ...).

#include <charconv>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <Eigen/Dense>

#include "vcz/errors.hpp"

namespace vcz {

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Exact equality that tolerates differing shapes (Eigen's operator== asserts on them).
template <class A, class B>
bool same_values(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

class Expr {
 public:
  enum class Op { Const, Time, Var, Add, Sub, Mul, Sin, Cos };

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double v) { return Expr(std::make_shared<Node>(Node{Op::Const, v, 0, {}})); }
  static Expr time() { return Expr(std::make_shared<Node>(Node{Op::Time, 0.0, 0, {}})); }
  /// 0-based state index.
  static Expr var(int index) {
    if (index < 0) throw InvalidInput("expression variable index must be >= 0");
    return Expr(std::make_shared<Node>(Node{Op::Var, 0.0, index, {}}));
  }
  static Expr apply(Op op, std::vector<Expr> args) {
    std::size_t n = args.size();
    bool ok = (op == Op::Add || op == Op::Mul) ? n >= 1
              : op == Op::Sub                  ? (n == 1 || n == 2)
              : (op == Op::Sin || op == Op::Cos) ? n == 1
                                                 : false;
    if (!ok) throw InvalidInput("bad arity for expression operator");
    return Expr(std::make_shared<Node>(Node{op, 0.0, 0, std::move(args)}));
  }

  static Expr parse(std::string_view text) {
    std::size_t pos = 0;
    Expr e = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size())
      throw InvalidInput("trailing characters in expression: '" + std::string(text.substr(pos)) + "'");
    return e;
  }

  double eval(const Eigen::VectorXd& x, double t) const { return eval_node(*node_, x, t); }

  /// Highest 0-based variable index referenced, or -1 when the expression is state-free.
  int max_var_index() const { return max_var(*node_); }

  std::string to_string() const {
    std::string out;
    print(*node_, out);
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b) { return a.to_string() == b.to_string(); }

 private:
  struct Node {
    Op op;
    double value;
    int index;
    std::vector<Expr> args;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static double eval_node(const Node& n, const Eigen::VectorXd& x, double t) {
    switch (n.op) {
      case Op::Const:
        return n.value;
      case Op::Time:
        return t;
      case Op::Var:
        if (n.index >= x.size()) throw InvalidInput("expression references x" + std::to_string(n.index + 1) +
                                                    " but state has dimension " + std::to_string(x.size()));
        return x[n.index];
      case Op::Add: {
        double s = 0.0;
        for (const auto& a : n.args) s += a.eval(x, t);
        return s;
      }
      case Op::Mul: {
        double p = 1.0;
        for (const auto& a : n.args) p *= a.eval(x, t);
        return p;
      }
      case Op::Sub:
        return n.args.size() == 1 ? -n.args[0].eval(x, t) : n.args[0].eval(x, t) - n.args[1].eval(x, t);
      case Op::Sin:
        return std::sin(n.args[0].eval(x, t));
      case Op::Cos:
        return std::cos(n.args[0].eval(x, t));
    }
    return 0.0;
  }

  static int max_var(const Node& n) {
    int m = n.op == Op::Var ? n.index : -1;
    for (const auto& a : n.args) m = std::max(m, a.max_var_index());
    return m;
  }

  static void print(const Node& n, std::string& out) {
    switch (n.op) {
      case Op::Const:
        out += format_double(n.value);
        return;
      case Op::Time:
        out += "t";
        return;
      case Op::Var:
        out += "x" + std::to_string(n.index + 1);
        return;
      default:
        break;
    }
    static constexpr const char* names[] = {"", "", "", "+", "-", "*", "sin", "cos"};
    out += "(";
    out += names[static_cast<int>(n.op)];
    for (const auto& a : n.args) {
      out += " ";
      print(*a.node_, out);
    }
    out += ")";
  }

  static void skip_ws(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  static std::string_view token(std::string_view s, std::size_t& pos) {
    skip_ws(s, pos);
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
           s[pos] != ')')
      ++pos;
    return s.substr(start, pos - start);
  }

  static Expr parse_at(std::string_view s, std::size_t& pos) {
    skip_ws(s, pos);
    if (pos >= s.size()) throw InvalidInput("unexpected end of expression");
    if (s[pos] == ')') throw InvalidInput("unexpected ')' in expression");
    if (s[pos] == '(') {
      ++pos;
      std::string_view name = token(s, pos);
      Op op;
      if (name == "+") op = Op::Add;
      else if (name == "-") op = Op::Sub;
      else if (name == "*") op = Op::Mul;
      else if (name == "sin") op = Op::Sin;
      else if (name == "cos") op = Op::Cos;
      else throw InvalidInput("unknown operator '" + std::string(name) + "'");
      std::vector<Expr> args;
      for (;;) {
        skip_ws(s, pos);
        if (pos >= s.size()) throw InvalidInput("missing ')' in expression");
        if (s[pos] == ')') {
          ++pos;
          break;
        }
        args.push_back(parse_at(s, pos));
      }
      return apply(op, std::move(args));
    }
    std::string_view tok = token(s, pos);
    if (tok == "t") return time();
    if (tok.size() >= 2 && tok[0] == 'x') {
      int idx = 0;
      auto res = std::from_chars(tok.data() + 1, tok.data() + tok.size(), idx);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || idx < 1)
        throw InvalidInput("bad variable '" + std::string(tok) + "'");
      return var(idx - 1);
    }
    double v = 0.0;
    if (!parse_double(tok, v)) throw InvalidInput("bad number '" + std::string(tok) + "'");
    return constant(v);
  }

  std::shared_ptr<const Node> node_;
};

/// Column of expressions evaluated as an n-vector.
struct VectorField {
  std::vector<Expr> comps;

  Eigen::Index size() const { return static_cast<Eigen::Index>(comps.size()); }
  Eigen::VectorXd eval(const Eigen::VectorXd& x, double t) const {
    Eigen::VectorXd out(size());
    for (Eigen::Index i = 0; i < size(); ++i) out[i] = comps[i].eval(x, t);
    return out;
  }
  int max_var_index() const {
    int m = -1;
    for (const auto& e : comps) m = std::max(m, e.max_var_index());
    return m;
  }
  static VectorField constant(const Eigen::VectorXd& v) {
    VectorField f;
    for (Eigen::Index i = 0; i < v.size(); ++i) f.comps.push_back(Expr::constant(v[i]));
    return f;
  }
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Row-major grid of expressions evaluated as a rows x cols matrix.
struct MatrixField {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<Expr> entries;

  Eigen::MatrixXd eval(const Eigen::VectorXd& x, double t) const {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = entries[i * cols + j].eval(x, t);
    return out;
  }
  int max_var_index() const {
    int m = -1;
    for (const auto& e : entries) m = std::max(m, e.max_var_index());
    return m;
  }
  static MatrixField constant(const Eigen::MatrixXd& a) {
    MatrixField f{a.rows(), a.cols(), {}};
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) f.entries.push_back(Expr::constant(a(i, j)));
    return f;
  }
  friend bool operator==(const MatrixField&, const MatrixField&) = default;
};

}  // namespace vcz
