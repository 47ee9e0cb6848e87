#include <albert/parse.hpp>
#include <albert/scenario.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

namespace albert {

std::string_view command_name(Command c) {
  switch (c) {
    case Command::CheckAxioms: return "check-axioms";
    case Command::VerifyMap: return "verify-map";
    case Command::BuildCert: return "build-cert";
    case Command::CheckCert: return "check-cert";
  }
  return "?";
}

int exit_status(Errc code) {
  switch (code) {
    case Errc::ParseError: return 2;
    case Errc::UnresolvedReference: return 3;
    case Errc::IoError: return 5;
    default: return 4;
  }
}

namespace {

// ---------------------------------------------------------------- syntax

struct Node;
struct Arg;

struct Node {
  std::string text;  // trimmed source text
  std::size_t line = 0, col = 0;
  std::string head;  // call name; empty for an atom
  std::vector<Arg> args;

  bool is_call() const { return !head.empty(); }
  std::string where() const { return "line " + std::to_string(line) + ", column " + std::to_string(col) + ": "; }
};

struct Arg {
  std::string key;  // empty for positional
  Node value;
};

bool is_ident(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

// Strips the "code: " prefix that Error adds, so rethrown messages keep one.
std::string bare_message(const Error& e) {
  std::string msg = e.what();
  const std::string prefix = std::string(errc_name(e.code())) + ": ";
  if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
  return msg;
}

[[noreturn]] void fail(Errc code, const Node& at, const std::string& msg) { throw Error(code, at.where() + msg); }

[[noreturn]] void fail_at(Errc code, std::size_t line, std::size_t col, const std::string& msg) {
  throw Error(code, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

bool opens(char c) { return c == '(' || c == '[' || c == '{'; }
bool closes(char c) { return c == ')' || c == ']' || c == '}'; }
char partner(char c) { return c == ')' ? '(' : c == ']' ? '[' : '{'; }

// Offsets [begin, end) of the pieces of `s` between top-level separators.
std::vector<std::pair<std::size_t, std::size_t>> split_top(std::string_view s, char sep, std::size_t line,
                                                            std::size_t col) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::string stack;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (opens(c)) {
      stack.push_back(c);
    } else if (closes(c)) {
      if (stack.empty() || stack.back() != partner(c))
        fail_at(Errc::ParseError, line, col + i, std::string("unbalanced '") + c + "'");
      stack.pop_back();
    } else if (c == sep && stack.empty()) {
      out.emplace_back(start, i);
      start = i + 1;
    }
  }
  if (!stack.empty()) fail_at(Errc::ParseError, line, col + s.size(), "missing closing bracket");
  out.emplace_back(start, s.size());
  return out;
}

Node parse_node(std::string_view s, std::size_t line, std::size_t col) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  Node n;
  n.line = line;
  n.col = col + b;
  n.text = std::string(s.substr(b, e - b));
  if (n.text.empty()) fail_at(Errc::ParseError, line, col + b, "empty expression");
  split_top(n.text, '\0', line, n.col);  // bracket balance

  std::size_t i = 0;
  while (i < n.text.size() && (std::isalnum(static_cast<unsigned char>(n.text[i])) || n.text[i] == '_')) ++i;
  if (i == 0 || i >= n.text.size() || n.text[i] != '(' || n.text.back() != ')' || !is_ident(n.text.substr(0, i)))
    return n;
  // The call form needs the opening parenthesis to close at the very end.
  int depth = 0;
  for (std::size_t k = i; k < n.text.size(); ++k) {
    if (opens(n.text[k])) ++depth;
    if (closes(n.text[k]) && --depth == 0 && k + 1 != n.text.size()) return n;
  }
  n.head = n.text.substr(0, i);
  const std::string_view inner = std::string_view(n.text).substr(i + 1, n.text.size() - i - 2);
  const std::size_t inner_col = n.col + i + 1;
  bool blank = true;
  for (char ch : inner) blank = blank && std::isspace(static_cast<unsigned char>(ch));
  if (blank) return n;
  for (const auto& [from, to] : split_top(inner, ',', line, inner_col)) {
    std::string_view piece = inner.substr(from, to - from);
    Arg a;
    const auto eq = split_top(piece, '=', line, inner_col + from);
    if (eq.size() == 2) {
      std::string key(piece.substr(eq[0].first, eq[0].second - eq[0].first));
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      if (!is_ident(key)) fail_at(Errc::ParseError, line, inner_col + from, "invalid argument name '" + key + "'");
      a.key = key;
      a.value = parse_node(piece.substr(eq[1].first), line, inner_col + from + eq[1].first);
    } else if (eq.size() > 2) {
      fail_at(Errc::ParseError, line, inner_col + from, "unexpected '='");
    } else {
      a.value = parse_node(piece, line, inner_col + from);
    }
    n.args.push_back(std::move(a));
  }
  return n;
}

// Keyword and positional argument lookup with unknown-name detection.
class Args {
 public:
  Args(const Node& call, std::vector<std::string> names) : call_(call), names_(std::move(names)) {
    bool keyed = false;
    for (std::size_t i = 0; i < call.args.size(); ++i) {
      const Arg& a = call.args[i];
      std::string name = a.key;
      if (name.empty()) {
        if (keyed) fail(Errc::ParseError, a.value, "positional argument after a keyword argument");
        if (i >= names_.size()) fail(Errc::ParseError, a.value, call.head + " takes at most " + std::to_string(names_.size()) + " arguments");
        name = names_[i];
      } else {
        keyed = true;
        if (std::find(names_.begin(), names_.end(), name) == names_.end())
          fail(Errc::ParseError, a.value, call.head + " has no argument '" + name + "'");
      }
      if (!given_.emplace(name, &a.value).second) fail(Errc::ParseError, a.value, "argument '" + name + "' given twice");
    }
  }

  const Node* find(const std::string& name) const {
    auto it = given_.find(name);
    return it == given_.end() ? nullptr : it->second;
  }
  const Node& get(const std::string& name) const {
    if (const Node* n = find(name)) return *n;
    fail(Errc::ParseError, call_, call_.head + " needs argument '" + name + "'");
  }

 private:
  const Node& call_;
  std::vector<std::string> names_;
  std::map<std::string, const Node*> given_;
};

std::size_t parse_count(const Node& n) {
  if (n.is_call() || n.text.empty() || n.text.find_first_not_of("0123456789") != std::string::npos || n.text.size() > 9)
    fail(Errc::ParseError, n, "expected a non-negative integer, got '" + n.text + "'");
  return std::stoul(n.text);
}

std::uint64_t parse_seed(const Node& n) {
  if (n.is_call() || n.text.empty() || n.text.find_first_not_of("0123456789") != std::string::npos || n.text.size() > 19)
    fail(Errc::ParseError, n, "expected a seed, got '" + n.text + "'");
  return std::stoull(n.text);
}

bool parse_bool(const Node& n) {
  if (n.text == "true" || n.text == "yes") return true;
  if (n.text == "false" || n.text == "no") return false;
  fail(Errc::ParseError, n, "expected true or false, got '" + n.text + "'");
}

std::string parse_choice(const Node& n, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (n.text == o) return n.text;
  std::string all;
  for (const char* o : options) all += std::string(all.empty() ? "" : ", ") + o;
  fail(Errc::ParseError, n, "expected one of " + all + ", got '" + n.text + "'");
}

const std::set<std::string> kReserved = {"run", "one", "zero", "unit", "switch", "conjtrans"};

bool is_split(const RingPtr& r) {
  return r->kind() == RingKind::Extension && r->degree() == 2 && r->lower()[0].is_zero() &&
         (r->lower()[1] + 1).is_zero();
}

// ---------------------------------------------------------------- bindings

struct JordanRef {
  JordanPtr j;
  FirstTitsPtr first;
  SecondTitsPtr second;
};

struct Binding {
  enum class Kind { Field, Algebra, Jordan, Deferred } kind = Kind::Deferred;
  RingPtr field;
  AlgebraPtr alg;
  JordanRef jordan;
  Node node;  // deferred: resolved at the use site
};

const std::set<std::string> kAlgebraForms = {"matrix3", "cyclic", "prodop", "etale", "cubic_etale"};
const std::set<std::string> kJordanForms = {"first_tits", "second_tits", "plus"};
const std::set<std::string> kElementForms = {"diag", "e", "E", "coords", "pair", "jvec"};
const std::set<std::string> kInvolutionForms = {"utwist"};
const std::set<std::string> kMapForms = {"identity",       "homothety",       "u_map",          "aut_conj_I",
                                         "aut_J",          "aut_ext_D",       "str_ext_D",      "aut_ext_second",
                                         "aut_stab_second", "str_ext_second", "chi",            "compose",
                                         "invert"};
const std::set<std::string> kPathForms = {"conj_path", "sl1_path", "str_path"};

struct MapSpec {
  JordanPtr parent;
  std::function<SimilarityMap()> make;
};

struct DirectiveOutput {
  std::vector<CheckResult> checks;
  std::vector<RCertificate> certs;
};

CheckResult make_check(std::string id, std::string label, bool pass, std::string mode, std::size_t n,
                       std::string detail) {
  CheckResult c;
  c.id = std::move(id);
  c.label = std::move(label);
  c.pass = pass;
  c.mode = std::move(mode);
  c.instances = n;
  c.detail = std::move(detail);
  return c;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

class Resolver {
 public:
  explicit Resolver(const std::map<std::string, Binding>& env) : env_(env) {}

  const Binding* lookup(const Node& n) const {
    if (n.is_call() || !is_ident(n.text)) return nullptr;
    auto it = env_.find(n.text);
    return it == env_.end() ? nullptr : &it->second;
  }

  // Runs `f`, attaching the node's location to library errors.
  template <class F>
  auto located(const Node& n, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const Error& e) {
      const std::string msg = bare_message(e);
      if (msg.rfind("line ", 0) == 0) throw;
      throw Error(e.code(), n.where() + msg);
    }
  }

  [[noreturn]] void unresolved_or(const Node& n, const std::string& expected) const {
    if (!n.is_call() && is_ident(n.text) && !kReserved.count(n.text))
      fail(Errc::UnresolvedReference, n, "'" + n.text + "' is not declared");
    fail(Errc::InvalidArgument, n, "expected " + expected + ", got '" + n.text + "'");
  }

  // ---------------------------------------------------------------- fields and algebras

  RingPtr field(const Node& n) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Field) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not a field");
      return b->field;
    }
    try {
      return parse_field(n.text);
    } catch (const Error& e) {
      if (is_ident(n.text) && n.text != "Q" && !(n.text.size() > 1 && n.text[0] == 'F'))
        fail(Errc::UnresolvedReference, n, "'" + n.text + "' is not declared");
      throw Error(e.code(), n.where() + bare_message(e));
    }
  }

  AlgebraPtr algebra(const Node& n) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Algebra) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not an algebra");
      return b->alg;
    }
    if (!n.is_call() || !kAlgebraForms.count(n.head)) unresolved_or(n, "an algebra");
    if (n.head == "matrix3") {
      Args a(n, {"field"});
      return Algebra::matrix3(field(a.get("field")));
    }
    if (n.head == "prodop") {
      Args a(n, {"algebra"});
      return located(n, [&] { return Algebra::prodop(algebra(a.get("algebra"))); });
    }
    if (n.head == "etale" || n.head == "cubic_etale") {
      Args a(n, {"field"});
      const RingPtr l = cubic_extension(a.get("field"));
      return located(n, [&] { return Algebra::cubic_etale(l->base(), l->lower(), l->generator_name()); });
    }
    Args a(n, {"field", "rho", "b"});
    const RingPtr l = cubic_extension(a.get("field"));
    const Node& rn = a.get("rho");
    const Scalar rho = located(rn, [&] {
      if (rn.text == "1" || rn.text == "2") return Algebra::cyclic_generator_image(l, rn.text == "1" ? 1 : 2);
      return scalar(rn, l);
    });
    const Scalar bb = scalar(a.get("b"), l->base());
    return located(n, [&] { return Algebra::cyclic(l, rho, bb); });
  }

  RingPtr cubic_extension(const Node& n) const {
    RingPtr l = field(n);
    if (l->kind() != RingKind::Extension || l->degree() != 3)
      fail(Errc::InvalidArgument, n, "expected a cubic extension k[x]/(f), got " + l->to_string());
    return l;
  }

  // ---------------------------------------------------------------- constructions

  JordanRef jordan(const Node& n) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Jordan) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not a construction");
      return b->jordan;
    }
    if (!n.is_call() || !kJordanForms.count(n.head)) unresolved_or(n, "a construction");
    JordanRef r;
    if (n.head == "plus") {
      Args a(n, {"algebra"});
      const AlgebraPtr d = algebra(a.get("algebra"));
      r.j = located(n, [&] { return std::make_shared<const DPlus>(d); });
      return r;
    }
    if (n.head == "first_tits") {
      Args a(n, {"algebra", "lambda", "division"});
      const AlgebraPtr d = algebra(a.get("algebra"));
      const Scalar lambda = scalar(a.get("lambda"), d->base());
      std::optional<bool> division;
      if (const Node* dv = a.find("division")) division = parse_bool(*dv);
      r.first = located(n, [&] { return std::make_shared<FirstTits>(d, lambda, division); });
      r.j = r.first;
      return r;
    }
    Args a(n, {"algebra", "sigma", "u", "mu"});
    const AlgebraPtr b = algebra(a.get("algebra"));
    const InvolutionPtr sigma = involution(a.get("sigma"), b);
    const Deg3Element u = a.find("u") ? element(a.get("u"), b) : d3_one(b);
    const Scalar mu = a.find("mu") ? scalar(a.get("mu"), b->norm_ring()) : Scalar::one(b->norm_ring());
    r.second = located(n, [&] { return std::make_shared<SecondTits>(sigma, u, mu); });
    r.j = r.second;
    return r;
  }

  FirstTitsPtr first(const Node& n, const std::string& form) const {
    JordanRef r = jordan(n);
    if (!r.first) fail(Errc::InvalidArgument, n, form + " needs a first construction");
    return r.first;
  }

  SecondTitsPtr second(const Node& n, const std::string& form) const {
    JordanRef r = jordan(n);
    if (!r.second) fail(Errc::InvalidArgument, n, form + " needs a second construction");
    return r.second;
  }

  InvolutionPtr involution(const Node& n, const AlgebraPtr& alg) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not an involution");
      return involution(b->node, alg);
    }
    return located(n, [&]() -> InvolutionPtr {
      if (n.text == "switch") return Involution::switch_involution(alg);
      if (n.text == "conjtrans") return Involution::conj_transpose(alg);
      if (n.head != "utwist") unresolved_or(n, "an involution");
      Args a(n, {"base", "u"});
      InvolutionPtr base;
      if (const Node* bn = a.find("base"))
        base = involution(*bn, alg);
      else
        base = alg->kind() == AlgebraKind::ProdOp ? Involution::switch_involution(alg) : Involution::conj_transpose(alg);
      return Involution::utwist(base, element(a.get("u"), alg));
    });
  }

  // ---------------------------------------------------------------- literals

  Scalar scalar(const Node& n, const RingPtr& ring) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not a scalar");
      return scalar(b->node, ring);
    }
    if (n.is_call()) fail(Errc::InvalidArgument, n, "expected a scalar, got '" + n.text + "'");
    if (is_split(ring) && n.text.front() == '(') {
      const Node inner = parse_node(std::string_view(n.text).substr(1, n.text.size() - 2), n.line, n.col + 1);
      const auto parts = split_top(inner.text, ',', inner.line, inner.col);
      if (parts.size() == 2 && n.text.back() == ')') {
        const Node x = parse_node(std::string_view(inner.text).substr(parts[0].first, parts[0].second - parts[0].first),
                                  inner.line, inner.col + parts[0].first);
        const Node y = parse_node(std::string_view(inner.text).substr(parts[1].first), inner.line,
                                  inner.col + parts[1].first);
        return split_from_components(ring, scalar(x, ring->base()), scalar(y, ring->base()));
      }
    }
    try {
      return parse_scalar(n.text, ring);
    } catch (const Error& e) {
      if (is_ident(n.text)) fail(Errc::UnresolvedReference, n, "'" + n.text + "' is not declared or a generator of " + ring->to_string());
      throw Error(e.code(), n.where() + bare_message(e));
    }
  }

  std::vector<Scalar> scalars(const Node& n, std::size_t count, const RingPtr& ring) const {
    if (n.args.size() != count)
      fail(Errc::InvalidArgument, n, n.head + " expects " + std::to_string(count) + " entries, got " + std::to_string(n.args.size()));
    std::vector<Scalar> out;
    for (const Arg& a : n.args) {
      if (!a.key.empty()) fail(Errc::ParseError, a.value, "unexpected keyword in " + n.head);
      out.push_back(scalar(a.value, ring));
    }
    return out;
  }

  // "(a, b, ...)" read as a coordinate tuple.
  std::optional<Node> tuple(const Node& n) const {
    if (n.is_call() || n.text.size() < 2 || n.text.front() != '(' || n.text.back() != ')') return std::nullopt;
    Node t = parse_node("coords" + n.text, n.line, n.col - 6);
    return t.is_call() ? std::optional<Node>(t) : std::nullopt;
  }

  std::size_t index(const Node& n) const {
    const std::size_t i = parse_count(n);
    if (i < 1 || i > 3) fail(Errc::InvalidArgument, n, "matrix index must be 1, 2 or 3");
    return i - 1;
  }

  Deg3Element element(const Node& n, const AlgebraPtr& alg) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not an element");
      return element(b->node, alg);
    }
    if (!n.is_call()) {
      const auto factors = split_top(n.text, '*', n.line, n.col);
      if (factors.size() > 1) {
        std::optional<Deg3Element> acc;
        for (const auto& [from, to] : factors) {
          Deg3Element f = element(parse_node(std::string_view(n.text).substr(from, to - from), n.line, n.col + from), alg);
          acc = acc ? located(n, [&] { return *acc * f; }) : f;
        }
        return *acc;
      }
      if (n.text == "one") return d3_one(alg);
      if (n.text == "zero") return d3_zero(alg, alg->base());
      if (auto t = tuple(n)) return element(*t, alg);
      if (alg->kind() == AlgebraKind::CubicEtale) {
        const Scalar s = scalar(n, alg->etale());
        return make_element(alg, {ext_coeff(s, 0), ext_coeff(s, 1), ext_coeff(s, 2)});
      }
      RingPtr r = alg->norm_ring();
      return located(n, [&] { return d3_central(alg, scalar(n, r)); });
    }
    const std::string& h = n.head;
    if (h == "coords") return located(n, [&] { return make_element(alg, scalars(n, alg->dim(), alg->base())); });
    if (h == "pair") {
      if (alg->kind() != AlgebraKind::ProdOp) fail(Errc::InvalidArgument, n, "pair(...) needs a prodop algebra");
      Args a(n, {"x", "y"});
      const AlgebraPtr& d = alg->inner();
      return located(n, [&] { return pair_element(alg, element(a.get("x"), d), element(a.get("y"), d)); });
    }
    if (h == "diag" || h == "e" || h == "E") {
      if (alg->kind() != AlgebraKind::Matrix3) fail(Errc::InvalidArgument, n, h + "(...) needs a matrix3 algebra");
      if (h == "diag") {
        const auto d = scalars(n, 3, alg->base());
        return diag3(alg, d[0], d[1], d[2]);
      }
      if (h == "e") {
        Args a(n, {"i", "j"});
        return unit_e(alg, index(a.get("i")), index(a.get("j")));
      }
      Args a(n, {"i", "j", "alpha"});
      const std::size_t i = index(a.get("i")), j = index(a.get("j"));
      if (i == j) fail(Errc::InvalidArgument, n, "a transvection needs i != j");
      return transvection(alg, i, j, scalar(a.get("alpha"), alg->base()));
    }
    fail(Errc::InvalidArgument, n, "expected an element, got '" + n.text + "'");
  }

  Vec jvec(const Node& n, const JordanRef& r) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not an element");
      return jvec(b->node, r);
    }
    if (n.text == "one" || n.text == "unit") return r.j->unit();
    if (n.text == "zero") return zero_vector(r.j->base_ring(), r.j->dim());
    if (auto t = tuple(n)) return jvec(*t, r);
    if (n.head == "coords") return scalars(n, r.j->dim(), r.j->base_ring());
    if (n.head != "jvec") fail(Errc::InvalidArgument, n, "expected an element of the construction, got '" + n.text + "'");
    if (r.first) {
      Args a(n, {"x", "y", "z"});
      const AlgebraPtr& d = r.first->algebra();
      return located(n, [&] { return r.first->pack(element(a.get("x"), d), element(a.get("y"), d), element(a.get("z"), d)); });
    }
    if (r.second) {
      Args a(n, {"b", "x"});
      const AlgebraPtr& d = r.second->algebra();
      return located(n, [&] { return r.second->pack(element(a.get("b"), d), element(a.get("x"), d)); });
    }
    fail(Errc::InvalidArgument, n, "jvec(...) needs a Tits construction");
  }

  // ---------------------------------------------------------------- maps and paths

  JVariant variant(const Args& a) const {
    const Node* v = a.find("variant");
    return v && parse_choice(*v, {"A", "B"}) == "A" ? JVariant::A : JVariant::B;
  }

  MapSpec map(const Node& n) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not a map");
      return map(b->node);
    }
    if (!n.is_call() || !kMapForms.count(n.head)) unresolved_or(n, "a map");
    const std::string& h = n.head;
    if (h == "compose") {
      Args a(n, {"f", "g"});
      MapSpec f = map(a.get("f")), g = map(a.get("g"));
      return {f.parent, [f, g] { return compose(f.make(), g.make()); }};
    }
    if (h == "invert") {
      Args a(n, {"f"});
      MapSpec f = map(a.get("f"));
      return {f.parent, [f] { return invert(f.make()); }};
    }
    if (h == "identity") {
      Args a(n, {"J"});
      JordanPtr j = jordan(a.get("J")).j;
      return {j, [j] { return identity_map(j); }};
    }
    if (h == "homothety") {
      Args a(n, {"J", "alpha"});
      JordanPtr j = jordan(a.get("J")).j;
      Scalar s = scalar(a.get("alpha"), j->base_ring());
      return {j, [j, s] { return homothety(j, s); }};
    }
    if (h == "u_map") {
      Args a(n, {"J", "a"});
      JordanRef r = jordan(a.get("J"));
      Vec v = jvec(a.get("a"), r);
      return {r.j, [r, v] { return u_similarity(r.j, v); }};
    }
    if (h == "aut_conj_I") {
      Args a(n, {"J", "d"});
      FirstTitsPtr j = first(a.get("J"), h);
      Deg3Element d = element(a.get("d"), j->algebra());
      return {j, [j, d] { return aut_conj_I(j, d); }};
    }
    if (h == "aut_J") {
      Args a(n, {"J", "c", "variant"});
      FirstTitsPtr j = first(a.get("J"), h);
      Deg3Element c = element(a.get("c"), j->algebra());
      JVariant v = variant(a);
      return {j, [j, c, v] { return aut_J(j, c, v); }};
    }
    if (h == "aut_ext_D") {
      Args a(n, {"J", "g", "h"});
      FirstTitsPtr j = first(a.get("J"), h);
      Deg3Element g = element(a.get("g"), j->algebra()), hh = element(a.get("h"), j->algebra());
      return {j, [j, g, hh] { return aut_ext_D(j, g, hh); }};
    }
    if (h == "str_ext_D") {
      Args a(n, {"J", "gamma", "a", "b", "c"});
      FirstTitsPtr j = first(a.get("J"), h);
      const AlgebraPtr& d = j->algebra();
      Scalar g = a.find("gamma") ? scalar(a.get("gamma"), j->base_ring()) : Scalar::one(j->base_ring());
      Deg3Element x = element(a.get("a"), d), y = element(a.get("b"), d), z = element(a.get("c"), d);
      return {j, [j, g, x, y, z] { return str_ext_D(j, g, x, y, z); }};
    }
    if (h == "aut_ext_second") {
      Args a(n, {"J", "g", "q"});
      SecondTitsPtr j = second(a.get("J"), h);
      Deg3Element g = element(a.get("g"), j->algebra()), q = element(a.get("q"), j->algebra());
      return {j, [j, g, q] { return aut_ext_second(j, g, q); }};
    }
    if (h == "aut_stab_second") {
      Args a(n, {"J", "p", "q"});
      SecondTitsPtr j = second(a.get("J"), h);
      Deg3Element p = element(a.get("p"), j->algebra()), q = element(a.get("q"), j->algebra());
      return {j, [j, p, q] { return aut_stab_second(j, p, q); }};
    }
    if (h == "str_ext_second") {
      Args a(n, {"J", "gamma", "g", "q"});
      SecondTitsPtr j = second(a.get("J"), h);
      Scalar g0 = a.find("gamma") ? scalar(a.get("gamma"), j->base_ring()) : Scalar::one(j->base_ring());
      Deg3Element g = element(a.get("g"), j->algebra()), q = element(a.get("q"), j->algebra());
      return {j, [j, g0, g, q] { return str_ext_second(j, g0, g, q); }};
    }
    // chi
    Args a(n, {"J", "a", "middle"});
    FirstTitsPtr j = first(a.get("J"), h);
    Deg3Element x = element(a.get("a"), j->algebra());
    const Node* m = a.find("middle");
    ChiMiddle mid = m && parse_choice(*m, {"literal", "corrected"}) == "literal" ? ChiMiddle::Literal : ChiMiddle::Corrected;
    return {j, [j, x, mid] { return chi_map(j, x, mid); }};
  }

  std::function<RPath()> path(const Node& n) const {
    if (const Binding* b = lookup(n)) {
      if (b->kind != Binding::Kind::Deferred) fail(Errc::InvalidArgument, n, "'" + n.text + "' is not a path");
      return path(b->node);
    }
    if (!n.is_call() || !kPathForms.count(n.head)) unresolved_or(n, "a path");
    if (n.head == "conj_path") {
      Args a(n, {"J", "a"});
      FirstTitsPtr j = first(a.get("J"), n.head);
      Deg3Element x = element(a.get("a"), j->algebra());
      return [j, x] { return conj_path(j, x); };
    }
    if (n.head == "sl1_path") {
      Args a(n, {"J", "d", "variant"});
      FirstTitsPtr j = first(a.get("J"), n.head);
      Deg3Element d = element(a.get("d"), j->algebra());
      JVariant v = variant(a);
      return [j, d, v] { return sl1_path_split(j, d, v); };
    }
    Args a(n, {"J", "a", "b", "d"});
    FirstTitsPtr j = first(a.get("J"), n.head);
    const AlgebraPtr& dd = j->algebra();
    Deg3Element x = element(a.get("a"), dd), y = element(a.get("b"), dd), d = element(a.get("d"), dd);
    return [j, x, y, d] { return str_path(j, x, y, d); };
  }

 private:
  const std::map<std::string, Binding>& env_;
};

// ---------------------------------------------------------------- directives

struct Directive {
  std::size_t line = 0;
  std::string text;
  Command command = Command::CheckAxioms;
  bool sampled = false;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 0;
  SampleBounds bounds;
  std::function<DirectiveOutput(std::uint64_t seed, std::size_t samples, bool parallel)> run;
};

std::string certify_detail(const SimilarityMap& f) {
  return "multiplier=" + f.multiplier.to_string() + " automorphism=" + yes_no(f.automorphism);
}

Directive prepare(const Resolver& res, const Node& n) {
  Directive d;
  d.line = n.line;
  d.text = n.text;
  const std::string& h = n.head;
  if (!n.is_call()) fail(Errc::ParseError, n, "expected a directive call after 'run'");

  // Rational samples draw numerators from [-num_bound, num_bound] and
  // denominators from [1, den_bound].
  const auto sample_bounds = [&](const Args& a) {
    for (const auto& [key, slot] : {std::pair{"num_bound", &d.bounds.numerator}, {"den_bound", &d.bounds.denominator}})
      if (const Node* b = a.find(key)) {
        const std::size_t v = parse_count(*b);
        if (v == 0) fail(Errc::InvalidArgument, *b, std::string(key) + " must be positive");
        *slot = static_cast<long>(v);
      }
  };
  const auto sampling = [&](const Args& a, const char* count_key, std::size_t fallback) {
    d.sampled = true;
    d.samples = a.find(count_key) ? parse_count(a.get(count_key)) : fallback;
    if (const Node* s = a.find("seed")) d.seed = parse_seed(*s);
    sample_bounds(a);
  };

  if (h == "axioms") {
    Args a(n, {"J", "samples", "seed", "symbolic", "num_bound", "den_bound"});
    JordanPtr j = res.jordan(a.get("J")).j;
    sampling(a, "samples", 20);
    const bool symbolic = a.find("symbolic") ? parse_bool(a.get("symbolic")) : true;
    d.run = [j, symbolic, bounds = d.bounds](std::uint64_t seed, std::size_t samples, bool parallel) {
      SuiteOptions opt;
      opt.bounds = bounds;
      opt.samples = samples;
      opt.seed = seed;
      opt.symbolic = symbolic;
      opt.parallel = parallel;
      return DirectiveOutput{axiom_suite(*j, opt).checks, {}};
    };
  } else if (h == "fundamental") {
    Args a(n, {"J", "pairs", "seed", "num_bound", "den_bound"});
    JordanPtr j = res.jordan(a.get("J")).j;
    sampling(a, "pairs", 25);
    d.run = [j, bounds = d.bounds](std::uint64_t seed, std::size_t samples, bool) {
      return DirectiveOutput{{fundamental_formula(*j, samples, seed, bounds)}, {}};
    };
  } else if (h == "degree") {
    Args a(n, {"J"});
    JordanPtr j = res.jordan(a.get("J")).j;
    d.run = [j](std::uint64_t, std::size_t, bool) {
      return DirectiveOutput{{degree_identity_u(*j), degree_identity_sharp(*j)}, {}};
    };
  } else if (h == "trace_oracle") {
    Args a(n, {"D", "pairs", "seed", "num_bound", "den_bound"});
    AlgebraPtr alg = res.algebra(a.get("D"));
    sampling(a, "pairs", 20);
    d.run = [alg, bounds = d.bounds](std::uint64_t seed, std::size_t samples, bool) {
      return DirectiveOutput{{trace_form_oracle(alg, samples, seed, bounds)}, {}};
    };
  } else if (h == "certify") {
    d.command = Command::VerifyMap;
    Args a(n, {"map", "expect", "nu"});
    const Node& mn = a.get("map");
    MapSpec m = res.map(mn);
    std::string expect = "similarity";
    if (mn.is_call() && mn.head.rfind("aut_", 0) == 0) expect = "automorphism";
    if (const Node* e = a.find("expect")) expect = parse_choice(*e, {"automorphism", "similarity", "reject"});
    std::optional<Scalar> nu;
    if (const Node* v = a.find("nu")) nu = res.scalar(*v, m.parent->base_ring());
    const std::string id = mn.is_call() ? mn.head : mn.text;
    const std::string label = "certify " + expect;
    d.run = [m, expect, nu, id, label](std::uint64_t, std::size_t, bool) {
      DirectiveOutput out;
      try {
        const SimilarityMap f = m.make();
        bool ok = expect != "reject" && (expect != "automorphism" || f.automorphism);
        std::string detail = certify_detail(f);
        if (nu && !(f.multiplier == *nu)) {
          ok = false;
          detail += " expected multiplier=" + nu->to_string();
        }
        out.checks.push_back(make_check(id, label, ok, "symbolic", 1, detail));
      } catch (const Error& e) {
        out.checks.push_back(make_check(id, label, expect == "reject", "symbolic", 1, e.what()));
      }
      return out;
    };
  } else if (h == "jvariants") {
    d.command = Command::VerifyMap;
    Args a(n, {"J", "c"});
    FirstTitsPtr j = res.first(a.get("J"), h);
    Deg3Element c = res.element(a.get("c"), j->algebra());
    d.run = [j, c](std::uint64_t, std::size_t, bool) {
      const JVariantVerdict v = compare_jmap_variants(j, c);
      const auto describe = [](const Certification& cert, bool aut) {
        if (aut) return std::string("automorphism");
        if (!cert.similarity) return std::string(errc_name(cert.failure)) + " (" + cert.detail + ")";
        return "similarity " + certify_detail(*cert.map);
      };
      const bool one_survives = v.a_automorphism != v.b_automorphism;
      std::string detail = "variant A: " + describe(v.a, v.a_automorphism) + "; variant B: " + describe(v.b, v.b_automorphism);
      if (one_survives) detail += "; surviving variant: " + std::string(v.b_automorphism ? "B" : "A");
      return DirectiveOutput{{make_check("jmap-variants", "exactly one J-map variant is an automorphism", one_survives,
                                         "symbolic", 2, detail)},
                             {}};
    };
  } else if (h == "chi_oracle") {
    d.command = Command::VerifyMap;
    Args a(n, {"J", "a", "samples", "seed", "num_bound", "den_bound"});
    FirstTitsPtr j = res.first(a.get("J"), h);
    if (j->algebra()->kind() != AlgebraKind::CubicEtale)
      fail(Errc::InvalidArgument, a.get("J"), "chi_oracle needs a first construction over a cubic etale algebra");
    Deg3Element x = res.element(a.get("a"), j->algebra());
    d.samples = a.find("samples") ? parse_count(a.get("samples")) : 0;
    d.sampled = d.samples > 0;
    if (const Node* s = a.find("seed")) d.seed = parse_seed(*s);
    sample_bounds(a);
    d.run = [j, x, bounds = d.bounds](std::uint64_t seed, std::size_t samples, bool) {
      const AlgebraPtr& e = j->algebra();
      const Deg3Element zero = d3_zero(e, e->base());
      std::vector<Deg3Element> points{x};
      Rng rng(seed, bounds);
      for (std::size_t i = 0; i < samples; ++i) points.push_back(random_invertible(rng, e));
      DirectiveOutput out;
      std::size_t literal_hits = 0, corrected_hits = 0;
      std::string first_detail;
      for (const auto& p : points) {
        for (ChiMiddle m : {ChiMiddle::Literal, ChiMiddle::Corrected}) {
          const SimilarityMap f = chi_map(j, p, m);
          const bool hit = vec_equal(f.apply(j->pack(p, zero, zero)), j->unit());
          (m == ChiMiddle::Literal ? literal_hits : corrected_hits) += hit ? 1 : 0;
          if (&p == &points.front())
            first_detail += std::string(first_detail.empty() ? "" : "; ") + std::string(chi_middle_name(m)) +
                            ": chi(a,0,0)=" + vec_to_string(f.apply(j->pack(p, zero, zero))) +
                            " multiplier=" + f.multiplier.to_string();
        }
      }
      const bool ok = corrected_hits == points.size() && literal_hits < points.size();
      out.checks.push_back(make_check("chi-middle", "chi(a,0,0) = 1 for exactly one middle-operand reading", ok,
                                      samples ? "sampled" : "direct", points.size(),
                                      first_detail + "; maps to 1: literal " + std::to_string(literal_hits) + "/" +
                                          std::to_string(points.size()) + ", corrected " +
                                          std::to_string(corrected_hits) + "/" + std::to_string(points.size())));
      return out;
    };
  } else if (h == "split_identify") {
    d.command = Command::VerifyMap;
    Args a(n, {"D", "mu"});
    AlgebraPtr alg = res.algebra(a.get("D"));
    const RingPtr split = res.located(n, [&] { return Algebra::prodop(alg)->norm_ring(); });
    Scalar mu = res.scalar(a.get("mu"), split);
    d.run = [alg, mu](std::uint64_t, std::size_t, bool) {
      DirectiveOutput out;
      try {
        const SplitIdentification s = split_identify(alg, mu);
        out.checks.push_back(make_check("split-identify", "norm and unit preserved", s.norm_preserved && s.unit_preserved,
                                        "symbolic", 1,
                                        s.source->describe() + " -> " + s.target->describe()));
      } catch (const Error& e) {
        out.checks.push_back(make_check("split-identify", "norm and unit preserved", false, "symbolic", 1, e.what()));
      }
      return out;
    };
  } else if (h == "path") {
    d.command = Command::VerifyMap;
    Args a(n, {"path", "expect"});
    const Node& pn = a.get("path");
    auto make = res.path(pn);
    const bool reject = a.find("expect") && parse_choice(a.get("expect"), {"valid", "reject"}) == "reject";
    const std::string id = pn.is_call() ? pn.head : pn.text;
    d.run = [make, reject, id](std::uint64_t, std::size_t, bool) {
      DirectiveOutput out;
      const std::string label = reject ? "path rejected" : "regular at 0 and 1, similarity on the generic fiber";
      try {
        const RPath p = make();
        out.checks.push_back(make_check(id, label, !reject, "symbolic", 1,
                                        "multiplier(t)=" + p.multiplier.to_string() +
                                            " automorphism-family=" + yes_no(p.automorphism_family())));
      } catch (const Error& e) {
        out.checks.push_back(make_check(id, label, reject, "symbolic", 1, e.what()));
      }
      return out;
    };
  } else if (h == "cert_stab") {
    d.command = Command::BuildCert;
    Args a(n, {"J", "a", "b"});
    FirstTitsPtr j = res.first(a.get("J"), h);
    Deg3Element x = res.element(a.get("a"), j->algebra()), y = res.element(a.get("b"), j->algebra());
    d.run = [j, x, y](std::uint64_t, std::size_t, bool) {
      DirectiveOutput out;
      const BuiltCertificate built = cert_build_stab(j, x, y);
      out.checks = cert_check(built.cert, j).checks;
      out.certs.push_back(built.cert);
      return out;
    };
  } else {
    fail(Errc::ParseError, n, "unknown directive '" + h + "'");
  }
  return d;
}

// ---------------------------------------------------------------- statements

struct Statement {
  std::size_t line = 0, col = 0;
  std::string text;
};

std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  Statement pending;
  int depth = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (depth == 0) {
      const auto first = raw.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      pending = {lineno, first + 1, raw.substr(first)};
    } else {
      pending.text += " " + raw;
    }
    for (char c : raw) depth += opens(c) ? 1 : closes(c) ? -1 : 0;
    if (depth < 0) fail_at(Errc::ParseError, lineno, 1, "unbalanced closing bracket");
    if (depth == 0) out.push_back(pending);
  }
  if (depth != 0) fail_at(Errc::ParseError, pending.line, pending.col, "statement never closes its brackets");
  return out;
}

std::string check_line(const CheckResult& c) {
  std::string s = "  " + c.id + " " + (c.pass ? "PASS" : "FAIL") + " " + c.mode + " n=" + std::to_string(c.instances) +
                  " [" + c.label + "]";
  if (!c.detail.empty()) s += " " + c.detail;
  return s;
}

}  // namespace

// ---------------------------------------------------------------- scenario

struct Scenario::Impl {
  std::string source;
  std::map<std::string, Binding> env;
  std::vector<Directive> directives;
};

Scenario Scenario::parse(std::string_view text, std::string source) {
  auto impl = std::make_shared<Impl>();
  impl->source = std::move(source);
  Resolver res(impl->env);
  for (const Statement& st : split_statements(text)) {
    if (st.text.rfind("run", 0) == 0 && st.text.size() > 3 && std::isspace(static_cast<unsigned char>(st.text[3]))) {
      impl->directives.push_back(prepare(res, parse_node(std::string_view(st.text).substr(3), st.line, st.col + 3)));
      continue;
    }
    const auto parts = split_top(st.text, '=', st.line, st.col);
    if (parts.size() != 2)
      fail_at(Errc::ParseError, st.line, st.col, "expected 'name = expression' or 'run directive(...)'");
    const Node lhs = parse_node(std::string_view(st.text).substr(0, parts[0].second), st.line, st.col);
    if (lhs.is_call() || !is_ident(lhs.text)) fail(Errc::ParseError, lhs, "invalid name '" + lhs.text + "'");
    if (kReserved.count(lhs.text)) fail(Errc::ParseError, lhs, "'" + lhs.text + "' is reserved");
    if (impl->env.count(lhs.text)) fail(Errc::ParseError, lhs, "'" + lhs.text + "' is already declared");
    const Node rhs = parse_node(std::string_view(st.text).substr(parts[1].first), st.line, st.col + parts[1].first);

    Binding b;
    b.node = rhs;
    if (const Binding* alias = res.lookup(rhs)) {
      b = *alias;
    } else if (rhs.is_call() && kAlgebraForms.count(rhs.head)) {
      b.kind = Binding::Kind::Algebra;
      b.alg = res.algebra(rhs);
    } else if (rhs.is_call() && kJordanForms.count(rhs.head)) {
      b.kind = Binding::Kind::Jordan;
      b.jordan = res.jordan(rhs);
    } else if (rhs.is_call()) {
      if (!kElementForms.count(rhs.head) && !kInvolutionForms.count(rhs.head) && !kMapForms.count(rhs.head) &&
          !kPathForms.count(rhs.head) && rhs.head != "Q" && rhs.head.rfind('F', 0) != 0)
        fail(Errc::ParseError, rhs, "unknown form '" + rhs.head + "'");
      if (rhs.head == "Q" || rhs.head.rfind('F', 0) == 0) {
        b.kind = Binding::Kind::Field;
        b.field = res.field(rhs);
      }
    } else {
      try {
        b.field = parse_field(rhs.text);
        b.kind = Binding::Kind::Field;
      } catch (const Error&) {
        // element, scalar or involution literal, resolved where it is used
      }
    }
    impl->env.emplace(lhs.text, std::move(b));
  }
  Scenario s;
  s.impl_ = std::move(impl);
  return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::size_t Scenario::directive_count() const { return impl_->directives.size(); }

Report Scenario::run(Command command, const RunOptions& options) const {
  Report report;
  report.command = command;
  report.source = impl_->source;
  report.seed = options.seed;

  std::vector<const Directive*> selected;
  for (const Directive& d : impl_->directives) {
    if (d.command != command) continue;
    if (d.sampled && !d.seed && !options.seed)
      fail_at(Errc::InvalidArgument, d.line, 1, "sampled directive '" + d.text + "' needs seed= or --seed");
    selected.push_back(&d);
  }
  if (selected.empty())
    throw Error(Errc::InvalidArgument, impl_->source + " has no directives for " + std::string(command_name(command)));

  const auto execute = [&options](const Directive* d) {
    const std::uint64_t seed = options.seed.value_or(d->seed.value_or(0));
    const std::size_t samples = d->sampled && options.samples ? *options.samples : d->samples;
    return d->run(seed, samples, options.parallel);
  };
  std::vector<DirectiveOutput> outputs;
  if (options.parallel) {
    std::vector<std::future<DirectiveOutput>> futures;
    for (const Directive* d : selected) futures.push_back(std::async(std::launch::async, execute, d));
    for (auto& f : futures) outputs.push_back(f.get());
  } else {
    for (const Directive* d : selected) outputs.push_back(execute(d));
  }
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (auto& c : outputs[i].checks) report.entries.push_back({selected[i]->line, selected[i]->text, std::move(c)});
    for (auto& c : outputs[i].certs) report.certificates.push_back(std::move(c));
  }
  return report;
}

// ---------------------------------------------------------------- reports

bool Report::pass() const {
  for (const auto& e : entries)
    if (!e.check.pass) return false;
  return true;
}

std::string Report::to_text() const {
  std::string s = "albert " + std::string(command_name(command)) + " " + source + "\n";
  if (seed) s += "seed override: " + std::to_string(*seed) + "\n";
  std::size_t last = 0, passed = 0;
  for (const auto& e : entries) {
    if (e.line != last) s += "line " + std::to_string(e.line) + ": run " + e.directive + "\n";
    last = e.line;
    s += check_line(e.check) + "\n";
    passed += e.check.pass ? 1 : 0;
  }
  s += "summary: " + std::to_string(passed) + "/" + std::to_string(entries.size()) + " checks passed, " +
       (pass() ? "PASS" : "FAIL") + "\n";
  return s;
}

std::string Report::to_machine() const {
  nlohmann::ordered_json j;
  j["command"] = command_name(command);
  j["source"] = source;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["checks"] = nlohmann::ordered_json::array();
  std::size_t passed = 0;
  for (const auto& e : entries) {
    nlohmann::ordered_json c;
    c["line"] = e.line;
    c["directive"] = e.directive;
    c["id"] = e.check.id;
    c["verdict"] = e.check.pass ? "pass" : "fail";
    c["mode"] = e.check.mode;
    c["instances"] = e.check.instances;
    c["label"] = e.check.label;
    c["detail"] = e.check.detail;
    j["checks"].push_back(std::move(c));
    passed += e.check.pass ? 1 : 0;
  }
  j["certificates"] = certificates.size();
  j["summary"] = {{"checks", entries.size()}, {"passed", passed}, {"verdict", pass() ? "pass" : "fail"}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- constructions

JordanPtr parse_construction(std::string_view text) {
  const std::map<std::string, Binding> empty;
  Resolver res(empty);
  const Node n = parse_node(text, 1, 1);
  return res.jordan(n).j;
}

}  // namespace albert
