#include <albert/parse.hpp>

#include <cctype>
#include <functional>
#include <optional>

namespace albert {

namespace {

[[noreturn]] void fail(std::string_view text, std::size_t pos, const std::string& msg) {
  throw Error(Errc::ParseError, msg + " at column " + std::to_string(pos + 1) + " in '" + std::string(text) + "'");
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Resolves a generator name anywhere in the tower below `ring`.
std::optional<Scalar> lookup_name(const RingPtr& ring, const std::string& name) {
  switch (ring->kind()) {
    case RingKind::Rationals:
    case RingKind::PrimeField:
      return std::nullopt;
    case RingKind::Extension:
      if (ring->generator_name() == name) return Scalar::generator(ring);
      break;
    case RingKind::Polynomial:
      for (std::size_t i = 0; i < ring->nvars(); ++i)
        if (ring->names()[i] == name) return Scalar::variable(ring, i);
      break;
    case RingKind::RationalFunctions:
      if (ring->generator_name() == name) return ratfunc_variable(ring);
      break;
  }
  if (auto inner = lookup_name(ring->base(), name)) return embed(*inner, ring);
  return std::nullopt;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

  Scalar parse_all() {
    Scalar v = expr();
    skip();
    if (pos_ != text_.size()) fail(text_, pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Scalar expr() {
    Scalar v;
    if (accept('-'))
      v = -term();
    else {
      accept('+');
      v = term();
    }
    for (;;) {
      if (accept('+'))
        v = v + term();
      else if (accept('-'))
        v = v - term();
      else
        return v;
    }
  }

  bool starts_factor() {
    skip();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return c == '(' || ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  Scalar term() {
    Scalar v = power();
    for (;;) {
      if (accept('*'))
        v = v * power();
      else if (accept('/'))
        v = v / power();
      else if (starts_factor())
        v = v * power();  // implicit multiplication
      else
        return v;
    }
  }

  Scalar power() {
    Scalar base = atom();
    if (!accept('^')) return base;
    skip();
    bool negative = accept('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail(text_, pos_, "expected an integer exponent");
    const unsigned e = static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start))));
    Scalar r = base.pow(e);
    return negative ? r.inverse() : r;
  }

  Scalar atom() {
    skip();
    if (pos_ >= text_.size()) fail(text_, pos_, "unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar v = expr();
      if (!accept(')')) fail(text_, pos_, "expected ')'");
      return v;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Scalar::from_rational(ring_, mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (ident_start(c)) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      if (auto v = lookup_name(ring_, name)) return *v;
      fail(text_, start, "unknown name '" + name + "' in " + ring_->to_string());
    }
    fail(text_, pos_, "unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

class FieldParser {
 public:
  explicit FieldParser(std::string_view text) : text_(text) {}

  RingPtr parse_all() {
    RingPtr r = field(0);
    skip();
    if (pos_ != text_.size()) fail(text_, pos_, "trailing characters in field spec");
    return r;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(text_, pos_, std::string("expected '") + c + "'");
  }
  std::string name() {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) fail(text_, pos_, "expected a name");
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // The text between a '(' already consumed and its matching ')'.
  std::string_view balanced() {
    const std::size_t start = pos_;
    int depth = 1;
    while (pos_ < text_.size()) {
      if (text_[pos_] == '(') ++depth;
      if (text_[pos_] == ')' && --depth == 0) return text_.substr(start, pos_++ - start);
      ++pos_;
    }
    fail(text_, start, "unbalanced parentheses");
  }

  RingPtr field(int depth) {
    skip();
    RingPtr r;
    if (accept('(')) {
      r = field(depth);
      expect(')');
    } else if (accept('Q')) {
      r = Ring::rationals();
    } else if (accept('F')) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail(text_, pos_, "expected a prime after F");
      try {
        r = Ring::prime_field(std::stoll(std::string(text_.substr(start, pos_ - start))));
      } catch (const std::out_of_range&) {
        fail(text_, start, "prime out of range");
      } catch (const Error& e) {
        fail(text_, start, e.what());
      }
    } else {
      fail(text_, pos_, "expected Q, F<p> or '('");
    }
    for (;;) {
      skip();
      if (accept('[')) {
        if (++depth > 3) fail(text_, pos_, "field tower deeper than 3 layers");
        const std::string gen = name();
        expect(']');
        expect('/');
        expect('(');
        const std::size_t mod_pos = pos_;
        const std::string_view modulus = balanced();
        r = extension_from_modulus(r, gen, modulus, mod_pos);
      } else if (pos_ < text_.size() && text_[pos_] == '(') {
        if (++depth > 3) fail(text_, pos_, "field tower deeper than 3 layers");
        ++pos_;
        const std::string var = name();
        expect(')');
        try {
          r = Ring::rational_functions(r, var);
        } catch (const Error& e) {
          fail(text_, pos_, e.what());
        }
      } else {
        return r;
      }
    }
  }

  RingPtr extension_from_modulus(const RingPtr& base, const std::string& gen, std::string_view modulus,
                                 std::size_t at) {
    const RingPtr pr = Ring::polynomial(base, std::vector<std::string>{gen});
    const Scalar f = parse_scalar(modulus, pr);
    const std::size_t deg = poly_total_degree(f);
    if (deg != 2 && deg != 3) fail(text_, at, "modulus must have degree 2 or 3");
    std::vector<Scalar> lower(deg, Scalar::zero(base));
    for (const auto& t : f.terms()) {
      if (t.mono.degree == deg) {
        if (!t.coef.is_one()) fail(text_, at, "modulus must be monic");
      } else {
        lower[t.mono.degree] = t.coef;
      }
    }
    return Ring::extension(base, std::move(lower), gen);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RingPtr parse_field(std::string_view text) { return FieldParser(text).parse_all(); }

Scalar parse_scalar(std::string_view text, const RingPtr& ring) { return ExprParser(text, ring).parse_all(); }

}  // namespace albert
