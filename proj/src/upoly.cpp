#include "upoly.hpp"

#include <algorithm>

namespace albert::upoly {

void trim(UPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

UPoly add(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size())
      out[i] = a[i] + b[i];
    else
      out[i] = i < a.size() ? a[i] : b[i];
  }
  trim(out);
  return out;
}

UPoly sub(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i < a.size() && i < b.size())
      out[i] = a[i] - b[i];
    else
      out[i] = i < a.size() ? a[i] : -b[i];
  }
  trim(out);
  return out;
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      Scalar p = a[i] * b[j];
      out[i + j] = out[i + j].valid() ? out[i + j] + p : p;
    }
  }
  trim(out);
  return out;
}

UPoly scale(const UPoly& a, const Scalar& c) {
  UPoly out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  trim(out);
  return out;
}

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.empty()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
  r = a;
  trim(r);
  q.clear();
  if (r.size() < b.size()) return;
  const Scalar lead_inv = b.back().inverse();
  q.assign(r.size() - b.size() + 1, Scalar::zero(b.back().ring()));
  while (r.size() >= b.size() && !r.empty()) {
    const std::size_t shift = r.size() - b.size();
    const Scalar c = r.back() * lead_inv;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = r[shift + i] - c * b[i];
    trim(r);
  }
  trim(q);
}

UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  return scale(a, a.back().inverse());
}

Scalar eval(const UPoly& a, const Scalar& x, const RingPtr& field) {
  Scalar acc = Scalar::zero(field);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPoly derivative(const UPoly& a) {
  UPoly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(static_cast<long>(i) * a[i]);
  trim(out);
  return out;
}

}  // namespace albert::upoly
