// Exact arithmetic in explicitly constructed finite fields F_{p^n}:
// deterministic field models, subfield embeddings, Frobenius, traces, and the
// F_p-linear solver for additive (Artin-Schreier) equations z^Q + z = c.
#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "towerlab/numeric.hpp"

namespace towerlab::gf {

class Field;
class Element;
using FieldPtr = std::shared_ptr<const Field>;

namespace detail {

// Dense polynomials over F_p, coefficient c[i] on x^i, trimmed (no leading 0).
using Coeffs = std::vector<std::uint32_t>;

inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  std::uint64_t r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

inline void poly_trim(Coeffs& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Coeffs poly_mul(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    const std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + ai * b[j]) % p);
  }
  return r;
}

// Remainder mod a monic f, in place.
inline void poly_mod_inplace(Coeffs& a, const Coeffs& f, std::uint32_t p) {
  const std::size_t df = f.size() - 1;
  while (a.size() > df) {
    const std::uint32_t lead = a.back();
    const std::size_t shift = a.size() - 1 - df;
    if (lead) {
      for (std::size_t i = 0; i < df; ++i) {
        const std::uint64_t sub = static_cast<std::uint64_t>(lead) * f[i] % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
      }
    }
    a.pop_back();
  }
  poly_trim(a);
}

inline Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& f, std::uint32_t p) {
  Coeffs r = poly_mul(a, b, p);
  poly_mod_inplace(r, f, p);
  return r;
}

inline Coeffs poly_powmod(Coeffs base, Int e, const Coeffs& f, std::uint32_t p) {
  poly_mod_inplace(base, f, p);
  Coeffs r{1};
  while (e > 0) {
    if ((e & 1) != 0) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline Coeffs poly_make_monic(Coeffs f, std::uint32_t p) {
  poly_trim(f);
  if (f.empty() || f.back() == 1) return f;
  const std::uint32_t il = mod_inverse(f.back(), p);
  for (auto& c : f) c = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * il % p);
  return f;
}

inline Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint32_t p) {
  a = poly_make_monic(std::move(a), p);
  b = poly_make_monic(std::move(b), p);
  while (!b.empty()) {
    poly_mod_inplace(a, b, p);
    a = poly_make_monic(std::move(a), p);
    std::swap(a, b);
  }
  return a;
}

// Irreducibility of a monic degree-n polynomial over F_p via the x^{p^n} = x
// splitting test plus gcd checks at the maximal proper subfield degrees.
inline bool poly_is_irreducible(const Coeffs& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 0) return false;
  if (n == 1) return true;
  const Coeffs x{0, 1};
  Coeffs xq = poly_powmod(x, int_pow(p, static_cast<std::uint64_t>(n)), f, p);
  if (xq != x) return false;
  for (std::uint64_t ell : distinct_prime_factors(static_cast<std::uint64_t>(n))) {
    Coeffs g = poly_powmod(x, int_pow(p, static_cast<std::uint64_t>(n / ell)), f, p);
    // g - x
    if (g.size() < 2) g.resize(2, 0);
    g[1] = static_cast<std::uint32_t>((g[1] + p - 1) % p);
    poly_trim(g);
    Coeffs d = poly_gcd(g, f, p);
    if (d.size() > 1) return false;
  }
  return true;
}

// `index`-th monic irreducible of degree n over F_p, where candidates
// x^n + c_{n-1}x^{n-1} + ... + c_0 are ordered by the integer value
// sum c_j p^j (higher-degree coefficients more significant). index 0 gives the
// canonical field modulus: x for n=1, x^2+x+1 over F_2, x^4+x+1 over F_2, ...
inline Coeffs find_irreducible(std::uint32_t p, unsigned n, unsigned index = 0) {
  constexpr std::uint64_t kSearchLimit = 50'000'000;
  unsigned found = 0;
  for (std::uint64_t v = 0; v < kSearchLimit; ++v) {
    Coeffs f(n + 1, 0);
    std::uint64_t t = v;
    for (unsigned j = 0; j < n && t; ++j) {
      f[j] = static_cast<std::uint32_t>(t % p);
      t /= p;
    }
    if (t) break;  // exhausted all monic candidates
    f[n] = 1;
    if (poly_is_irreducible(f, p)) {
      if (found == index) return f;
      ++found;
    }
  }
  throw std::logic_error("no irreducible polynomial found (degree " + std::to_string(n) + ")");
}

// Reduced-row-echelon solver for M x = y over F_p, reusable across right-hand
// sides. Stores T with T*M = R (RREF) so solvability is a few dot products.
struct FpLinearSolver {
  std::uint32_t p = 2;
  unsigned rows = 0, cols = 0, rank = 0;
  std::vector<std::vector<std::uint32_t>> R;  // rows x cols
  std::vector<std::vector<std::uint32_t>> T;  // rows x rows
  std::vector<int> pivot_col;                 // size rank
  std::vector<int> pivot_row_of_col;          // size cols, -1 = free column

  static FpLinearSolver build(std::uint32_t p, std::vector<std::vector<std::uint32_t>> M) {
    FpLinearSolver s;
    s.p = p;
    s.rows = static_cast<unsigned>(M.size());
    s.cols = s.rows ? static_cast<unsigned>(M[0].size()) : 0;
    s.R = std::move(M);
    s.T.assign(s.rows, std::vector<std::uint32_t>(s.rows, 0));
    for (unsigned i = 0; i < s.rows; ++i) s.T[i][i] = 1;
    s.pivot_row_of_col.assign(s.cols, -1);
    unsigned r = 0;
    for (unsigned c = 0; c < s.cols && r < s.rows; ++c) {
      unsigned pr = r;
      while (pr < s.rows && s.R[pr][c] == 0) ++pr;
      if (pr == s.rows) continue;
      std::swap(s.R[pr], s.R[r]);
      std::swap(s.T[pr], s.T[r]);
      const std::uint32_t inv = mod_inverse(s.R[r][c], p);
      auto scale = [&](std::vector<std::uint32_t>& row) {
        for (auto& x : row) x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * inv % p);
      };
      scale(s.R[r]);
      scale(s.T[r]);
      for (unsigned i = 0; i < s.rows; ++i) {
        if (i == r || s.R[i][c] == 0) continue;
        const std::uint64_t f = s.R[i][c];
        for (unsigned j = 0; j < s.cols; ++j)
          s.R[i][j] = static_cast<std::uint32_t>((s.R[i][j] + (p - f % p) * s.R[r][j]) % p);
        for (unsigned j = 0; j < s.rows; ++j)
          s.T[i][j] = static_cast<std::uint32_t>((s.T[i][j] + (p - f % p) * s.T[r][j]) % p);
      }
      s.pivot_col.push_back(static_cast<int>(c));
      s.pivot_row_of_col[c] = static_cast<int>(r);
      ++r;
    }
    s.rank = r;
    return s;
  }

  bool solvable(const std::vector<std::uint32_t>& y) const {
    for (unsigned i = rank; i < rows; ++i) {
      std::uint64_t acc = 0;
      for (unsigned j = 0; j < rows; ++j) acc += static_cast<std::uint64_t>(T[i][j]) * y[j] % p;
      if (acc % p != 0) return false;
    }
    return true;
  }

  std::optional<std::vector<std::uint32_t>> particular(const std::vector<std::uint32_t>& y) const {
    std::vector<std::uint32_t> z(rows, 0);
    for (unsigned i = 0; i < rows; ++i) {
      std::uint64_t acc = 0;
      for (unsigned j = 0; j < rows; ++j) acc += static_cast<std::uint64_t>(T[i][j]) * y[j] % p;
      z[i] = static_cast<std::uint32_t>(acc % p);
    }
    for (unsigned i = rank; i < rows; ++i)
      if (z[i] != 0) return std::nullopt;
    std::vector<std::uint32_t> x(cols, 0);
    for (unsigned r = 0; r < rank; ++r) x[static_cast<unsigned>(pivot_col[r])] = z[r];
    return x;
  }

  std::vector<std::vector<std::uint32_t>> kernel_basis() const {
    std::vector<std::vector<std::uint32_t>> basis;
    for (unsigned c = 0; c < cols; ++c) {
      if (pivot_row_of_col[c] != -1) continue;
      std::vector<std::uint32_t> v(cols, 0);
      v[c] = 1;
      for (unsigned r = 0; r < rank; ++r)
        v[static_cast<unsigned>(pivot_col[r])] = (p - R[r][c]) % p;
      basis.push_back(std::move(v));
    }
    return basis;
  }
};

}  // namespace detail

// Immutable descriptor of F_{p^n} = F_p[x]/(modulus). The modulus is chosen
// deterministically (see detail::find_irreducible), so identical (p, n) always
// produce bit-identical arithmetic. Elements are enumerated by the canonical
// index sum c_i p^i, which is the "element order" used wherever a deterministic
// scan is required.
class Field : public std::enable_shared_from_this<Field> {
 public:
  static constexpr unsigned kMaxDegree = 64;

  static FieldPtr make(std::uint32_t p, unsigned n, unsigned modulus_index = 0) {
    check_pn(p, n);
    detail::Coeffs f = detail::find_irreducible(p, n, modulus_index);
    return FieldPtr(new Field(p, n, std::move(f)));
  }

  static FieldPtr make_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    if (modulus.size() < 2) throw std::invalid_argument("modulus must have degree >= 1");
    const unsigned n = static_cast<unsigned>(modulus.size() - 1);
    check_pn(p, n);
    for (auto& c : modulus) c %= p;
    if (modulus.back() != 1) throw std::invalid_argument("modulus must be monic");
    if (!detail::poly_is_irreducible(modulus, p))
      throw std::invalid_argument("modulus is not irreducible over F_p");
    return FieldPtr(new Field(p, n, std::move(modulus)));
  }

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return n_; }
  const Int& order() const { return order_; }
  const std::vector<std::uint32_t>& modulus() const { return mod_; }

  Element zero() const;
  Element one() const;
  Element gen() const;  // residue class of x (0 in the degree-1 convention)
  Element element(std::vector<std::uint32_t> coeffs) const;
  Element scalar(std::uint64_t v) const;
  Element from_index(const Int& idx) const;
  Int index_of(const Element& a) const;

  std::string label() const {
    std::ostringstream os;
    os << "F_" << order_;
    return os.str();
  }

 private:
  Field(std::uint32_t p, unsigned n, detail::Coeffs mod)
      : p_(p), n_(n), mod_(std::move(mod)), order_(int_pow(p, n)) {}

  static void check_pn(std::uint32_t p, unsigned n) {
    if (!is_prime_u64(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (n < 1 || n > kMaxDegree)
      throw std::invalid_argument("extension degree out of range [1," + std::to_string(kMaxDegree) + "]");
  }

  std::uint32_t p_;
  unsigned n_;
  detail::Coeffs mod_;  // size n+1, monic
  Int order_;

  friend class Element;
};

// A field element: owning field plus a dense length-n coefficient vector.
// Elements of distinct descriptors never combine; use an Embedding first.
class Element {
 public:
  Element() = default;

  const FieldPtr& owner() const { return f_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  bool valid() const { return static_cast<bool>(f_); }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint32_t v) { return v == 0; });
  }
  bool is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](std::uint32_t v) { return v == 0; });
  }

  friend bool operator==(const Element& a, const Element& b) {
    return a.f_.get() == b.f_.get() && a.c_ == b.c_;
  }
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }
  // Canonical (index) order; used for deterministic scans and sorted outputs.
  friend bool operator<(const Element& a, const Element& b) {
    a.check_same(b);
    for (std::size_t i = a.c_.size(); i-- > 0;)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  friend Element operator+(const Element& a, const Element& b) {
    a.check_same(b);
    Element r = a;
    const std::uint32_t p = a.f_->characteristic();
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = (r.c_[i] + b.c_[i]) % p;
    return r;
  }
  friend Element operator-(const Element& a, const Element& b) {
    a.check_same(b);
    Element r = a;
    const std::uint32_t p = a.f_->characteristic();
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = (r.c_[i] + p - b.c_[i]) % p;
    return r;
  }
  friend Element operator*(const Element& a, const Element& b) {
    a.check_same(b);
    detail::Coeffs r = detail::poly_mulmod(a.c_, b.c_, a.f_->modulus(), a.f_->characteristic());
    r.resize(a.f_->degree(), 0);
    return Element(a.f_, std::move(r));
  }
  friend Element operator/(const Element& a, const Element& b) {
    a.check_same(b);
    return a * b.inv();
  }
  Element operator-() const {
    require_valid();
    Element r = *this;
    const std::uint32_t p = f_->characteristic();
    for (auto& v : r.c_) v = (p - v) % p;
    return r;
  }

  Element inv() const {
    require_valid();
    if (is_zero()) throw std::domain_error("division by zero in " + f_->label());
    return pow(f_->order() - 2);  // a^{q-2} = a^{-1} in F_q*
  }

  Element pow(Int e) const {
    require_valid();
    if (e < 0) return inv().pow(-e);
    Element base = *this;
    Element r = f_->one();
    while (e > 0) {
      if ((e & 1) != 0) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // a -> a^{p^e}; frobenius(n) is the identity on F_{p^n}.
  Element frobenius(unsigned e) const {
    require_valid();
    const unsigned steps = e % f_->degree();
    Element r = *this;
    for (unsigned i = 0; i < steps; ++i) r = r.pow(f_->characteristic());
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) os << ',';
      os << c_[i];
    }
    os << ')';
    return os.str();
  }

 private:
  Element(FieldPtr f, std::vector<std::uint32_t> c) : f_(std::move(f)), c_(std::move(c)) {}

  void require_valid() const {
    if (!f_) throw std::logic_error("operation on default-constructed field element");
  }
  void check_same(const Element& b) const {
    require_valid();
    b.require_valid();
    if (f_.get() != b.f_.get())
      throw std::invalid_argument("elements belong to different field descriptors");
  }

  FieldPtr f_;
  std::vector<std::uint32_t> c_;

  friend class Field;
  friend class Embedding;
};

inline Element Field::zero() const {
  return Element(shared_from_this(), std::vector<std::uint32_t>(n_, 0));
}
inline Element Field::one() const { return scalar(1); }
inline Element Field::gen() const {
  std::vector<std::uint32_t> c(n_, 0);
  if (n_ >= 2) c[1] = 1;  // x mod x is 0 in the degree-1 convention
  return Element(shared_from_this(), std::move(c));
}
inline Element Field::element(std::vector<std::uint32_t> coeffs) const {
  if (coeffs.size() > n_) throw std::invalid_argument("coefficient vector longer than field degree");
  coeffs.resize(n_, 0);
  for (auto& c : coeffs) c %= p_;
  return Element(shared_from_this(), std::move(coeffs));
}
inline Element Field::scalar(std::uint64_t v) const {
  std::vector<std::uint32_t> c(n_, 0);
  c[0] = static_cast<std::uint32_t>(v % p_);
  return Element(shared_from_this(), std::move(c));
}
inline Element Field::from_index(const Int& idx) const {
  if (idx < 0 || idx >= order_) throw std::invalid_argument("element index out of range");
  std::vector<std::uint32_t> c(n_, 0);
  Int t = idx;
  for (unsigned i = 0; i < n_ && t > 0; ++i) {
    c[i] = static_cast<std::uint32_t>(t % p_);
    t /= p_;
  }
  return Element(shared_from_this(), std::move(c));
}
inline Int Field::index_of(const Element& a) const {
  if (a.owner().get() != this) throw std::invalid_argument("element from a different field");
  Int idx = 0;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) idx = idx * p_ + a.coeffs()[i];
  return idx;
}

// Field homomorphism F_{p^m} -> F_{p^n} (m | n), determined by sending the
// generator of `from` to the smallest root of from.modulus in `to`.
class Embedding {
 public:
  static Embedding make(FieldPtr from, FieldPtr to) {
    if (!from || !to) throw std::invalid_argument("null field");
    if (from->characteristic() != to->characteristic())
      throw std::invalid_argument("embedding requires equal characteristic");
    if (to->degree() % from->degree() != 0)
      throw std::invalid_argument("embedding requires subfield degree to divide extension degree");
    // smallest root of from.modulus inside `to`, in canonical element order
    std::optional<Element> root;
    const auto& fm = from->modulus();
    for (Int idx = 0; idx < to->order(); ++idx) {
      Element y = to->from_index(idx);
      Element acc = to->zero();
      for (std::size_t i = fm.size(); i-- > 0;) acc = acc * y + to->scalar(fm[i]);
      if (acc.is_zero()) {
        root = y;
        break;
      }
    }
    if (!root) throw std::logic_error("subfield modulus has no root in the extension");
    return Embedding(std::move(from), std::move(to), std::move(*root));
  }

  const FieldPtr& from() const { return from_; }
  const FieldPtr& to() const { return to_; }
  const Element& generator_image() const { return t_; }

  Element map(const Element& a) const {
    if (a.owner().get() != from_.get()) throw std::invalid_argument("element not in source field");
    Element acc = to_->zero();
    const auto& c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t_ + to_->scalar(c[i]);
    return acc;
  }

  std::optional<Element> pull_back(const Element& y) const {
    if (y.owner().get() != to_.get()) throw std::invalid_argument("element not in target field");
    auto x = solver_.particular(y.coeffs());
    if (!x) return std::nullopt;
    return from_->element(std::move(*x));
  }

 private:
  Embedding(FieldPtr from, FieldPtr to, Element t)
      : from_(std::move(from)), to_(std::move(to)), t_(std::move(t)) {
    const unsigned n = to_->degree(), m = from_->degree();
    std::vector<std::vector<std::uint32_t>> M(n, std::vector<std::uint32_t>(m, 0));
    Element pw = to_->one();
    for (unsigned j = 0; j < m; ++j) {
      for (unsigned i = 0; i < n; ++i) M[i][j] = pw.coeffs()[i];
      pw = pw * t_;
    }
    solver_ = detail::FpLinearSolver::build(to_->characteristic(), std::move(M));
  }

  FieldPtr from_, to_;
  Element t_;
  detail::FpLinearSolver solver_;
};

// Tr_{to/from}(a) = sum of a^{p^{m i}}, pulled back to the subfield model.
inline Element trace_to_subfield(const Element& a, const Embedding& emb) {
  if (a.owner().get() != emb.to().get())
    throw std::invalid_argument("trace: element does not live in the embedding's extension field");
  const unsigned m = emb.from()->degree();
  const unsigned d = emb.to()->degree() / m;
  Element acc = a, t = a;
  for (unsigned i = 1; i < d; ++i) {
    t = t.frobenius(m);
    acc = acc + t;
  }
  auto res = emb.pull_back(acc);
  if (!res) throw std::logic_error("trace value escaped the subfield (embedding is inconsistent)");
  return *res;
}

// Solver for the F_p-linear map z -> z^{p^e} + z on a fixed field, reusable
// across right-hand sides. solve() returns every solution of z^Q + z = c in
// canonical element order; the solution count is 0 or kernel_size().
class AdditiveSolver {
 public:
  AdditiveSolver(FieldPtr F, unsigned e) : F_(std::move(F)), e_(e) {
    if (!F_) throw std::invalid_argument("null field");
    if (e_ < 1) throw std::invalid_argument("additive map needs Q = p^e with e >= 1");
    const unsigned n = F_->degree();
    std::vector<std::vector<std::uint32_t>> M(n, std::vector<std::uint32_t>(n, 0));
    for (unsigned j = 0; j < n; ++j) {
      std::vector<std::uint32_t> basis(n, 0);
      basis[j] = 1;
      Element b = F_->element(std::move(basis));
      Element image = b.frobenius(e_) + b;
      for (unsigned i = 0; i < n; ++i) M[i][j] = image.coeffs()[i];
    }
    solver_ = detail::FpLinearSolver::build(F_->characteristic(), std::move(M));
    kernel_ = solver_.kernel_basis();
  }

  const FieldPtr& field() const { return F_; }
  unsigned frobenius_steps() const { return e_; }
  Int map_q() const { return int_pow(F_->characteristic(), e_); }

  std::uint64_t kernel_size() const {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < kernel_.size(); ++i) s *= F_->characteristic();
    return s;
  }

  bool solvable(const Element& c) const {
    check(c);
    return solver_.solvable(c.coeffs());
  }

  std::vector<Element> solve(const Element& c) const {
    check(c);
    auto part = solver_.particular(c.coeffs());
    if (!part) return {};
    const std::uint32_t p = F_->characteristic();
    std::vector<Element> out;
    std::vector<std::uint32_t> digits(kernel_.size(), 0);
    for (;;) {
      std::vector<std::uint32_t> v = *part;
      for (std::size_t b = 0; b < kernel_.size(); ++b) {
        if (digits[b] == 0) continue;
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] = static_cast<std::uint32_t>(
              (v[i] + static_cast<std::uint64_t>(digits[b]) * kernel_[b][i]) % p);
      }
      out.push_back(F_->element(std::move(v)));
      std::size_t b = 0;
      while (b < digits.size() && ++digits[b] == p) digits[b++] = 0;
      if (b == digits.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void check(const Element& c) const {
    if (c.owner().get() != F_.get())
      throw std::invalid_argument("right-hand side lives in a different field");
  }

  FieldPtr F_;
  unsigned e_;
  detail::FpLinearSolver solver_;
  std::vector<std::vector<std::uint32_t>> kernel_;
};

// One-shot convenience wrapper; construct an AdditiveSolver for repeated use.
inline std::vector<Element> solve_additive(const FieldPtr& F, unsigned e, const Element& c) {
  return AdditiveSolver(F, e).solve(c);
}

}  // namespace towerlab::gf
