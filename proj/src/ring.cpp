#include "mproj/ring.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

#include "mproj/errors.hpp"

namespace mproj {

Space::Space(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("space needs at least one factor");
  for (int n : dims_)
    if (n < 1) throw std::invalid_argument("every factor dimension must be >= 1");
}

int Space::total_dim() const noexcept {
  int s = 0;
  for (int n : dims_) s += n;
  return s;
}

std::string Space::str() const {
  std::string s;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) s += "x";
    s += "P" + std::to_string(dims_[i]);
  }
  return s;
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > static_cast<unsigned __int128>(~0ULL)) throw std::overflow_error("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t count_monomials(const Space& x, const MultiIndex& a) {
  if (a.size() != x.k()) throw DimensionMismatch("degree length " + std::to_string(a.size()) +
                                                 " != number of factors " + std::to_string(x.k()));
  unsigned __int128 r = 1;
  for (std::size_t i = 0; i < x.k(); ++i) {
    r *= binomial(x.n(i) + a[i], x.n(i));
    if (r > static_cast<unsigned __int128>(~0ULL)) throw std::overflow_error("N(a) overflow");
  }
  return static_cast<std::uint64_t>(r);
}

MultiIndex Monomial::degree() const {
  std::vector<int> d;
  for (const auto& e : exps) {
    int s = 0;
    for (int v : e) s += v;
    d.push_back(s);
  }
  return MultiIndex(std::move(d));
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (exps.size() != o.exps.size()) throw DimensionMismatch("monomial factor count mismatch");
  Monomial r = *this;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i].size() != o.exps[i].size()) throw DimensionMismatch("monomial variable count mismatch");
    for (std::size_t j = 0; j < exps[i].size(); ++j) r.exps[i][j] += o.exps[i][j];
  }
  return r;
}

std::string Monomial::str() const {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    for (std::size_t j = 0; j < exps[i].size(); ++j) {
      if (exps[i][j] == 0) continue;
      if (!s.empty()) s += "*";
      s += "x" + std::to_string(i + 1) + std::to_string(j);
      if (exps[i][j] > 1) s += "^" + std::to_string(exps[i][j]);
    }
  }
  return s.empty() ? "1" : s;
}

namespace {

void enumerate_lex(int vars_left, int rem, std::vector<int>& cur, std::vector<int>& out) {
  if (vars_left == 1) {
    cur.push_back(rem);
    out.insert(out.end(), cur.begin(), cur.end());
    cur.pop_back();
    return;
  }
  for (int v = rem; v >= 0; --v) {
    cur.push_back(v);
    enumerate_lex(vars_left - 1, rem - v, cur, out);
    cur.pop_back();
  }
}

std::size_t lex_rank(int n, std::span<const int> e) {
  int rem = 0;
  for (int v : e) rem += v;
  std::size_t idx = 0;
  for (int j = 0; j < n; ++j) {
    // monomials agreeing before j with a larger exponent at j
    if (rem - e[j] > 0) idx += binomial(rem - e[j] - 1 + n - j, n - j);
    rem -= e[j];
  }
  return idx;
}

}  // namespace

FactorBasis::FactorBasis(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 0) throw std::invalid_argument("factor basis needs n >= 1, d >= 0");
  size_ = binomial(n + d, n);
  std::vector<int> cur;
  exps_.reserve(size_ * static_cast<std::size_t>(n + 1));
  enumerate_lex(n + 1, d, cur, exps_);
  mult_.resize(size_ * static_cast<std::size_t>(n + 1));
  std::vector<int> e(static_cast<std::size_t>(n + 1));
  for (std::size_t idx = 0; idx < size_; ++idx) {
    auto src = exps(idx);
    for (int j = 0; j <= n; ++j) {
      e.assign(src.begin(), src.end());
      ++e[static_cast<std::size_t>(j)];
      mult_[idx * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(j)] = lex_rank(n, e);
    }
  }
}

std::size_t FactorBasis::index_of(std::span<const int> e) const {
  if (e.size() != static_cast<std::size_t>(n_ + 1)) throw DimensionMismatch("exponent vector length");
  int s = 0;
  for (int v : e) {
    if (v < 0) throw std::invalid_argument("negative exponent");
    s += v;
  }
  if (s != d_) throw std::invalid_argument("exponent vector has wrong degree");
  return lex_rank(n_, e);
}

const FactorBasis& factor_basis(int n, int d) {
  static std::shared_mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FactorBasis>> cache;
  const auto key = std::make_pair(n, d);
  {
    std::shared_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto built = std::make_unique<FactorBasis>(n, d);
  std::unique_lock lock(mu);
  auto [it, inserted] = cache.emplace(key, std::move(built));
  return *it->second;
}

MonomialIndexer::MonomialIndexer(const Space& x, const MultiIndex& a) {
  if (a.size() != x.k()) throw DimensionMismatch("degree length does not match the space");
  for (std::size_t i = 0; i < x.k(); ++i) factors_.push_back(&factor_basis(x.n(i), a[i]));
  strides_.assign(x.k(), 1);
  for (std::size_t i = x.k(); i-- > 1;) strides_[i - 1] = strides_[i] * factors_[i]->size();
  size_ = strides_[0] * factors_[0]->size();
}

std::size_t MonomialIndexer::index(std::span<const std::size_t> per_factor) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) idx += per_factor[i] * strides_[i];
  return idx;
}

void MonomialIndexer::decode(std::size_t idx, std::span<std::size_t> per_factor) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    per_factor[i] = idx / strides_[i];
    idx %= strides_[i];
  }
}

Monomial MonomialIndexer::monomial(std::size_t idx) const {
  std::vector<std::size_t> pf(factors_.size());
  decode(idx, pf);
  Monomial m;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    auto e = factors_[i]->exps(pf[i]);
    m.exps.emplace_back(e.begin(), e.end());
  }
  return m;
}

std::size_t MonomialIndexer::index_of(const Monomial& m) const {
  if (m.exps.size() != factors_.size()) throw DimensionMismatch("monomial factor count mismatch");
  std::vector<std::size_t> pf(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) pf[i] = factors_[i]->index_of(m.exps[i]);
  return index(pf);
}

std::vector<Monomial> basis(const Space& x, const MultiIndex& a) {
  MonomialIndexer ix(x, a);
  std::vector<Monomial> out;
  out.reserve(ix.size());
  for (std::size_t idx = 0; idx < ix.size(); ++idx) out.push_back(ix.monomial(idx));
  return out;
}

Monomial mult_by_var(const Monomial& m, std::size_t i, std::size_t j) {
  if (i >= m.exps.size()) throw std::out_of_range("factor index " + std::to_string(i) + " out of range");
  if (j >= m.exps[i].size()) throw std::out_of_range("variable index " + std::to_string(j) + " out of range");
  Monomial r = m;
  ++r.exps[i][j];
  return r;
}

Elem evaluate(const PrimeField& f, const Monomial& m, const Point& p) {
  if (m.exps.size() != p.size()) throw DimensionMismatch("point factor count mismatch");
  Elem v = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m.exps[i].size() != p[i].size()) throw DimensionMismatch("point coordinate count mismatch");
    bool nonzero = false;
    for (std::size_t j = 0; j < p[i].size(); ++j) {
      Elem c = f.reduce(p[i][j]);
      nonzero = nonzero || c != 0;
      v = f.mul(v, f.pow(c, static_cast<std::uint64_t>(m.exps[i][j])));
    }
    if (!nonzero) throw std::invalid_argument("factor " + std::to_string(i) + " has all-zero coordinates");
  }
  return v;
}

namespace {

std::vector<std::vector<Elem>> power_table(const PrimeField& f, std::span<const Elem> c, int d) {
  std::vector<std::vector<Elem>> pw(c.size(), std::vector<Elem>(static_cast<std::size_t>(d) + 1, 1));
  for (std::size_t j = 0; j < c.size(); ++j)
    for (int e = 1; e <= d; ++e) pw[j][static_cast<std::size_t>(e)] = f.mul(pw[j][static_cast<std::size_t>(e - 1)], c[j]);
  return pw;
}

}  // namespace

std::vector<Elem> factor_values(const PrimeField& f, int n, int d, std::span<const Elem> coords) {
  if (coords.size() != static_cast<std::size_t>(n + 1)) throw DimensionMismatch("coordinate count");
  const FactorBasis& b = factor_basis(n, d);
  auto pw = power_table(f, coords, d);
  std::vector<Elem> out(b.size());
  for (std::size_t idx = 0; idx < b.size(); ++idx) {
    auto e = b.exps(idx);
    Elem v = 1;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j]) v = f.mul(v, pw[j][static_cast<std::size_t>(e[j])]);
    out[idx] = v;
  }
  return out;
}

std::vector<Elem> factor_derivative(const PrimeField& f, int n, int d, std::span<const Elem> coords,
                                    std::span<const Elem> dir) {
  if (coords.size() != static_cast<std::size_t>(n + 1) || dir.size() != coords.size())
    throw DimensionMismatch("coordinate count");
  const FactorBasis& b = factor_basis(n, d);
  auto pw = power_table(f, coords, d);
  std::vector<Elem> out(b.size(), 0);
  for (std::size_t idx = 0; idx < b.size(); ++idx) {
    auto e = b.exps(idx);
    Elem acc = 0;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0 || dir[j] == 0) continue;
      Elem t = f.mul(dir[j], static_cast<Elem>(e[j]) % f.modulus());
      for (std::size_t l = 0; l < e.size(); ++l) {
        int ex = e[l] - (l == j ? 1 : 0);
        if (ex) t = f.mul(t, pw[l][static_cast<std::size_t>(ex)]);
      }
      acc = f.add(acc, t);
    }
    out[idx] = acc;
  }
  return out;
}

std::vector<Elem> kron(const PrimeField& f, std::span<const Elem> u, std::span<const Elem> v) {
  std::vector<Elem> out(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i * v.size() + j] = f.mul(u[i], v[j]);
  return out;
}

std::vector<Elem> monomial_values(const PrimeField& f, const Space& x, const MultiIndex& a, const Point& p) {
  if (p.size() != x.k() || a.size() != x.k()) throw DimensionMismatch("point or degree does not match space");
  std::vector<Elem> acc{1};
  for (std::size_t i = 0; i < x.k(); ++i) acc = kron(f, acc, factor_values(f, x.n(i), a[i], p[i]));
  return acc;
}

}  // namespace mproj
