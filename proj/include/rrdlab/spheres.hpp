#pragma once

// Spheres C_n = {L = n} of SL2(F_q[X, X^-1]) for L = L_0 + L_inf: certified enumeration through
// the coefficient window, a word-metric BFS cross-check, and the certificates built on them.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "rrdlab/boundary.hpp"
#include "rrdlab/sl2.hpp"
#include "rrdlab/tree.hpp"
#include "rrdlab/version.hpp"

namespace rrdlab {

enum class Provenance { certified_window, bfs_heuristic };

inline const char* provenance_name(Provenance p) { return p == Provenance::certified_window ? "certified-window" : "bfs-heuristic"; }

using LengthPair = std::pair<int, int>;

class SphereTable {
 public:
  SphereTable(const Field& f, int max_length, Provenance prov) : field_(&f), max_length_(max_length), provenance_(prov) {
    if (max_length < 0) throw Error(Errc::invalid_argument, "negative max length");
    buckets_.resize(static_cast<std::size_t>(max_length) + 1);
  }

  const Field& field() const noexcept { return *field_; }
  int q() const noexcept { return field_->q(); }
  int max_length() const noexcept { return max_length_; }
  Provenance provenance() const noexcept { return provenance_; }
  /// For BFS tables: counts were stable over the last two word radii.
  bool saturated() const noexcept { return saturated_; }
  void set_saturated(bool s) noexcept { saturated_ = s; }

  const std::vector<SL2Element>& sphere(int n) const {
    if (n < 0 || n > max_length_) throw Error(Errc::table_too_small, "sphere " + std::to_string(n) + " outside table (max " + std::to_string(max_length_) + ")");
    return buckets_[static_cast<std::size_t>(n)];
  }
  std::size_t sphere_size(int n) const { return sphere(n).size(); }
  std::size_t ball_size(int n) const {
    std::size_t s = 0;
    for (int k = 0; k <= std::min(n, max_length_); ++k) s += buckets_[static_cast<std::size_t>(k)].size();
    return s;
  }

  /// Multiset of realized (L_0, L_inf) on C_n.
  std::map<LengthPair, std::int64_t> length_pairs(int n) const {
    std::map<LengthPair, std::int64_t> out;
    for (const auto& g : sphere(n)) ++out[{g.length(Place::zero), g.length(Place::infinity)}];
    return out;
  }

  /// Adds an element with L <= max length; elements beyond are ignored. Returns false for those.
  bool add(const SL2Element& g) {
    const int n = g.total_length();
    if (n > max_length_) return false;
    buckets_[static_cast<std::size_t>(n)].push_back(g);
    return true;
  }
  /// Sorts every bucket in canonical order and removes duplicates.
  void finalize() {
    for (auto& b : buckets_) {
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format"] = "rrdlab-sphere-table";
    j["tool_version"] = version_string;
    j["q"] = q();
    j["max_length"] = max_length_;
    j["provenance"] = provenance_name(provenance_);
    j["saturated"] = saturated_;
    nlohmann::json b = nlohmann::json::object();
    for (int n = 0; n <= max_length_; ++n) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& g : buckets_[static_cast<std::size_t>(n)]) list.push_back(g.serialize());
      b[std::to_string(n)] = std::move(list);
    }
    j["buckets"] = std::move(b);
    return j;
  }

  /// Rebuilds a table, rejecting caches from another major version and entries in the wrong bucket.
  static SphereTable from_json(const nlohmann::json& j) {
    try {
      if (j.at("format") != "rrdlab-sphere-table") throw Error(Errc::parse_error, "not a sphere table");
      const std::string ver = j.at("tool_version");
      if (std::stoi(ver.substr(0, ver.find('.'))) != version_major)
        throw Error(Errc::stale_cache, "sphere table written by tool version " + ver);
      const std::string prov = j.at("provenance");
      SphereTable t(Field::get(j.at("q").get<int>()), j.at("max_length").get<int>(),
                    prov == "certified-window" ? Provenance::certified_window : Provenance::bfs_heuristic);
      t.saturated_ = j.at("saturated").get<bool>();
      for (int n = 0; n <= t.max_length_; ++n)
        for (const auto& s : j.at("buckets").at(std::to_string(n))) {
          auto g = SL2Element::parse(t.field(), s.get<std::string>());
          if (g.total_length() != n) throw Error(Errc::parse_error, "element " + s.get<std::string>() + " filed under length " + std::to_string(n));
          t.buckets_[static_cast<std::size_t>(n)].push_back(std::move(g));
        }
      return t;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse_error, std::string("sphere table: ") + e.what());
    }
  }

 private:
  const Field* field_;
  int max_length_;
  Provenance provenance_;
  bool saturated_ = true;
  std::vector<std::vector<SL2Element>> buckets_;
};

namespace detail {

/// All elements of A with support in exponents [-s, s], zero first.
inline std::vector<LaurentPolynomial> window_elements(const Field& f, int s) {
  const int width = 2 * s + 1;
  std::vector<LaurentPolynomial> out;
  std::vector<Coeff> digits(static_cast<std::size_t>(width), 0);
  while (true) {
    out.emplace_back(f, -s, digits);
    int i = 0;
    while (i < width && ++digits[i] == f.q()) digits[i++] = 0;
    if (i == width) break;
  }
  return out;
}

inline bool in_window(const LaurentPolynomial& p, int s) { return p.is_zero() || (p.low() >= -s && p.high() <= s); }

/// All polynomials of degree <= deg (one element, zero, when deg < 0).
inline std::vector<poly::Poly> polys_up_to(const Field& f, int deg) {
  std::vector<poly::Poly> out;
  if (deg < 0) {
    out.emplace_back();
    return out;
  }
  std::vector<Coeff> digits(static_cast<std::size_t>(deg) + 1, 0);
  while (true) {
    poly::Poly p = digits;
    poly::trim(p);
    out.push_back(std::move(p));
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == f.q()) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

/// X^k mod m for any integer k; m has nonzero constant term and degree >= 1.
inline poly::Poly x_power_mod(const Field& f, int k, const poly::Poly& m) {
  poly::Poly x = poly::divmod(f, {0, 1}, m).second;
  if (k < 0) {
    x = *poly::inverse_mod(f, x, m);
    k = -k;
  }
  poly::Poly r = poly::divmod(f, {1}, m).second;
  for (int i = 0; i < k; ++i) r = poly::divmod(f, poly::mul(f, r, x), m).second;
  return r;
}

/// Every g with first row (a, b) and L(g) <= n_max, entries inside the window [-s, s].
inline void complete_first_row(const LaurentPolynomial& a, const LaurentPolynomial& b, int s, int n_max,
                               const std::vector<LaurentPolynomial>& window, std::vector<SL2Element>& out) {
  const Field& f = a.field();
  auto emit = [&](const LaurentPolynomial& c, const LaurentPolynomial& d) {
    SL2Element g(a, b, c, d);
    if (g.total_length() <= n_max) out.push_back(std::move(g));
  };
  if (a.is_zero()) {
    if (!b.is_unit()) return;
    const LaurentPolynomial c = -LaurentPolynomial::monomial(f, f.inv(b.coeffs()[0]), -b.low());
    for (const auto& d : window) emit(c, d);
    return;
  }
  // c = X^-s P with P = r + a~ u, where r solves b X^-s P = -1 mod a~ (a = X^low a~).
  const poly::Poly& at = a.stripped();
  const int deg_a = poly::degree(at);
  poly::Poly r;
  if (deg_a > 0) {
    if (b.is_zero()) return;
    const auto binv = poly::inverse_mod(f, b.stripped(), at);
    if (!binv) return;
    r = poly::mul(f, x_power_mod(f, s - b.low(), at), *binv);
    r = poly::divmod(f, poly::scale(f, r, f.neg(1)), at).second;
  }
  const auto one = LaurentPolynomial::one(f);
  for (const auto& u : polys_up_to(f, 2 * s - deg_a)) {
    const LaurentPolynomial c = LaurentPolynomial::from_poly(f, -s, poly::add(f, r, poly::mul(f, at, u)));
    if (!in_window(c, s)) continue;
    const auto d = LaurentPolynomial::divide_exact(one + b * c, a);
    if (!d) throw Error(Errc::invalid_argument, "window completion failed to divide");
    if (in_window(*d, s)) emit(c, *d);
  }
}

}  // namespace detail

/// Upper bound used by the memory-budget guard: vertex pairs times stabilizer order, times a
/// generous per-element footprint.
inline double estimated_table_bytes(int q, int n) {
  const double elems = ball_count_formula(q + 1, n).convert_to<double>() * (q * q * q - q);
  return elems * 256.0;
}

/// All g with L(g) <= N. L_0 <= N forces every entry to have lowest exponent >= -N/2 and
/// L_inf <= N forces highest exponent <= N/2, so entries lie in a finite window; each coprime
/// first row is completed by solving the second row modulo the first entry.
inline SphereTable enumerate_ball(int q, int max_length, int threads = 1, double memory_budget_bytes = 4.0 * (1ull << 30)) {
  const Field& f = Field::get(q);
  if (max_length < 0) throw Error(Errc::invalid_argument, "negative max length");
  if (estimated_table_bytes(q, max_length) > memory_budget_bytes)
    throw Error(Errc::window_overflow, "ball of radius " + std::to_string(max_length) + " exceeds the memory budget");
  const int s = max_length / 2;
  const double window_size = std::pow(static_cast<double>(q), 2 * s + 1);
  if (window_size > 1e6) throw Error(Errc::window_overflow, "coefficient window too large");
  const auto window = detail::window_elements(f, s);

  const int nthreads = std::max(1, threads);
  std::vector<std::vector<SL2Element>> parts(static_cast<std::size_t>(nthreads));
  auto work = [&](int t) {
    for (std::size_t i = static_cast<std::size_t>(t); i < window.size(); i += static_cast<std::size_t>(nthreads))
      for (const auto& b : window) detail::complete_first_row(window[i], b, s, max_length, window, parts[t]);
  };
  if (nthreads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  SphereTable table(f, max_length, Provenance::certified_window);
  for (const auto& part : parts)
    for (const auto& g : part) table.add(g);
  table.finalize();
  return table;
}

/// Counts of elements with L <= N after each word radius, from a BFS over the elementary
/// generators E12(s), E21(s) (s = a X^e, |e| <= 1, a != 0) and diag(X, X^-1)^{+-1}.
struct BfsCrosscheck {
  SphereTable table;
  std::vector<std::size_t> counts_by_radius;
};

inline std::vector<SL2Element> elementary_generating_set(const Field& f) {
  std::vector<SL2Element> gens;
  for (int a = 1; a < f.q(); ++a)
    for (int e = -1; e <= 1; ++e) {
      const auto s = LaurentPolynomial::monomial(f, static_cast<Coeff>(a), e);
      gens.push_back(SL2Element::upper(s));
      gens.push_back(SL2Element::lower(s));
    }
  gens.push_back(SL2Element::diagonal(f, 1));
  gens.push_back(SL2Element::diagonal(f, -1));
  return gens;
}

/// Elements farther than N + slack are pruned from the frontier, so elements whose every word
/// passes that far are missed; the table is marked saturated only when the count of L <= N is
/// unchanged over the last two radii.
inline BfsCrosscheck bfs_crosscheck(int q, int max_length, int word_radius, int slack = 4) {
  const Field& f = Field::get(q);
  const auto gens = elementary_generating_set(f);
  std::unordered_set<SL2Element, SL2Hash> seen;
  std::vector<SL2Element> frontier{SL2Element::identity(f)};
  seen.insert(frontier.front());
  std::vector<std::size_t> counts;
  auto count_inside = [&] {
    return static_cast<std::size_t>(std::count_if(seen.begin(), seen.end(), [&](const SL2Element& g) { return g.total_length() <= max_length; }));
  };
  counts.push_back(count_inside());
  for (int r = 1; r <= word_radius; ++r) {
    std::vector<SL2Element> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        SL2Element h = g * s;
        if (h.total_length() > max_length + slack) continue;
        if (seen.insert(h).second) next.push_back(std::move(h));
      }
    frontier = std::move(next);
    counts.push_back(count_inside());
  }
  SphereTable table(f, max_length, Provenance::bfs_heuristic);
  for (const auto& g : seen) table.add(g);
  table.finalize();
  table.set_saturated(counts.size() >= 2 && counts[counts.size() - 1] == counts[counts.size() - 2]);
  return {std::move(table), std::move(counts)};
}

/// Largest Xi over the realized length pairs of C_n; nullopt for an empty sphere.
inline std::optional<HarishChandraValue> sup_xi_on_sphere(const SphereTable& table, int n) {
  std::optional<HarishChandraValue> best;
  for (const auto& [pr, count] : table.length_pairs(n)) {
    auto v = hc_product(pr.first, pr.second, table.q());
    if (!best || v.value > best->value) best = std::move(v);
  }
  return best;
}

/// Largest Xi over every even splitting of n, whether realized or not.
inline HarishChandraValue sup_xi_over_splittings(int n, int q) {
  std::optional<HarishChandraValue> best;
  for (int a = 0; a <= n; a += 2) {
    auto v = hc_product(a, n - a, q);
    if (!best || v.value > best->value) best = std::move(v);
  }
  return *best;
}

struct ConditionOneRow {
  int n = 0;
  std::size_t sphere_size = 0;
  std::optional<HarishChandraValue> sup_xi;
  double value = 0;         // sup Xi * sqrt|C_n|
  double normalized = 0;    // value / n^exponent, n >= 2
  BigInt fiber_bound = 0;   // (|B_n| - |B_{n-1}|)(q^3 - q)
  double rigorous = 0;      // sup over splittings * sqrt(fiber_bound)
};

struct ConditionOneReport {
  double exponent = 2.5;
  std::vector<ConditionOneRow> rows;
  double fitted_constant = 0;
  bool rigorous_dominates = true;
};

inline ConditionOneReport condition_one_certificate(const SphereTable& table, double exponent = 2.5) {
  if (table.ball_size(table.max_length()) == 0) throw Error(Errc::empty_sphere, "empty sphere table");
  ConditionOneReport rep;
  rep.exponent = exponent;
  const int q = table.q();
  for (int n = 0; n <= table.max_length(); n += 2) {
    ConditionOneRow row;
    row.n = n;
    row.sphere_size = table.sphere_size(n);
    row.sup_xi = sup_xi_on_sphere(table, n);
    if (row.sup_xi) row.value = row.sup_xi->value.to_double() * std::sqrt(static_cast<double>(row.sphere_size));
    if (n >= 2) {
      row.normalized = row.value / std::pow(static_cast<double>(n), exponent);
      rep.fitted_constant = std::max(rep.fitted_constant, row.normalized);
    }
    const BigInt pairs = ball_count_formula(q + 1, n) - (n > 0 ? ball_count_formula(q + 1, n - 1) : BigInt(0));
    row.fiber_bound = pairs * (q * q * q - q);
    row.rigorous = sup_xi_over_splittings(n, q).value.to_double() * std::sqrt(row.fiber_bound.convert_to<double>());
    if (row.rigorous < row.value || BigInt(row.sphere_size) > row.fiber_bound) rep.rigorous_dominates = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct GrowthRow {
  int n = 0;
  BigInt pair_count = 0;
  std::size_t sphere_size = 0;
  Rational ratio = 0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  Rational empirical_constant = 0;
};

/// pairCount(n) / |C_n| over even n, with pairCount the number of vertex pairs at L1 distance
/// exactly n (Haar measure of the corresponding double-coset shell with mu(G_0) = 1).
inline GrowthReport growth_comparison(const SphereTable& table) {
  GrowthReport rep;
  const int d = table.q() + 1;
  for (int n = 0; n <= table.max_length(); n += 2) {
    GrowthRow row;
    row.n = n;
    row.pair_count = ball_count_formula(d, n) - (n > 0 ? ball_count_formula(d, n - 1) : BigInt(0));
    row.sphere_size = table.sphere_size(n);
    if (row.sphere_size == 0) throw Error(Errc::empty_sphere, "even sphere " + std::to_string(n) + " is empty");
    row.ratio = Rational(row.pair_count) / Rational(row.sphere_size);
    rep.empirical_constant = std::max(rep.empirical_constant, row.ratio);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rrdlab
