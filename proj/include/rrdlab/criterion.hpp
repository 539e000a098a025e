#pragma once

// The criterion engine: normalized sphere means M_n = |C_n|^-1 sum pi(g)/Xi(g), their sup on 1_B
// (the uniform bound U_n), compressed 2-norms, convolution norms on Gamma, and the radial
// combination bound.

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "rrdlab/koopman.hpp"
#include "rrdlab/spheres.hpp"

namespace rrdlab {

namespace detail {

using Wide = __int128;

inline BigInt to_bigint(Wide v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

inline std::int64_t int_pow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / b) throw Error(Errc::memory_budget, "integer power overflows");
    r *= b;
  }
  return r;
}

/// q^((beta + m)/2) for every depth-`depth` cylinder, read off the boundary partition seen from w
/// (m = |w|): beta = m beyond w and 2(i-1) - m on the branch class S_i.
inline std::vector<std::int64_t> scaled_cocycle_profile(const TreeVertex& w, int depth) {
  const int d = w.degree();
  const int m = w.depth();
  std::vector<std::int64_t> out(static_cast<std::size_t>(sphere_size(d, depth)), -1);
  for (const auto& piece : boundary_partition(w)) {
    const int beta = piece.branch == 0 ? m : 2 * (piece.branch - 1) - m;
    const auto width = refinement_width(d, piece.base.depth(), depth);
    const auto start = piece.base.is_root() ? 0 : vertex_index(piece.base) * width;
    const auto value = int_pow(d - 1, (beta + m) / 2);
    for (std::int64_t i = start; i < start + width; ++i) out[static_cast<std::size_t>(i)] = value;
  }
  return out;
}

}  // namespace detail

/// Exact transfer function M_n 1_B written as integers over one common denominator.
struct ExactMean {
  int q = 2;
  int n = 0;
  std::int64_t cells_per_factor = 0;
  std::vector<detail::Wide> numerators;
  BigInt denominator = 1;

  AlgebraicValue value(std::size_t cell) const { return AlgebraicValue(q, Rational(detail::to_bigint(numerators[cell]), denominator)); }
  AlgebraicValue sup() const {
    const auto it = std::max_element(numerators.begin(), numerators.end());
    return value(static_cast<std::size_t>(it - numerators.begin()));
  }
  AlgebraicValue integral() const {
    detail::Wide s = 0;
    for (auto v : numerators) s += v;
    return AlgebraicValue(q, Rational(detail::to_bigint(s), denominator * BigInt(numerators.size())));
  }
  StepFunction to_step_function() const {
    const int depth = std::max(n, 1);
    StepFunction out(q, depth, depth);
    for (std::size_t i = 0; i < numerators.size(); ++i)
      out.at(static_cast<std::int64_t>(i) / cells_per_factor, static_cast<std::int64_t>(i) % cells_per_factor) = value(i);
    return out;
  }
};

/// Per-factor route: elements of C_n are grouped by the vertex pair (g x0, g x0') they move the
/// base pair to; each group contributes an outer product of partition profiles weighted by
/// count / Xi. Depth is max(n, 1) on both factors.
inline ExactMean mean_transfer_exact(const SphereTable& table, int n, const Registries& regs) {
  const auto& sphere = table.sphere(n);
  if (sphere.empty()) throw Error(Errc::empty_sphere, "sphere " + std::to_string(n) + " is empty");
  if (regs.radius() < n) throw Error(Errc::out_of_registry, "registry radius below sphere index");
  const int q = table.q();
  const int d = q + 1;
  const int depth = std::max(n, 1);

  // vertex pair -> multiplicity, in canonical vertex order for determinism
  std::map<std::pair<TreeVertex, TreeVertex>, std::int64_t> groups;
  for (const auto& g : sphere) ++groups[{regs.zero.locate(g), regs.infinity.locate(g)}];

  // 1/Xi on C_n depends on (L0, Linf) only; bring all of them to integers k_p / lcm.
  std::map<int, std::pair<BigInt, BigInt>> inv_xi;  // L0 -> (numerator of Xi, denominator of Xi)
  BigInt lcm = 1;
  for (const auto& [pr, cnt] : groups) {
    const int l0 = pr.first.depth();
    if (inv_xi.count(l0)) continue;
    const auto xi = hc_product(l0, n - l0, q).value;
    if (!xi.is_rational()) throw Error(Errc::invalid_argument, "odd factor length in Gamma");
    const BigInt num = boost::multiprecision::numerator(xi.a());
    inv_xi[l0] = {num, boost::multiprecision::denominator(xi.a())};
    lcm = boost::multiprecision::lcm(lcm, num);
  }
  std::map<int, std::int64_t> weight;
  for (const auto& [l0, nd] : inv_xi) weight[l0] = (nd.second * (lcm / nd.first)).convert_to<std::int64_t>();

  ExactMean out;
  out.q = q;
  out.n = n;
  out.cells_per_factor = sphere_size(d, depth);
  const auto cells = static_cast<std::size_t>(out.cells_per_factor);
  out.numerators.assign(cells * cells, 0);

  // sum over w_inf first for each w0
  std::map<TreeVertex, std::vector<detail::Wide>> partner_sums;
  std::map<TreeVertex, std::vector<std::int64_t>> profiles_inf;
  for (const auto& [pr, cnt] : groups) {
    auto& acc = partner_sums[pr.first];
    if (acc.empty()) acc.assign(cells, 0);
    auto it = profiles_inf.find(pr.second);
    if (it == profiles_inf.end()) it = profiles_inf.emplace(pr.second, detail::scaled_cocycle_profile(pr.second, depth)).first;
    const detail::Wide c = static_cast<detail::Wide>(cnt) * weight.at(pr.first.depth());
    for (std::size_t j = 0; j < cells; ++j) acc[j] += c * it->second[j];
  }
  for (const auto& [w0, acc] : partner_sums) {
    const auto prof0 = detail::scaled_cocycle_profile(w0, depth);
    for (std::size_t i = 0; i < cells; ++i) {
      auto* row = &out.numerators[i * cells];
      const detail::Wide a = prof0[i];
      for (std::size_t j = 0; j < cells; ++j) row[j] += a * acc[j];
    }
  }
  // profile products carry q^(n/2) on C_n
  out.denominator = BigInt(sphere.size()) * lcm * BigInt(detail::int_pow(q, n / 2));
  return out;
}

/// M_n 1_B as an exact step function of depth (max(n,1), max(n,1)).
inline StepFunction mean_transfer_function(const SphereTable& table, int n, const Registries& regs) {
  return mean_transfer_exact(table, n, regs).to_step_function();
}

/// Independent route: every element, every product cylinder, one cocycle evaluation per place.
inline StepFunction mean_transfer_bruteforce(const SphereTable& table, int n, const Registries& regs) {
  const auto& sphere = table.sphere(n);
  if (sphere.empty()) throw Error(Errc::empty_sphere, "sphere " + std::to_string(n) + " is empty");
  const int q = table.q();
  const int d = q + 1;
  const int depth = std::max(n, 1);
  const auto cyls = sphere_vertices(d, depth);
  StepFunction out(q, depth, depth);
  const Rational inv_size(1, static_cast<std::int64_t>(sphere.size()));
  for (const auto& g : sphere) {
    const auto& w0 = regs.zero.locate(g);
    const auto& winf = regs.infinity.locate(g);
    const auto scale = hc_product(g.length(Place::zero), g.length(Place::infinity), q).value.inverse() * inv_size;
    std::vector<AlgebraicValue> c0, cinf;
    for (const auto& y : cyls) {
      c0.push_back(cocycle_sqrt(w0, BoundaryCylinder(y)) * scale);
      cinf.push_back(cocycle_sqrt(winf, BoundaryCylinder(y)));
    }
    for (std::size_t i = 0; i < cyls.size(); ++i)
      for (std::size_t j = 0; j < cyls.size(); ++j) out.at(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)) += c0[i] * cinf[j];
  }
  return out;
}

struct MeanReport {
  int n = 0;
  AlgebraicValue value{2};
  double value_double = 0;
  int depth = 0;
  std::size_t sphere_size = 0;
  double seconds = 0;
};

/// U_n = sup of M_n 1_B, which equals the inf-to-inf norm of M_n and bounds its 2-norm.
inline MeanReport uniform_bound_value(const SphereTable& table, int n, const Registries& regs) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto exact = mean_transfer_exact(table, n, regs);
  MeanReport rep;
  rep.n = n;
  rep.value = exact.sup();
  rep.value_double = rep.value.to_double();
  rep.depth = std::max(n, 1);
  rep.sphere_size = table.sphere_size(n);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Exact (1/|C_n|) sum pi(g) h, optionally divided by Xi(g), written at depth k + n per factor.
inline StepFunction mean_operator_apply(const SphereTable& table, int n, const StepFunction& h, const Registries& regs, bool divide_by_xi) {
  const auto& sphere = table.sphere(n);
  if (sphere.empty()) throw Error(Errc::empty_sphere, "sphere " + std::to_string(n) + " is empty");
  const int k0 = h.depth(Place::zero) + n, kinf = h.depth(Place::infinity) + n;
  const int out0 = std::max(k0, 1), outinf = std::max(kinf, 1);
  StepFunction out(table.q(), out0, outinf);
  const Rational inv_size(1, static_cast<std::int64_t>(sphere.size()));
  for (const auto& g : sphere) {
    auto img = koopman_matrix(g, h.depth(Place::zero), h.depth(Place::infinity), regs).apply(h).refined(out0, outinf);
    AlgebraicValue scale(table.q(), inv_size);
    if (divide_by_xi) scale = scale * hc_product(g.length(Place::zero), g.length(Place::infinity), table.q()).value.inverse();
    for (std::size_t i = 0; i < out.cells(); ++i) {
      const auto a = static_cast<std::int64_t>(i) / out.size(Place::infinity);
      const auto b = static_cast<std::int64_t>(i) % out.size(Place::infinity);
      out.at(a, b) += img.at(a, b) * scale;
    }
  }
  return out;
}

struct PowerIterationResult {
  double value = 0;
  int iterations = 0;
  bool converged = false;
  double last_change = 0;
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5EED;
};

namespace detail {

/// Largest eigenvalue of a positive semidefinite operator by power iteration from a seeded
/// positive start vector; convergence is relative change of the Rayleigh quotient.
template <class Apply>
PowerIterationResult power_iterate(std::size_t dim, Apply&& apply, const PowerIterationOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> x(dim), y(dim);
  for (auto& v : x) v = u(rng);
  auto normalize = [](std::vector<double>& v) {
    const double s = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (s > 0)
      for (auto& e : v) e /= s;
    return s;
  };
  normalize(x);
  PowerIterationResult res;
  double prev = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    apply(x, y);
    const double lambda = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    res.iterations = it;
    res.value = lambda;
    res.last_change = std::abs(lambda - prev) / std::max(std::abs(lambda), 1e-300);
    if (normalize(y) == 0) {
      res.converged = true;
      res.value = 0;
      return res;
    }
    x.swap(y);
    if (it > 1 && res.last_change < opt.tolerance) {
      res.converged = true;
      return res;
    }
    prev = lambda;
  }
  return res;
}

}  // namespace detail

/// Largest singular value of M_n on depth-(K, K) step functions, norms taken against the
/// product measure; outputs are compared at the common depth K + n.
inline PowerIterationResult mean_matrix_2norm(const SphereTable& table, int n, int K, const Registries& regs, const PowerIterationOptions& opt = {}) {
  const auto& sphere = table.sphere(n);
  if (sphere.empty()) throw Error(Errc::empty_sphere, "sphere " + std::to_string(n) + " is empty");
  if (K < 0) throw Error(Errc::invalid_argument, "negative depth");
  const int q = table.q();
  const int d = q + 1;
  const int out_depth = std::max(K + n, 1);
  if (regs.radius() < out_depth) throw Error(Errc::out_of_registry, "registry radius below K + n");
  const auto in_n = static_cast<std::size_t>(sphere_size(d, K));
  const auto out_n = static_cast<std::size_t>(sphere_size(d, out_depth));

  struct Factor {
    std::vector<std::int64_t> source;
    std::vector<double> weight;
  };
  auto to_factor = [&](const FactorMap& m) {
    const auto r = m.refined(out_depth);
    Factor f{r.source, {}};
    f.weight.reserve(r.beta.size());
    for (int b : r.beta) f.weight.push_back(std::pow(static_cast<double>(q), b / 2.0));
    return f;
  };
  // elements grouped by their place-zero factor, which is shared by many elements
  std::map<std::pair<std::vector<std::int64_t>, std::vector<int>>, std::size_t> key_index;
  std::vector<Factor> zero_factors;
  std::vector<std::vector<std::pair<double, Factor>>> members;
  for (const auto& g : sphere) {
    const auto m0 = koopman_factor(g, regs.zero, K).refined(out_depth);
    auto [it, fresh] = key_index.emplace(std::pair{m0.source, m0.beta}, zero_factors.size());
    if (fresh) {
      zero_factors.push_back(to_factor(m0));
      members.emplace_back();
    }
    const double c = 1.0 / (static_cast<double>(sphere.size()) * hc_product(g.length(Place::zero), g.length(Place::infinity), q).value.to_double());
    members[it->second].emplace_back(c, to_factor(koopman_factor(g, regs.infinity, K)));
  }

  std::vector<double> z(in_n * out_n), t(in_n * out_n), mid(out_n * out_n);
  // y = M^T M x on the in x in grid
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    std::fill(mid.begin(), mid.end(), 0.0);
    for (std::size_t k = 0; k < zero_factors.size(); ++k) {
      std::fill(z.begin(), z.end(), 0.0);
      for (const auto& [c, f] : members[k])
        for (std::size_t a = 0; a < in_n; ++a) {
          const double* xr = &x[a * in_n];
          double* zr = &z[a * out_n];
          for (std::size_t j = 0; j < out_n; ++j) zr[j] += c * f.weight[j] * xr[f.source[j]];
        }
      const auto& f0 = zero_factors[k];
      for (std::size_t i = 0; i < out_n; ++i) {
        const double w = f0.weight[i];
        const double* zr = &z[static_cast<std::size_t>(f0.source[i]) * out_n];
        double* mr = &mid[i * out_n];
        for (std::size_t j = 0; j < out_n; ++j) mr[j] += w * zr[j];
      }
    }
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < zero_factors.size(); ++k) {
      const auto& f0 = zero_factors[k];
      std::fill(t.begin(), t.end(), 0.0);
      for (std::size_t i = 0; i < out_n; ++i) {
        const double w = f0.weight[i];
        const double* mr = &mid[i * out_n];
        double* tr = &t[static_cast<std::size_t>(f0.source[i]) * out_n];
        for (std::size_t j = 0; j < out_n; ++j) tr[j] += w * mr[j];
      }
      for (const auto& [c, f] : members[k])
        for (std::size_t a = 0; a < in_n; ++a) {
          const double* tr = &t[a * out_n];
          double* yr = &y[a * in_n];
          for (std::size_t j = 0; j < out_n; ++j) yr[f.source[j]] += c * f.weight[j] * tr[j];
        }
    }
  };
  auto res = detail::power_iterate(in_n * in_n, apply, opt);
  // adjoint for the measure-weighted inner products is (mu_out / mu_in) M^T
  const double ratio = static_cast<double>(in_n * in_n) / static_cast<double>(out_n * out_n);
  res.value = std::sqrt(std::max(res.value, 0.0) * ratio);
  return res;
}

/// Lower bound for the convolution norm of 1_{C_n} on l2(Gamma): power iteration on the
/// square of its compression to the L-ball of radius R.
inline PowerIterationResult convolution_opnorm_lower(const SphereTable& table, int n, int R, const PowerIterationOptions& opt = {}) {
  if (R < 0 || R + n > table.max_length())
    throw Error(Errc::table_too_small, "need R + n <= " + std::to_string(table.max_length()));
  const auto& sphere = table.sphere(n);
  std::vector<SL2Element> ball;
  for (int k = 0; k <= R; ++k) ball.insert(ball.end(), table.sphere(k).begin(), table.sphere(k).end());
  std::unordered_map<SL2Element, std::size_t, SL2Hash> index;
  for (std::size_t i = 0; i < ball.size(); ++i) index.emplace(ball[i], i);
  // (1_C * f)(g) = sum_{c in C} f(c^-1 g)
  std::vector<std::vector<std::size_t>> adj(ball.size());
  std::vector<SL2Element> inverses;
  for (const auto& c : sphere) inverses.push_back(c.inverse());
  for (std::size_t i = 0; i < ball.size(); ++i)
    for (const auto& ci : inverses) {
      const SL2Element h = ci * ball[i];
      if (h.total_length() > R) continue;
      adj[i].push_back(index.at(h));
    }
  std::vector<double> tmp(ball.size());
  auto conv = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < adj.size(); ++i) {
      double s = 0;
      for (auto j : adj[i]) s += x[j];
      y[i] = s;
    }
  };
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    conv(x, tmp);
    conv(tmp, y);
  };
  auto res = detail::power_iterate(ball.size(), apply, opt);
  res.value = std::sqrt(std::max(res.value, 0.0));
  return res;
}

/// Per-sphere data of a radial function f = sum a_n 1_n.
struct RadialTerm {
  double coefficient = 0;   // a_n
  double sphere_bound = 0;  // b_n, a bound for the convolution norm of 1_n
  double sphere_norm = 0;   // ||1_n||_2 = sqrt|C_n|
};

struct RadialBound {
  double direct = 0;
  double cauchy_schwarz = 0;
  double constant = 0;  // C = (sum over support of (1+n)^-2)^(1/2)
  double l2_norm = 0;
  int length = 0;       // L(f) = largest n in the support
};

inline double eval_polynomial(const std::vector<double>& coeffs, double t) {
  double r = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * t + *it;
  return r;
}

/// Direct bound sum |a_n| b_n and the form C Q(L(f)) ||f||_2 with Q(t) = (1+t)^2 P(t)^2.
inline RadialBound radial_bound_combiner(const std::map<int, RadialTerm>& terms, const std::vector<double>& poly) {
  RadialBound out;
  double c2 = 0, f2 = 0;
  for (const auto& [n, t] : terms) {
    if (t.coefficient == 0) continue;
    out.direct += std::abs(t.coefficient) * t.sphere_bound;
    c2 += 1.0 / ((1.0 + n) * (1.0 + n));
    f2 += t.coefficient * t.coefficient * t.sphere_norm * t.sphere_norm;
    out.length = std::max(out.length, n);
  }
  out.constant = std::sqrt(c2);
  out.l2_norm = std::sqrt(f2);
  const double p = eval_polynomial(poly, out.length);
  const double qv = (1.0 + out.length) * (1.0 + out.length) * p * p;
  out.cauchy_schwarz = out.constant * qv * out.l2_norm;
  return out;
}

}  // namespace rrdlab
