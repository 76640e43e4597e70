#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "unx/graph.hpp"
#include "unx/rng.hpp"

namespace unx {

/// Gabber-Galil style expander on Z_m x Z_m: eight affine maps
///   (x,y) -> (x+y,y), (x+y+1,y), (x,y+x), (x,y+x+1)  and their inverses.
/// adj[u][v] = number of maps sending u to v; the family is closed under
/// inverse, so the matrix is symmetric and every row sum is exactly 8.
/// Fixed points become loop units (diagonal entries).
inline RegularGraph gabber_galil(std::uint32_t m) {
  if (m < 2) throw Error("gabber_galil: side length must be >= 2");
  const std::uint32_t n = m * m;
  auto idx = [m](std::uint32_t x, std::uint32_t y) { return x * m + y; };
  auto addm = [m](std::uint32_t a, std::uint32_t b) { return (a + b) % m; };
  auto subm = [m](std::uint32_t a, std::uint32_t b) {
    return (a + m - b % m) % m;
  };
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n) * n, 0);
  for (std::uint32_t x = 0; x < m; ++x) {
    for (std::uint32_t y = 0; y < m; ++y) {
      const std::uint32_t u = idx(x, y);
      const std::uint32_t images[8] = {
          idx(addm(x, y), y),           idx(addm(addm(x, y), 1), y),
          idx(x, addm(y, x)),           idx(x, addm(addm(y, x), 1)),
          idx(subm(x, y), y),           idx(subm(subm(x, y), 1), y),
          idx(x, subm(y, x)),           idx(x, subm(subm(y, x), 1))};
      for (auto v : images) adj[static_cast<std::size_t>(u) * n + v] += 1;
    }
  }
  return RegularGraph(n, std::move(adj), 8);
}

/// Circulant graph on Z_n: u ~ v iff (v-u mod n) in conn. conn must be
/// closed under s -> n-s and must not contain 0, which makes the graph
/// loop-free and exactly |conn|-regular.
inline RegularGraph circulant(std::uint32_t n,
                              const std::vector<std::uint32_t>& conn) {
  if (n < 2) throw Error("circulant: n must be >= 2");
  std::vector<char> in_conn(n, 0);
  for (auto s : conn) {
    if (s == 0) throw Error("circulant: 0 in connection set");
    if (s >= n) throw Error("circulant: connection step out of range");
    in_conn[s] = 1;
  }
  for (std::uint32_t s = 1; s < n; ++s)
    if (in_conn[s] != in_conn[n - s])
      throw Error("circulant: connection set not symmetric under s -> n-s");
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n) * n, 0);
  std::uint32_t d = 0;
  for (std::uint32_t s = 1; s < n; ++s) d += in_conn[s];
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t s = 1; s < n; ++s)
      if (in_conn[s]) adj[static_cast<std::size_t>(u) * n + (u + s) % n] += 1;
  return RegularGraph(n, std::move(adj), d);
}

/// Analytic circulant spectrum: the characters of Z_n diagonalize every
/// circulant, giving lambda_j = sum_{s in conn} cos(2 pi j s / n).
inline std::vector<double> circulant_spectrum_analytic(
    std::uint32_t n, const std::vector<std::uint32_t>& conn) {
  std::vector<char> in_conn(n, 0);
  for (auto s : conn) {
    if (s == 0) throw Error("circulant: 0 in connection set");
    if (s >= n) throw Error("circulant: connection step out of range");
    in_conn[s] = 1;
  }
  for (std::uint32_t s = 1; s < n; ++s)
    if (in_conn[s] != in_conn[n - s])
      throw Error("circulant: connection set not symmetric under s -> n-s");
  std::vector<double> out(n, 0.0);
  for (std::uint32_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::uint32_t s = 1; s < n; ++s)
      if (in_conn[s])
        acc += std::cos(2.0 * std::numbers::pi * double(j) * double(s) / double(n));
    out[j] = acc;
  }
  return out;
}

/// Adjacency matrix power A^k. With the loop-units-count-once convention the
/// result is exactly d^k-regular when G is d-regular.
inline RegularGraph power(const RegularGraph& g, std::uint32_t k) {
  if (k < 1) throw Error("power: exponent must be >= 1");
  const std::uint32_t n = g.n();
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(n) * n, 0);
  for (std::uint32_t i = 0; i < n; ++i) acc[static_cast<std::size_t>(i) * n + i] = 1;
  std::vector<std::uint64_t> base(g.adjacency().begin(), g.adjacency().end());
  std::vector<std::uint64_t> tmp(static_cast<std::size_t>(n) * n, 0);
  std::uint32_t e = k;
  while (e > 0) {
    auto mul = [n, &tmp](std::vector<std::uint64_t>& a,
                         const std::vector<std::uint64_t>& b) {
      std::fill(tmp.begin(), tmp.end(), 0);
      for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t l = 0; l < n; ++l) {
          const std::uint64_t x = a[static_cast<std::size_t>(i) * n + l];
          if (!x) continue;
          for (std::uint32_t j = 0; j < n; ++j) {
            std::uint64_t add = x * b[static_cast<std::size_t>(l) * n + j];
            std::uint64_t& cell = tmp[static_cast<std::size_t>(i) * n + j];
            if (cell > UINT64_MAX - add)
              throw Error("power: multiplicity overflow");
            cell += add;
          }
        }
      a.swap(tmp);
    };
    if (e & 1) mul(acc, base);
    e >>= 1;
    if (e) mul(base, base);
  }
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    if (acc[i] > UINT32_MAX) throw Error("power: multiplicity exceeds 2^32");
    adj[i] = static_cast<std::uint32_t>(acc[i]);
  }
  std::optional<std::uint32_t> d;
  if (g.declared_degree()) {
    std::uint64_t dk = 1;
    for (std::uint32_t i = 0; i < k; ++i) dk *= *g.declared_degree();
    if (dk <= UINT32_MAX) d = static_cast<std::uint32_t>(dk);
  }
  return RegularGraph(n, std::move(adj), d);
}

enum class EigMethod { Exact, PowerIteration };

struct SpectrumReport {
  double lambda = 0.0;          // max |eig| excluding +d and, if bipartite, -d
  double lambda_mixing = 0.0;   // max |eig| excluding only one copy of +d
  EigMethod method = EigMethod::Exact;
  double residual = 0.0;
  bool bipartite_flag = false;  // whether -d was excluded as trivial
  bool converged = true;        // PowerIteration only; Exact always true
  std::uint32_t degree = 0;
  std::vector<double> eigenvalues;  // full list (Exact), sorted descending
};

namespace detail {

/// Cyclic-by-row Jacobi rotations on a dense symmetric matrix. Stops once
/// the off-diagonal Frobenius norm drops below tol * max(1, ||A||_F).
/// Eigenvalue error is bounded by the returned residual (Weyl).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a,
                                              std::uint32_t n, double tol,
                                              double* residual_out) {
  auto at = [&a, n](std::uint32_t i, std::uint32_t j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) norm += a[i] * a[i];
  norm = std::sqrt(norm);
  const double target = tol * std::max(1.0, norm);
  auto off_norm = [&] {
    double s = 0.0;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) s += at(i, j) * at(i, j);
    return std::sqrt(2.0 * s);
  };
  const int max_sweeps = 64;
  double off = off_norm();
  for (int sweep = 0; sweep < max_sweeps && off > target; ++sweep) {
    for (std::uint32_t p = 0; p < n; ++p) {
      for (std::uint32_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p), aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::uint32_t k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::uint32_t k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
    off = off_norm();
  }
  if (residual_out) *residual_out = off;
  std::vector<double> eig(n);
  for (std::uint32_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace detail

/// Second-largest absolute nontrivial eigenvalue of a connected regular
/// graph. Exact mode runs a full Jacobi eigensolve (n <= 4096); one copy of
/// +d is dropped as trivial and, when the graph is 2-colorable, one copy of
/// -d as well. lambda_mixing keeps -d, which is the bound the mixing lemma
/// actually needs on bipartite graphs.
inline SpectrumReport lambda_of(const RegularGraph& g,
                                EigMethod mode = EigMethod::Exact,
                                double tol = 1e-10,
                                std::uint32_t max_iter = 100000,
                                std::uint64_t seed = 1) {
  if (!g.is_regular()) throw Error("lambda_of: graph is not regular");
  if (!g.is_connected()) throw Error("lambda_of: graph is disconnected");
  const std::uint32_t n = g.n();
  const std::uint32_t d = g.row_sum(0);
  const bool bip = g.is_bipartite();

  SpectrumReport rep;
  rep.method = mode;
  rep.bipartite_flag = bip;
  rep.degree = d;

  if (mode == EigMethod::Exact) {
    if (n > 4096) throw Error("lambda_of: exact eigensolve guard n <= 4096");
    std::vector<double> a(g.adjacency().begin(), g.adjacency().end());
    rep.eigenvalues = detail::jacobi_eigenvalues(std::move(a), n, tol, &rep.residual);
    // drop one +d (largest entry); it must sit at the front
    std::vector<double> rest(rep.eigenvalues.begin() + 1, rep.eigenvalues.end());
    double lm = 0.0;
    for (double x : rest) lm = std::max(lm, std::abs(x));
    rep.lambda_mixing = lm;
    if (bip && !rest.empty()) rest.pop_back();  // drop one -d (smallest)
    double l = 0.0;
    for (double x : rest) l = std::max(l, std::abs(x));
    rep.lambda = l;
    return rep;
  }

  // Power iteration on the complement of the trivial eigenspaces, with
  // re-orthogonalization every step. Estimate is a Rayleigh quotient, so it
  // never exceeds the exact lambda.
  auto bipart = g.bipartition();
  std::vector<double> sign;
  if (bip && bipart) {
    sign.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) sign[i] = (*bipart)[i] ? -1.0 : 1.0;
  }
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.unit() - 0.5;
  auto orth = [&](std::vector<double>& x) {
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    for (auto& e : x) e -= mean;
    if (!sign.empty()) {
      double dot = 0.0;
      for (std::uint32_t i = 0; i < n; ++i) dot += x[i] * sign[i];
      dot /= n;
      for (std::uint32_t i = 0; i < n; ++i) x[i] -= dot * sign[i];
    }
  };
  auto normalize = [&](std::vector<double>& x) {
    double s = 0.0;
    for (double e : x) s += e * e;
    s = std::sqrt(s);
    if (s > 0) for (auto& e : x) e /= s;
    return s;
  };
  orth(v);
  if (normalize(v) == 0.0) {
    rep.lambda = 0.0;
    rep.lambda_mixing = bip ? double(d) : 0.0;
    return rep;
  }
  std::vector<double> av(n);
  double rho = 0.0, res = 0.0;
  bool ok = false;
  for (std::uint32_t it = 0; it < max_iter; ++it) {
    for (std::uint32_t i = 0; i < n; ++i) {
      double s = 0.0;
      auto row = g.row(i);
      for (std::uint32_t j = 0; j < n; ++j) s += row[j] * v[j];
      av[i] = s;
    }
    rho = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) rho += v[i] * av[i];
    res = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      double diff = av[i] - rho * v[i];
      res += diff * diff;
    }
    res = std::sqrt(res);
    if (res <= tol) {
      ok = true;
      break;
    }
    v.swap(av);
    orth(v);
    if (normalize(v) == 0.0) break;
  }
  rep.lambda = std::abs(rho);
  rep.lambda_mixing = bip ? double(d) : rep.lambda;
  rep.residual = res;
  rep.converged = ok;
  return rep;
}

enum class PairMode { Exhaustive, Sampled };

struct MixingAudit {
  double max_violation = 0.0;  // max over pairs of |E(S,T)-(d/n)|S||T|| - lambda*sqrt(|S||T|)
  std::uint64_t pairs_checked = 0;
  std::uint64_t worst_s = 0, worst_t = 0;  // bitmasks of the extremal pair
};

/// Audit |E(S,T) - (d/n)|S||T|| <= lambda sqrt(|S||T|) over subset pairs,
/// counting edges inside S cap T twice (E(S,T) = 1_S^T A 1_T). Exhaustive
/// mode enumerates all 4^n ordered pairs and is guarded at n <= 14.
inline MixingAudit mixing_audit(const RegularGraph& g, double lambda,
                                PairMode mode = PairMode::Exhaustive,
                                std::uint64_t sample_count = 0,
                                std::uint64_t seed = 1) {
  const std::uint32_t n = g.n();
  if (!g.is_regular()) throw Error("mixing_audit: graph is not regular");
  const double d = g.row_sum(0);
  MixingAudit audit;
  audit.max_violation = -std::numeric_limits<double>::infinity();

  auto eval_pair = [&](std::uint64_t smask, std::uint64_t tmask) {
    std::uint32_t scount = static_cast<std::uint32_t>(std::popcount(smask));
    std::uint32_t tcount = static_cast<std::uint32_t>(std::popcount(tmask));
    double est = 0.0;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (!(smask >> u & 1)) continue;
      auto row = g.row(u);
      for (std::uint32_t v = 0; v < n; ++v)
        if (tmask >> v & 1) est += row[v];
    }
    double dev = std::abs(est - d / n * scount * tcount);
    double bound = lambda * std::sqrt(double(scount) * tcount);
    double viol = dev - bound;
    if (viol > audit.max_violation) {
      audit.max_violation = viol;
      audit.worst_s = smask;
      audit.worst_t = tmask;
    }
    ++audit.pairs_checked;
  };

  if (mode == PairMode::Exhaustive) {
    if (n > 14) throw Error("mixing_audit: exhaustive mode guard n <= 14");
    const std::uint64_t lim = 1ull << n;
    // row-aggregated inner loop: for each S precompute column sums over S
    std::vector<double> colsum(n);
    for (std::uint64_t smask = 0; smask < lim; ++smask) {
      std::fill(colsum.begin(), colsum.end(), 0.0);
      std::uint32_t scount = 0;
      for (std::uint32_t u = 0; u < n; ++u) {
        if (!(smask >> u & 1)) continue;
        ++scount;
        auto row = g.row(u);
        for (std::uint32_t v = 0; v < n; ++v) colsum[v] += row[v];
      }
      for (std::uint64_t tmask = 0; tmask < lim; ++tmask) {
        double est = 0.0;
        std::uint32_t tcount = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
          if (tmask >> v & 1) {
            est += colsum[v];
            ++tcount;
          }
        }
        double dev = std::abs(est - d / n * scount * tcount);
        double bound = lambda * std::sqrt(double(scount) * tcount);
        double viol = dev - bound;
        if (viol > audit.max_violation) {
          audit.max_violation = viol;
          audit.worst_s = smask;
          audit.worst_t = tmask;
        }
        ++audit.pairs_checked;
      }
    }
  } else {
    if (n > 64) throw Error("mixing_audit: sampled mode supports n <= 64");
    Rng rng = Rng(seed).split("mixing-audit");
    const std::uint64_t mask = n == 64 ? ~0ull : (1ull << n) - 1;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
      eval_pair(rng.next_u64() & mask, rng.next_u64() & mask);
    }
  }
  return audit;
}

}  // namespace unx
