#include "tetduffy/oracle.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "tetduffy/quad1d.hpp"

namespace tetduffy {
namespace oracle {

Complex brute_first_integral(const Kernel& kern, int p, double X, double tol) {
  if (X <= 0.0)
    throw NonpositiveX("brute_first_integral at X = " + std::to_string(X));
  if (p < kern.singularity_order())
    throw OrderTooLow("brute_first_integral needs p >= " +
                      std::to_string(kern.singularity_order()));
  if (tol < 1e-14) tol = 1e-14;
  return adaptive_integrate(
      [&](double w) {
        double t = std::max(w, 1e-300);
        return std::pow(t, p) * kern.eval(t * X);
      },
      0.0, 1.0, tol);
}

const GLRule& gauss_legendre(int order) {
  static std::map<int, GLRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1 || order > 64)
    throw Error("gauss_legendre: order " + std::to_string(order));

  GLRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (order + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev initial guess.
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    // map from [-1,1] to [0,1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    double wgt = 1.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = wgt;
    rule.weights[order - 1 - i] = wgt;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

// P over cartesian symbols flattened for pointwise evaluation.
struct CompiledP {
  struct Term {
    std::array<std::uint8_t, 6> e;  // x1 x2 x3 xp1 xp2 xp3
    Complex c;
  };
  std::vector<Term> terms;

  explicit CompiledP(const Polynomial& p) {
    const std::size_t base = static_cast<std::size_t>(Var::X1);
    for (const auto& [e, c] : p.terms()) {
      for (std::size_t i = 0; i < base; ++i)
        if (e[i] != 0)
          throw Error(std::string("brute_6d: P contains variable ") +
                      var_name(static_cast<Var>(i)));
      Term t;
      for (int i = 0; i < 6; ++i) t.e[i] = e[base + i];
      t.c = c;
      terms.push_back(t);
    }
  }

  Complex eval(const Vec3& x, const Vec3& xp) const {
    const double v[6] = {x.x, x.y, x.z, xp.x, xp.y, xp.z};
    Complex sum = 0.0;
    for (const auto& t : terms) {
      Complex term = t.c;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < t.e[i]; ++j) term *= v[i];
      sum += term;
    }
    return sum;
  }
};

}  // namespace

Complex brute_6d(const Tetrahedron& ta, const Tetrahedron& tb,
                 const Polynomial& P, const Kernel& kern, int order,
                 int n_threads) {
  if (order < 1 || order > 24)
    throw Error("brute_6d: order " + std::to_string(order) + " outside [1,24]");
  // Consecutive Gauss orders for the two tetrahedra: their nodes interlace,
  // so coincident parameterizations (self pairs) never sample r = 0.
  const GLRule& rule = gauss_legendre(order);
  const GLRule& rule_b = gauss_legendre(order < 24 ? order + 1 : 23);
  const CompiledP cp(P);

  const Vec3 a0 = ta.vertices[0];
  const Vec3 la1 = ta.vertices[1] - ta.vertices[0];
  const Vec3 la2 = ta.vertices[2] - ta.vertices[1];
  const Vec3 la3 = ta.vertices[3] - ta.vertices[2];
  const Vec3 b0 = tb.vertices[0];
  const Vec3 lb1 = tb.vertices[1] - tb.vertices[0];
  const Vec3 lb2 = tb.vertices[2] - tb.vertices[1];
  const Vec3 lb3 = tb.vertices[3] - tb.vertices[2];

  const int n = order;
  const int nb = static_cast<int>(rule_b.nodes.size());
  const long long outer = static_cast<long long>(n) * n;  // (t1, t2)
  const int n_chunks = static_cast<int>(std::min<long long>(outer, 64));
  std::vector<Complex> partial(n_chunks, Complex{0.0, 0.0});

  auto run_chunk = [&](int chunk) {
    long long begin = outer * chunk / n_chunks;
    long long end = outer * (chunk + 1) / n_chunks;
    Complex sum = 0.0;
    for (long long o = begin; o < end; ++o) {
      const int i1 = static_cast<int>(o / n);
      const int i2 = static_cast<int>(o % n);
      const double t1 = rule.nodes[i1], t2 = rule.nodes[i2];
      const double w12 = rule.weights[i1] * rule.weights[i2];
      for (int i3 = 0; i3 < n; ++i3) {
        const double t3 = rule.nodes[i3];
        // collapsed simplex coordinates: xi = (t1, t1 t2, t1 t2 t3)
        const double xi1 = t1, xi2 = t1 * t2, xi3 = t1 * t2 * t3;
        const Vec3 x = a0 + xi1 * la1 + xi2 * la2 + xi3 * la3;
        const double wx = w12 * rule.weights[i3] * t1 * t1 * t2;
        for (int j1 = 0; j1 < nb; ++j1)
          for (int j2 = 0; j2 < nb; ++j2) {
            const double s1 = rule_b.nodes[j1], s2 = rule_b.nodes[j2];
            const double w45 = rule_b.weights[j1] * rule_b.weights[j2];
            for (int j3 = 0; j3 < nb; ++j3) {
              const double s3 = rule_b.nodes[j3];
              const double e1 = s1, e2 = s1 * s2, e3 = s1 * s2 * s3;
              const Vec3 xp = b0 + e1 * lb1 + e2 * lb2 + e3 * lb3;
              const double r = norm(x - xp);
              if (r <= 0.0) continue;  // measure-zero contact node
              const double wtot = wx * w45 * rule_b.weights[j3] * s1 * s1 * s2;
              sum += wtot * cp.eval(x, xp) * kern.eval(r);
            }
          }
      }
    }
    partial[chunk] = sum;
  };

  unsigned hw = std::thread::hardware_concurrency();
  int threads = n_threads > 0 ? n_threads : static_cast<int>(hw ? hw : 1);
  threads = std::min(threads, n_chunks);
  if (threads <= 1) {
    for (int c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
            run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  Complex total = 0.0;
  for (int c = 0; c < n_chunks; ++c) total += partial[c];
  return 36.0 * volume(ta) * volume(tb) * total;
}

Complex brute_6d(const TetPair& pair, const Polynomial& P, const Kernel& kern,
                 int order, int n_threads) {
  return brute_6d(pair.tet_a, pair.tet_b, P, kern, order, n_threads);
}

Complex exact_tet_moment(const Tetrahedron& t, const Polynomial& f) {
  if (f.degree() > 6)
    throw Error("exact_tet_moment: degree " + std::to_string(f.degree()) +
                " exceeds 6");
  // x = V1 + lam1 (V2-V1) + lam2 (V3-V1) + lam3 (V4-V1) over the standard
  // simplex; the Xi slots stand in for the lambda variables.
  const Vec3 b1 = t.vertices[1] - t.vertices[0];
  const Vec3 b2 = t.vertices[2] - t.vertices[0];
  const Vec3 b3 = t.vertices[3] - t.vertices[0];
  std::map<Var, Polynomial> subst;
  const Var lam[3] = {Var::Xi1, Var::Xi2, Var::Xi3};
  const Var xs[3] = {Var::X1, Var::X2, Var::X3};
  for (int i = 0; i < 3; ++i) {
    Polynomial comp = Polynomial::constant(t.vertices[0][i]);
    comp = comp + Polynomial::variable(lam[0]) * Complex(b1[i]);
    comp = comp + Polynomial::variable(lam[1]) * Complex(b2[i]);
    comp = comp + Polynomial::variable(lam[2]) * Complex(b3[i]);
    subst[xs[i]] = std::move(comp);
  }
  Polynomial in_lam = f.substitute(subst);

  double factorial[16];
  factorial[0] = 1.0;
  for (int i = 1; i < 16; ++i) factorial[i] = factorial[i - 1] * i;

  Complex sum = 0.0;
  for (const auto& [e, c] : in_lam.terms()) {
    const int a = e[static_cast<std::size_t>(Var::Xi1)];
    const int b = e[static_cast<std::size_t>(Var::Xi2)];
    const int g = e[static_cast<std::size_t>(Var::Xi3)];
    sum += c * (factorial[a] * factorial[b] * factorial[g] /
                factorial[a + b + g + 3]);
  }
  return 6.0 * volume(t) * sum;
}

}  // namespace oracle
}  // namespace tetduffy
