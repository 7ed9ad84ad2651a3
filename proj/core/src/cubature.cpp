#include "tetduffy/cubature.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <string>
#include <thread>

namespace tetduffy {

CCRule cc_rule(int n) {
  if (n < 2 || n > kMaxCCPoints)
    throw Error("cc_rule: n = " + std::to_string(n) + " outside [2, " +
                std::to_string(kMaxCCPoints) + "]");
  const double pi = 3.14159265358979323846;
  const int m = n - 1;
  CCRule rule;
  rule.n_points = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int j = 0; j <= m; ++j) {
    // ascending nodes on [0,1]
    rule.nodes[j] = 0.5 * (1.0 - std::cos(j * pi / m));
    double cj = (j == 0 || j == m) ? 1.0 : 2.0;
    double sum = 1.0;
    for (int k = 1; k <= m / 2; ++k) {
      double bk = (2 * k == m) ? 1.0 : 2.0;
      sum -= bk * std::cos(2.0 * k * j * pi / m) / (4.0 * k * k - 1.0);
    }
    // factor 1/2 maps the weight from [-1,1] to [0,1]
    rule.weights[j] = 0.5 * cj * sum / m;
  }
  return rule;
}

namespace {

// Per-dimension node-power lookup: pw[dim][node * stride + exp].
struct PowerTable {
  int n = 0;
  int stride = 0;
  std::array<std::vector<double>, 4> pw;

  PowerTable(const CCRule& rule, int y_dim, int max_exp) {
    n = rule.n_points;
    stride = max_exp + 1;
    for (int dim = 0; dim < y_dim; ++dim) {
      pw[dim].resize(static_cast<std::size_t>(n) * stride);
      for (int i = 0; i < n; ++i) {
        double* row = &pw[dim][static_cast<std::size_t>(i) * stride];
        row[0] = 1.0;
        for (int e = 1; e <= max_exp; ++e) row[e] = row[e - 1] * rule.nodes[i];
      }
    }
  }
};

// Work shared by all chunks of one integration.
struct GridJob {
  const ReducedIntegrand* ri = nullptr;
  const CCRule* rule = nullptr;
  const PowerTable* powers = nullptr;
  int y_dim = 0;
  long long n_prefix = 0;  // n^(y_dim-1)
};

// Evaluates the integrand summed over the last dimension for one prefix
// point, reducing each subdomain polynomial to a 1-D Horner form first.
Complex sum_over_last_dim(const GridJob& job, const int* idx) {
  const ReducedIntegrand& ri = *job.ri;
  const CCRule& rule = *job.rule;
  const int last = job.y_dim - 1;
  const int n = rule.n_points;
  const int stride = job.powers->stride;

  const double* pref_pow[3];
  for (int d = 0; d < last; ++d)
    pref_pow[d] = &job.powers->pw[d][static_cast<std::size_t>(idx[d]) * stride];

  Complex acc = 0.0;
  // Coefficient buffers in the last variable.
  double xsq_c[kMaxTotalDegree + 1];
  // pn_c[n - n_lo][exp]
  static thread_local std::vector<std::array<Complex, kMaxTotalDegree + 1>> pn_c;
  static thread_local std::vector<Complex> inner;

  inner.assign(n, Complex{0.0, 0.0});
  Complex kvals[kMaxTotalDegree + 8];

  for (const auto& cs : ri.compiled()) {
    if (cs.n_hi < cs.n_lo) continue;
    const int deg = ri.max_y_exponent();

    for (int e = 0; e <= deg; ++e) xsq_c[e] = 0.0;
    for (const auto& t : cs.xsq) {
      double v = t.c;
      for (int d = 0; d < last; ++d) v *= pref_pow[d][t.e[d]];
      xsq_c[t.e[last]] += v;
    }

    const int n_terms = cs.n_hi - cs.n_lo + 1;
    if (static_cast<int>(pn_c.size()) < n_terms) pn_c.resize(n_terms);
    for (int k = 0; k < n_terms; ++k)
      for (int e = 0; e <= deg; ++e) pn_c[k][e] = 0.0;
    for (int k = 0; k < n_terms; ++k) {
      for (const auto& t : cs.pn[k]) {
        Complex v = t.c;
        for (int d = 0; d < last; ++d) v *= pref_pow[d][t.e[d]];
        pn_c[k][t.e[last]] += v;
      }
    }

    for (int i = 0; i < n; ++i) {
      const double yl = rule.nodes[i];
      double xsq = xsq_c[deg];
      for (int e = deg - 1; e >= 0; --e) xsq = xsq * yl + xsq_c[e];
      if (xsq <= 1e-14 * cs.xsq_scale) {
        if (xsq < -1e-14 * cs.xsq_scale)
          throw NegativeXSquared("X^2 = " + std::to_string(xsq) +
                                 " at a cubature node");
        continue;  // collapsed map point: the contribution's limit is 0
      }
      const double X = std::sqrt(xsq);
      ri.kernel().first_integrals(cs.n_lo + job.y_dim, cs.n_hi + job.y_dim, X,
                                  kvals);
      Complex sub = 0.0;
      for (int k = 0; k < n_terms; ++k) {
        Complex pv = pn_c[k][deg];
        for (int e = deg - 1; e >= 0; --e) pv = pv * yl + pn_c[k][e];
        sub += pv * kvals[k];
      }
      inner[i] += cs.weight * sub;
    }
  }

  for (int i = 0; i < n; ++i) acc += rule.weights[i] * inner[i];
  return acc;
}

}  // namespace

Complex tensor_integrate(const ReducedIntegrand& ri, int n, int n_threads) {
  const CCRule rule = cc_rule(n);
  const int y_dim = ri.y_dim();
  if (ri.is_identically_zero()) return 0.0;

  PowerTable powers(rule, y_dim, ri.max_y_exponent());
  GridJob job;
  job.ri = &ri;
  job.rule = &rule;
  job.powers = &powers;
  job.y_dim = y_dim;
  job.n_prefix = 1;
  for (int d = 0; d < y_dim - 1; ++d) job.n_prefix *= n;

  // Fixed chunking keeps the combination order independent of thread count.
  const int n_chunks = static_cast<int>(std::min<long long>(job.n_prefix, 64));
  std::vector<Complex> partial(n_chunks, Complex{0.0, 0.0});

  auto run_chunk = [&](int chunk) {
    long long begin = job.n_prefix * chunk / n_chunks;
    long long end = job.n_prefix * (chunk + 1) / n_chunks;
    Complex sum = 0.0;
    int idx[3] = {0, 0, 0};
    for (long long p = begin; p < end; ++p) {
      long long rem = p;
      for (int d = y_dim - 2; d >= 0; --d) {
        idx[d] = static_cast<int>(rem % n);
        rem /= n;
      }
      double wp = 1.0;
      for (int d = 0; d < y_dim - 1; ++d) wp *= rule.weights[idx[d]];
      sum += wp * sum_over_last_dim(job, idx);
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
    auto worker = [&] {
      try {
        for (int c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          run_chunk(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  Complex total = 0.0;
  for (int c = 0; c < n_chunks; ++c) total += partial[c];
  return ri.global_jacobian() * total;
}

std::vector<SweepRow> converge_sweep(const ReducedIntegrand& ri,
                                     const std::vector<int>& n_list,
                                     int n_threads) {
  if (n_list.empty()) throw Error("converge_sweep: empty n list");
  std::vector<SweepRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    SweepRow row;
    row.n = n;
    row.total_samples = 1;
    for (int d = 0; d < ri.y_dim(); ++d) row.total_samples *= n;
    row.value = tensor_integrate(ri, n, n_threads);
    rows.push_back(row);
  }
  const Complex ref = rows.back().value;
  const double ref_mag = std::abs(ref);
  for (auto& row : rows)
    row.rel_delta_to_max_n =
        ref_mag > 0 ? std::abs(row.value - ref) / ref_mag : std::abs(row.value);
  return rows;
}

}  // namespace tetduffy
