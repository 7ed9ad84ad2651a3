// tetduffy command-line front end: evaluate singular tetrahedron-product
// Galerkin integrals, run convergence sweeps, and self-check the tables.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tetduffy/cubature.hpp"
#include "tetduffy/formulations.hpp"
#include "tetduffy/oracle.hpp"
#include "tetduffy/tables.hpp"

using namespace tetduffy;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;
constexpr int kExitNotSingularPair = 3;
constexpr int kExitSingularityTooStrong = 4;

struct PairInput {
  std::string pair_id = "pair";
  Tetrahedron tet_a, tet_b;
  std::string formulation = "efie";
  Complex k{10.0, 0.0};
  Vec3 q_a{}, q_b{};
  int power_exponent = -1;
};

struct ParseFailure {
  std::string message;
};

std::string fmt15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

Vec3 read_vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3)
    throw ParseFailure{what + " must be an array of 3 numbers"};
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Tetrahedron read_tet(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 4)
    throw ParseFailure{what + " must be an array of 4 vertices"};
  Tetrahedron t;
  for (int i = 0; i < 4; ++i)
    t.vertices[i] = read_vec3(j[i], what + "[" + std::to_string(i) + "]");
  return t;
}

PairInput read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure{"cannot open input file '" + path + "'"};
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseFailure{std::string("invalid JSON: ") + e.what()};
  }
  PairInput pi;
  try {
    if (!j.contains("tet_a") || !j.contains("tet_b"))
      throw ParseFailure{"input needs tet_a and tet_b"};
    pi.tet_a = read_tet(j["tet_a"], "tet_a");
    pi.tet_b = read_tet(j["tet_b"], "tet_b");
    if (j.contains("pair_id")) pi.pair_id = j["pair_id"].get<std::string>();
    else {
      auto slash = path.find_last_of('/');
      std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
      auto dotpos = stem.find_last_of('.');
      pi.pair_id = dotpos == std::string::npos ? stem : stem.substr(0, dotpos);
    }
    if (j.contains("formulation")) pi.formulation = j["formulation"].get<std::string>();
    // formulations that need a wavenumber reject k = 0, so leaving it unset
    // fails loudly instead of computing with a surprise default
    double kre = j.value("k_re", 0.0), kim = j.value("k_im", 0.0);
    pi.k = {kre, kim};
    if (j.contains("q_a")) pi.q_a = read_vec3(j["q_a"], "q_a");
    if (j.contains("q_b")) pi.q_b = read_vec3(j["q_b"], "q_b");
    pi.power_exponent = j.value("power_exponent", -1);
  } catch (const json::exception& e) {
    throw ParseFailure{std::string("invalid input: ") + e.what()};
  }
  return pi;
}

Complex parse_complex(const std::string& s) {
  // accepts "10", "10,0.5", "10+0.5i", "10-0.5i"
  double re = 0, im = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) == 2) return {re, im};
  char sign = 0;
  if (std::sscanf(s.c_str(), "%lf%c%lfi", &re, &sign, &im) == 3)
    return {re, sign == '-' ? -im : im};
  if (std::sscanf(s.c_str(), "%lf", &re) == 1) return {re, 0.0};
  throw ParseFailure{"cannot parse complex number '" + s + "'"};
}

Vec3 parse_vec3(const std::string& s) {
  Vec3 v;
  if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3)
    throw ParseFailure{"cannot parse vector '" + s + "' (want x,y,z)"};
  return v;
}

std::vector<int> parse_n_list(const std::string& s) {
  // "5,10,15" or "5..51" or "5..51:2"
  std::vector<int> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    int lo = std::atoi(s.substr(0, dots).c_str());
    std::string rest = s.substr(dots + 2);
    int step = 1;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = std::atoi(rest.substr(colon + 1).c_str());
      rest = rest.substr(0, colon);
    }
    int hi = std::atoi(rest.c_str());
    if (lo < 2 || hi < lo || step < 1)
      throw ParseFailure{"bad n-list range '" + s + "'"};
    for (int n = lo; n <= hi; n += step) out.push_back(n);
    if (out.back() != hi) out.push_back(hi);
    return out;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    int n = std::atoi(tok.c_str());
    if (n < 2) throw ParseFailure{"bad n-list entry '" + tok + "'"};
    out.push_back(n);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ParseFailure{"empty n-list"};
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ParseFailure{"n-list must be ascending"};
  return out;
}

int env_threads() {
  const char* env = std::getenv("TETDUFFY_THREADS");
  if (env && *env) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library default: hardware concurrency
}

std::pair<Polynomial, Kernel> make_formulation(const PairInput& pi) {
  FormulationSpec spec;
  spec.k = pi.k;
  spec.q_a = pi.q_a;
  spec.q_b = pi.q_b;
  if (pi.formulation == "aim") return build_p_aim(pi.k);
  if (pi.formulation == "efie") return build_p_efie(spec);
  if (pi.formulation == "mfie") return build_p_mfie(spec);
  if (pi.formulation == "one")
    return {Polynomial::constant(1.0), Kernel::one()};
  if (pi.formulation == "power")
    return {Polynomial::constant(1.0), Kernel::power_law(pi.power_exponent)};
  throw ParseFailure{"unknown formulation '" + pi.formulation +
                     "' (aim|efie|mfie|one|power)"};
}

int count_shared_vertices(const Tetrahedron& ta, const Tetrahedron& tb) {
  double tol = 1e-12 * std::max(max_edge_length(ta), max_edge_length(tb));
  int n = 0;
  bool used[4] = {false, false, false, false};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!used[j] && max_norm(ta.vertices[i] - tb.vertices[j]) <= tol) {
        used[j] = true;
        ++n;
        break;
      }
  return n;
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error("cannot open output file '" + out_path + "'");
  out << text;
}

struct EvalResult {
  int n_cv = 0;
  Complex value{};
  double build_ms = 0.0;
  double eval_ms = 0.0;
};

EvalResult evaluate_pair(const PairInput& pi, int n, bool allow_nonsingular,
                         bool merge, int threads) {
  using clock = std::chrono::steady_clock;
  EvalResult res;
  res.n_cv = count_shared_vertices(pi.tet_a, pi.tet_b);
  auto [P, K] = make_formulation(pi);

  if (res.n_cv < 2) {
    if (!allow_nonsingular)
      throw NotEnoughCommonVertices(
          "pair shares " + std::to_string(res.n_cv) +
          " vertices; pass --allow-nonsingular to integrate directly");
    auto t0 = clock::now();
    res.value = oracle::brute_6d(pi.tet_a, pi.tet_b, P, K, std::min(n, 24),
                                 threads);
    res.eval_ms = std::chrono::duration<double, std::milli>(clock::now() - t0)
                      .count();
    return res;
  }

  auto t0 = clock::now();
  TetPair pair = canonicalize_pair(pi.tet_a, pi.tet_b);
  ReducedIntegrand ri = build_reduced(pair, P, K);
  if (merge) ri = merge_identical_subdomains(ri);
  auto t1 = clock::now();
  res.value = tensor_integrate(ri, n, threads);
  auto t2 = clock::now();
  res.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  res.eval_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return res;
}

// ---- selftest ----

struct CheckReport {
  int failures = 0;
  void note(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %-34s %s\n", ok ? "ok" : "FAIL", name, detail.c_str());
    if (!ok) ++failures;
  }
};

int cmd_selftest(const std::string& level, bool tamper) {
  if (level != "fast" && level != "full")
    throw ParseFailure{"--level must be fast or full"};
  const bool full = level == "full";
  if (tamper) tables_testing::tamper_one_coefficient();

  CheckReport rep;

  {  // quadrature sanity
    CCRule r = cc_rule(9);
    double s = 0, wsum = 0;
    for (int i = 0; i < 9; ++i) {
      s += r.weights[i] * std::exp(r.nodes[i]);
      wsum += r.weights[i];
    }
    double err = std::fabs(s - (std::exp(1.0) - 1.0));
    rep.note("clenshaw-curtis rule", err < 1e-10 && std::fabs(wsum - 1) < 1e-15,
             "e^x error " + fmt15(err));
  }

  {  // partition of the relative-coordinate domain
    long long samples = full ? 1000000 : 100000;
    PartitionReport p = verify_partition(samples, 20240917);
    bool ok = p.fraction_exactly_one >= 0.999 &&
              std::fabs(p.measure_estimate - 1.0 / 36.0) < 1e-3 / 36.0;
    rep.note("subdomain partition", ok,
             "exactly-one fraction " + fmt15(p.fraction_exactly_one) +
                 ", measure " + fmt15(p.measure_estimate));
  }

  {  // Duffy maps
    int probes = full ? 100 : 30;
    double worst = 0;
    int bad_rows = 0;
    for (int n_cv : {2, 3, 4})
      for (int d = 1; d <= kNumSubdomains; ++d) {
        DuffyReport dr = verify_duffy(n_cv, d, probes);
        worst = std::max(worst, dr.max_jacobian_rel_err);
        if (!dr.ok()) ++bad_rows;
      }
    rep.note("duffy transformations", bad_rows == 0 && worst <= 1e-6,
             "worst jacobian error " + fmt15(worst) + ", bad rows " +
                 std::to_string(bad_rows));
  }

  {  // first integrals against the quadrature oracle
    int tuples = full ? 50 : 12;
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> xd(0.05, 3.0), kd(0.1, 30.0);
    std::uniform_int_distribution<int> pd(0, 6), fam(0, 3);
    double worst = 0;
    bool ok = true;
    for (int t = 0; t < tuples; ++t) {
      Kernel kern = Kernel::one();
      switch (fam(rng)) {
        case 0: kern = Kernel::helmholtz({kd(rng), 0.0}); break;
        case 1: kern = Kernel::helmholtz({kd(rng), 0.2 * kd(rng)}); break;
        case 2: kern = Kernel::grad_helmholtz_mfie({kd(rng), 0.0}); break;
        case 3: kern = Kernel::power_law(pd(rng) - 3); break;
      }
      int p = kern.singularity_order() + pd(rng);
      double X = xd(rng);
      double tol = std::abs(kern.wavenumber()) * X > 50 ? 1e-10 : 1e-12;
      Complex closed = kern.first_integral(p, X);
      Complex brute = oracle::brute_first_integral(kern, p, X);
      double rel = std::abs(closed - brute) / std::max(std::abs(brute), 1e-300);
      worst = std::max(worst, rel);
      if (rel > tol) ok = false;
    }
    rep.note("kernel first integrals", ok, "worst error " + fmt15(worst));
  }

  {  // volume-product identity
    Tetrahedron ta{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
    Tetrahedron tb{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0},
                    Vec3{0.3, 0.4, -1.03}}};
    Tetrahedron tc{{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{-0.04, -1.09, -0.05},
                    Vec3{0.3, -0.4, -1.09}}};
    double worst = 0;
    for (const auto& other : {ta, tb, tc}) {
      TetPair pair = canonicalize_pair(ta, other);
      auto ri = build_reduced(pair, Polynomial::constant(1.0), Kernel::one());
      double vv = volume(pair.tet_a) * volume(pair.tet_b);
      Complex v = tensor_integrate(ri, 3, env_threads());
      worst = std::max(worst, std::abs(v - vv) / vv);
    }
    rep.note("volume-product identity", worst <= 1e-13,
             "worst deviation " + fmt15(worst));
  }

  if (full) {  // separable moments through the full pipeline
    std::mt19937_64 rng(6001);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto x = x_symbols();
    Tetrahedron ta{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
    Tetrahedron tc{{Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{-0.04, -1.09, -0.05},
                    Vec3{0.3, -0.4, -1.09}}};
    TetPair pair = canonicalize_pair(ta, tc);
    std::map<Var, Polynomial> prime;
    prime[Var::X1] = Polynomial::variable(Var::Xp1);
    prime[Var::X2] = Polynomial::variable(Var::Xp2);
    prime[Var::X3] = Polynomial::variable(Var::Xp3);
    double worst = 0;
    for (int t = 0; t < 6; ++t) {
      Polynomial f = Polynomial::constant(unif(rng)) +
                     x[0] * Complex(unif(rng)) +
                     x[1] * x[2] * Complex(unif(rng));
      Polynomial g = Polynomial::constant(unif(rng)) +
                     x[2] * Complex(unif(rng)) +
                     x[0] * x[0] * Complex(unif(rng));
      auto ri = build_reduced(pair, f * g.substitute(prime), Kernel::one());
      Complex got = tensor_integrate(ri, 15, env_threads());
      Complex want = oracle::exact_tet_moment(pair.tet_a, f) *
                     oracle::exact_tet_moment(pair.tet_b, g);
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    rep.note("separable-moment oracle", worst <= 1e-12,
             "worst deviation " + fmt15(worst));
  }

  std::printf("%s: %d failure(s)\n", rep.failures ? "SELFTEST FAILED" : "selftest passed",
              rep.failures);
  return rep.failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular tetrahedron-product Galerkin integrals via exact "
               "dimension reduction and nested Clenshaw-Curtis cubature"};
  app.require_subcommand(1);

  std::string input, out_path, n_list = "5..51:2", level = "fast";
  int n = 25;
  bool allow_nonsingular = false, merge = false, tamper = false;

  CLI::App* value = app.add_subcommand("value", "evaluate one pair integral");
  value->add_option("input", input, "JSON input file")->required();
  value->add_option("--n", n, "cubature points per dimension (default 25)");
  value->add_flag("--allow-nonsingular", allow_nonsingular,
                  "integrate pairs with fewer than 2 shared vertices directly");
  value->add_flag("--merge-identical-subdomains", merge,
                  "fold numerically identical subdomains (weight 2)");
  value->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* converge = app.add_subcommand("converge", "convergence sweep as CSV");
  converge->add_option("input", input, "JSON input file")->required();
  converge->add_option("--n-list", n_list,
                       "points per dimension: '5,9,15' or '5..51' or '5..51:2'");
  converge->add_flag("--allow-nonsingular", allow_nonsingular,
                     "integrate pairs with fewer than 2 shared vertices directly");
  converge->add_flag("--merge-identical-subdomains", merge,
                     "fold numerically identical subdomains (weight 2)");
  converge->add_option("--out", out_path, "write CSV here instead of stdout");

  CLI::App* selftest = app.add_subcommand("selftest", "table and kernel self-checks");
  selftest->add_option("--level", level, "fast|full (default fast)");
  selftest->add_flag("--tamper-table", tamper,
                     "testing hook: corrupt one table coefficient first");

  // flag overrides for the input file's formulation block
  std::string formulation_flag, k_flag, qa_flag, qb_flag;
  int power_flag = 0;
  bool power_set = false;
  for (CLI::App* sub : {value, converge}) {
    sub->add_option("--formulation", formulation_flag,
                    "aim|efie|mfie|one|power (overrides input)");
    sub->add_option("--k", k_flag, "wavenumber, e.g. '10' or '10+0.5i'");
    sub->add_option("--q-a", qa_flag, "source vertex 'x,y,z'");
    sub->add_option("--q-b", qb_flag, "sink vertex 'x,y,z'");
    sub->add_option("--power-exponent", power_flag, "power-law exponent")
        ->each([&](const std::string&) { power_set = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    // apply flag overrides by rewriting the parsed input lazily
    auto with_overrides = [&](PairInput pi) {
      if (!formulation_flag.empty()) pi.formulation = formulation_flag;
      if (!k_flag.empty()) pi.k = parse_complex(k_flag);
      if (!qa_flag.empty()) pi.q_a = parse_vec3(qa_flag);
      if (!qb_flag.empty()) pi.q_b = parse_vec3(qb_flag);
      if (power_set) pi.power_exponent = power_flag;
      return pi;
    };

    if (value->parsed()) {
      PairInput pi = with_overrides(read_input(input));
      EvalResult r = evaluate_pair(pi, n, allow_nonsingular, merge, env_threads());
      std::string j;
      j += "{\"pair_id\":\"" + pi.pair_id + "\"";
      j += ",\"n_cv\":" + std::to_string(r.n_cv);
      j += ",\"formulation\":\"" + pi.formulation + "\"";
      j += ",\"k_re\":" + fmt15(pi.k.real()) + ",\"k_im\":" + fmt15(pi.k.imag());
      j += ",\"q_a\":[" + fmt15(pi.q_a.x) + "," + fmt15(pi.q_a.y) + "," +
           fmt15(pi.q_a.z) + "]";
      j += ",\"q_b\":[" + fmt15(pi.q_b.x) + "," + fmt15(pi.q_b.y) + "," +
           fmt15(pi.q_b.z) + "]";
      j += ",\"n_points\":" + std::to_string(n);
      j += ",\"value_re\":" + fmt15(r.value.real());
      j += ",\"value_im\":" + fmt15(r.value.imag());
      j += ",\"build_ms\":" + fmt15(r.build_ms);
      j += ",\"eval_ms\":" + fmt15(r.eval_ms);
      j += "}\n";
      write_out(j, out_path);
      return 0;
    }
    if (converge->parsed()) {
      // re-parse with overrides applied inside cmd_converge's flow
      PairInput pi = with_overrides(read_input(input));
      std::vector<int> ns = parse_n_list(n_list);
      const int threads = env_threads();
      std::vector<SweepRow> rows;
      int n_cv = count_shared_vertices(pi.tet_a, pi.tet_b);
      if (n_cv < 2) {
        if (!allow_nonsingular)
          throw NotEnoughCommonVertices(
              "pair shares " + std::to_string(n_cv) +
              " vertices; pass --allow-nonsingular to integrate directly");
        auto [P, K] = make_formulation(pi);
        for (int nn : ns) {
          SweepRow row;
          row.n = nn;
          row.total_samples = 1;
          for (int d = 0; d < 6; ++d) row.total_samples *= nn;
          row.value = oracle::brute_6d(pi.tet_a, pi.tet_b, P, K,
                                       std::min(nn, 24), threads);
          rows.push_back(row);
        }
        Complex ref = rows.back().value;
        for (auto& row : rows)
          row.rel_delta_to_max_n =
              std::abs(ref) > 0 ? std::abs(row.value - ref) / std::abs(ref)
                                : std::abs(row.value);
      } else {
        auto [P, K] = make_formulation(pi);
        TetPair pair = canonicalize_pair(pi.tet_a, pi.tet_b);
        ReducedIntegrand ri = build_reduced(pair, P, K);
        if (merge) ri = merge_identical_subdomains(ri);
        rows = converge_sweep(ri, ns, threads);
      }
      std::string csv = "n,total_samples,value_re,value_im,rel_err_vs_max_n\n";
      for (const auto& row : rows)
        csv += std::to_string(row.n) + "," + std::to_string(row.total_samples) +
               "," + fmt15(row.value.real()) + "," + fmt15(row.value.imag()) +
               "," + fmt15(row.rel_delta_to_max_n) + "\n";
      write_out(csv, out_path);
      return 0;
    }
    if (selftest->parsed()) return cmd_selftest(level, tamper);
  } catch (const ParseFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return kExitParse;
  } catch (const NotEnoughCommonVertices& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNotSingularPair;
  } catch (const SingularityTooStrong& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSingularityTooStrong;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}
