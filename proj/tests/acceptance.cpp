// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "bispec/bispec.hpp"

using namespace bispec;
using R = Rational;

namespace {

int failed = 0;

void line(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failed;
}

double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int count(const Report& r, std::initializer_list<const char*> checks) {
  int c = 0;
  for (const char* s : checks) c += r.failures_of(s);
  return c;
}

std::string fmt_s(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", s);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

// d - a - 1/(x - z)
PDiffOp<R> first_order(const R& a, const R& z) {
  PFrac<R> c0(R(-a));
  c0 += PFrac<R>::pole_term(z, 1, R(-1));
  return PDiffOp<R>(std::vector<PFrac<R>>{c0, PFrac<R>(R(1))});
}

void print_failures(const Report& r, std::initializer_list<const char*> checks, int limit = 3) {
  int shown = 0;
  for (const auto& f : r.failures) {
    bool want = false;
    for (const char* s : checks) want = want || f.at("check") == s;
    if (!want || shown++ >= limit) continue;
    std::printf("    %s\n", f.dump().c_str());
  }
}

}  // namespace

int main() {
  SuiteConfig base;
  base.seed = 1;

  // 1, 2: pseudodifferential algebra
  {
    Report r;
    const double t = seconds([&] { r = verify_psido(base); });
    const int alg = count(r, {"associativity", "dagger_involution", "ddagger_involution", "sharp_order4",
                              "dagger_antiautomorphism", "ddagger_antiautomorphism", "sharp_automorphism",
                              "psido_exception"});
    const int vac = r.notes.at("vacuous_comparisons").get<int>();
    line(1, alg == 0 && vac == 0 && t < 60.0, "psido algebra on 200 random triples",
         std::to_string(alg) + " failures, " + std::to_string(vac) + " vacuous comparisons, " + fmt_s(t));
    const int inv = count(r, {"inverse", "inverse_of_diffop", "dagger_diffop_vs_psido"});
    line(2, inv == 0, "inversion for 50 random elements and 20 converted operators",
         std::to_string(inv) + " failures");
  }

  // 3, 4: Wronskians and closed forms
  {
    const Report r = verify_wronskian(base);
    const int core = count(r, {"fundamental_annihilates", "factorization", "conjugate_kernel", "conjugate_wronskian",
                               "quotient", "quotient_conjugate_kernel", "wronskian_identity", "wronskian_exception"});
    line(3, core == 0, "factorization and conjugate kernels on 30 random spaces",
         std::to_string(core) + " failures, " + std::to_string(r.skipped) + " degenerate flags skipped");
    const int cw = r.failures_of("closed_form_wronskian"), cm = r.failures_of("closed_form_minor"),
              cs = r.failures_of("complementary_set");
    line(4, cw + cm + cs == 0, "closed-form Wronskians, minors and complementary sets",
         std::to_string(cw) + " Wronskian, " + std::to_string(cm) + " minor, " + std::to_string(cs) +
             " complement failures");
    print_failures(r, {"closed_form_minor"});
  }

  int t1_residue_failures = 0, t1_instances = 0;
  // 5, 7: the transform on generated data
  {
    const Report r = verify_theorem1(base);
    const int main = count(r, {"monic_order_L", "kernel_data", "tilde_window", "theorem1_exception", "theorem1_budget"});
    line(5, main == 0 && r.instances >= 20, "transform on generated exact instances",
         std::to_string(r.instances) + " instances, " + std::to_string(main) + " failures");
    print_failures(r, {"monic_order_L", "kernel_data", "tilde_window", "theorem1_exception", "theorem1_budget"});
    t1_residue_failures = r.failures_of("eigenvalue_residues");
    t1_instances = r.instances;
  }

  // 6: golden
  {
    bool ok = false;
    std::string detail;
    try {
      const auto data = qedata_from_json<R>(json::parse(R"({"mu":[[1]],"lambda":[[1]],"alphas":["2"],"zs":["3"]})"));
      const auto st = tilde_chain(first_order(R(2), R(3)), data);
      const bool exact = st.Dtilde_aug == first_order(R(3), R(-2));
      const auto w = tilde_window_check(st.D_V, data, st.Dtilde, 6);
      ok = exact && w.equal && w.compared > 0;
      detail = std::string(exact ? "exact match" : "mismatch") + ", " + std::to_string(w.compared) +
               " windowed coefficients " + (w.equal ? "agree" : "disagree");
    } catch (const Error& e) {
      detail = std::string(e.kind()) + ": " + e.what();
    }
    line(6, ok, "worked example d - 2 - 1/(x - 3) -> d - 3 - 1/(x + 2)", detail);
  }

  line(7, t1_residue_failures == 0 && t1_instances >= 20, "residue identity g~ = -h on the same instances",
       std::to_string(t1_residue_failures) + " failures");

  // 8, 9: Bethe tables on P_22
  {
    Report r;
    std::mt19937 rng(base.seed);
    const auto al = distinct_rationals(rng, 2, 7), zs = distinct_rationals(rng, 2, 7);
    int total = 0;
    for (const auto& [l, m] : all_blocks(2, 2)) total += weight_block(2, 2, l, m).dim();
    const double t = seconds([&] { bethe_block_checks(2, 2, al, zs, base.trunc, r); });
    const int comm = count(r, {"bethe_commutative", "weight_preservation", "bethe_exception"});
    line(8, comm == 0 && total == 16 && t < 300.0, "commutativity and weight preservation on P_22",
         std::to_string(r.instances) + " blocks, total dim " + std::to_string(total) + ", " + std::to_string(comm) +
             " failures, " + fmt_s(t));
    const int cross = r.failures_of("cross_commutative");
    line(9, cross == 0, "cross-commutativity of the two tables on P_22", std::to_string(cross) + " failures");
  }

  // 10: duality, residues, sign
  {
    const Report r = verify_duality(base);
    const int f = count(r, {"hamiltonian_duality", "residue_formulas", "sign_identity", "duality_exception",
                            "bethe_exception"});
    line(10, f == 0, "Hamiltonian duality, residue formulas and sign identity",
         std::to_string(r.instances) + " instances, " + std::to_string(f) + " failures");
    print_failures(r, {"hamiltonian_duality", "residue_formulas", "sign_identity", "duality_exception"});
  }

  // 11: end to end
  {
    SuiteConfig c = base;
    c.k = 2;
    c.n = 2;
    Report r;
    const double t = seconds([&] { r = verify_main2(c); });
    const int ex = r.failures_of("main2_exact"), fl = count(r, {"main2_float", "main2_budget"});
    const double worst = r.notes.at("max_relative_difference").get<double>();
    const int draws = 5;
    line(11, ex == 0 && fl == 0 && worst <= 1e-8 && t / draws < 120.0,
         "eigenvalue transform on P_22: exact on 1-dim blocks, float on l = m = (1, 1)",
         std::to_string(r.instances) + " instances, max relative difference " + sci(worst) + ", " +
             std::to_string(r.notes.at("resampled").get<int>()) + " resampled, " + fmt_s(t));
    print_failures(r, {"main2_exact", "main2_float", "main2_budget"});
  }

  // 12: dimensions
  {
    bool ok = true;
    for (int k = 1; k <= 3; ++k)
      for (int n = 1; n <= 3; ++n) {
        long s = 0;
        for (const auto& [l, m] : all_blocks(k, n)) s += weight_block(k, n, l, m).dim();
        ok = ok && s == (1L << (k * n));
      }
    line(12, ok, "block dimensions sum to 2^(kn) for k, n <= 3", ok ? "all 9 shapes" : "mismatch");
  }

  std::printf("%d of 12 criteria failed\n", failed);
  return failed ? 1 : 0;
}
