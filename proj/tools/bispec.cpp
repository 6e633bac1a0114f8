#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bispec/bispec.hpp"

using namespace bispec;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return json::parse(in);
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  out << j.dump(2) << "\n";
}

std::vector<Rational> parse_list(const std::vector<std::string>& v) {
  std::vector<Rational> r;
  for (const auto& s : v) r.push_back(Field<Rational>::parse(s));
  return r;
}

struct Common {
  unsigned seed = 1;
  std::string mode = "exact";
  double tol = 1e-8;
  int trunc = 6;
  int retries = 20;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app->add_option("--tol", c.tol, "float tolerance")->check(CLI::PositiveNumber);
  app->add_option("--trunc", c.trunc, "series / window depth")->check(CLI::PositiveNumber);
  app->add_option("--retries", c.retries, "resampling budget")->check(CLI::NonNegativeNumber);
}

template <class T>
json stages_json(const TildeStages<T>& st) {
  return {{"D_V", to_json(st.D_V)},
          {"Dhat", to_json(st.Dhat)},
          {"Dcheck", to_json(st.Dcheck)},
          {"Dcheck_dagger", to_json(st.Dcheck_dagger)},
          {"step4", to_json(st.step4)},
          {"step5", to_json(st.step5)},
          {"D_tilde", to_json(st.Dtilde)},
          {"D_tilde_aug", to_json(st.Dtilde_aug)}};
}

template <class T>
json run_transform(const DiffOp<RatFunc<Rational>>& D, const QEData<Rational>& data, double tol, bool dump) {
  QEData<T> d;
  d.mu = data.mu;
  d.lambda = data.lambda;
  d.reduced = data.reduced;
  for (const auto& a : data.alphas) d.alphas.push_back(convert<T>(a));
  for (const auto& z : data.zs) d.zs.push_back(convert<T>(z));
  const auto P = to_pfrac_op(D, data.zs).map([](const PFrac<Rational>& f) { return pfrac_convert<T>(f); });
  const auto st = tilde_chain(P, d, Field<T>::exact ? 0.0 : tol);
  json out = {{"D_tilde_aug", to_json(st.Dtilde_aug)}, {"order", st.Dtilde_aug.order()}};
  if (dump) out["stages"] = stages_json(st);
  return out;
}

// Eigen-decomposition of one block, both tables and the transformed operators.
json spectrum(int k, int n, const std::vector<int>& l, const std::vector<int>& m, const std::vector<Rational>& al,
              const std::vector<Rational>& zs, const Common& c, bool& ok) {
  const auto b = weight_block(k, n, l, m);
  json out = {{"block", to_json(b)}, {"alphas", to_json_scalars(al)}, {"zs", to_json_scalars(zs)}};
  if (b.dim() == 0) {
    out["eigen"] = json::array();
    return out;
  }
  const auto tn = block_table(n_side_for(b, al, zs), b);
  const auto tk = block_table(k_side_for(b, al, zs), b);
  out["table_n"] = to_json(tn);
  out["table_k"] = to_json(tk);
  Main2Outcome o;
  if (b.dim() == 1 && c.mode == "exact") {
    o = main2_exact(b, al, zs);
  } else {
    std::mt19937 rng(c.seed);
    for (int attempt = 0;; ++attempt) {
      try {
        o = main2_float(b, al, zs, c.tol, static_cast<unsigned>(rng()));
        break;
      } catch (const Degenerate& e) {
        if (attempt >= c.retries) throw;
      }
    }
    out["max_relative_difference"] = o.max_rel;
  }
  out["eigen"] = o.detail;
  out["ok"] = o.ok;
  if (!o.ok) out["message"] = o.message;
  ok = o.ok;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bispectral duality toolkit"};
  app.require_subcommand(1);
  Common c;
  std::string out_path;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  int k = 0, n = 0, instances = 0;
  std::vector<std::string> al_s, zs_s;
  std::vector<int> l, m;
  verify->add_option("suite", suite, "psido | wronskian | theorem1 | duality | main2")
      ->required()
      ->check(CLI::IsMember({"psido", "wronskian", "theorem1", "duality", "main2"}));
  add_common(verify, c);
  verify->add_option("--k", k);
  verify->add_option("--n", n);
  verify->add_option("--instances", instances, "override the suite's instance count");
  verify->add_option("--alphas", al_s)->delimiter(',');
  verify->add_option("--zs", zs_s)->delimiter(',');
  verify->add_option("--l", l)->delimiter(',');
  verify->add_option("--m", m)->delimiter(',');
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* transform = app.add_subcommand("transform", "apply the D -> D~ chain");
  std::string in_path, data_path;
  bool dump = false;
  transform->add_option("--in", in_path, "operator JSON")->required();
  transform->add_option("--data", data_path, "data JSON")->required();
  transform->add_flag("--dump-stages", dump, "include every intermediate operator");
  add_common(transform, c);
  transform->add_option("--out", out_path);

  auto* spec = app.add_subcommand("spectrum", "joint spectrum of one weight block");
  spec->add_option("--k", k)->required();
  spec->add_option("--n", n)->required();
  spec->add_option("--l", l)->delimiter(',')->required();
  spec->add_option("--m", m)->delimiter(',')->required();
  spec->add_option("--alphas", al_s)->delimiter(',');
  spec->add_option("--zs", zs_s)->delimiter(',');
  spec->add_option("--json-out", out_path);
  add_common(spec, c);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (*verify) {
      SuiteConfig cfg;
      cfg.k = k;
      cfg.n = n;
      cfg.seed = c.seed;
      cfg.mode = c.mode == "float" ? Mode::floating : Mode::exact;
      cfg.tol = c.tol;
      cfg.trunc = c.trunc;
      cfg.retries = c.retries;
      cfg.instances = instances;
      cfg.alphas = parse_list(al_s);
      cfg.zs = parse_list(zs_s);
      cfg.l = l;
      cfg.m = m;
      Report r;
      if (suite == "psido") r = verify_psido(cfg);
      else if (suite == "wronskian") r = verify_wronskian(cfg);
      else if (suite == "theorem1") r = verify_theorem1(cfg);
      else if (suite == "duality") r = verify_duality(cfg);
      else r = verify_main2(cfg);
      emit(r.to_json(), out_path);
      code = r.ok() ? 0 : 1;
    } else if (*transform) {
      const auto D = diffop_from_json<Rational>(read_json(in_path));
      const auto data = qedata_from_json<Rational>(read_json(data_path));
      const json out = c.mode == "float" ? run_transform<double>(D, data, c.tol, dump)
                                         : run_transform<Rational>(D, data, c.tol, dump);
      emit(out, out_path);
    } else if (*spec) {
      std::mt19937 rng(c.seed);
      auto al = al_s.empty() ? distinct_rationals(rng, n, 7) : parse_list(al_s);
      auto zs = zs_s.empty() ? distinct_rationals(rng, k, 7) : parse_list(zs_s);
      bool ok = true;
      emit(spectrum(k, n, l, m, al, zs, c, ok), out_path);
      code = ok ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    code = 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 2;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "elapsed " << secs << " s\n";
  return code;
}
