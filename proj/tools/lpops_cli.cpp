// Copyright 2026 The lpops Authors
// SPDX-License-Identifier: Apache-2.0
//
// lpops_cli: classify | quantify | spectrum | verify | reproduce

#include <algorithm>
#include <array>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpops/harness.hpp"
#include "lpops/io.hpp"
#include "lpops/oracle.hpp"
#include "lpops/quantities.hpp"
#include "lpops/reproduce.hpp"

namespace {

using namespace lpops;

constexpr int kExitOk = 0;
constexpr int kExitFailedCheck = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 0x5eed;
  double tol = 1e-8;
  int starts = 32;
  std::string json_out;
  std::string csv_out;
};

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return true;
}

class Runner {
 public:
  Runner(Common c, std::vector<std::string> argv) : c_(std::move(c)), argv_(std::move(argv)) {
    tol_.tol_class = c_.tol;
    opt_.starts = c_.starts;
    opt_.seed = c_.seed;
  }

  // Human-readable lines go to stdout unless JSON is being streamed there.
  std::ostream& out() { return c_.json_out == "-" ? std::cerr : std::cout; }

  bool emit(Json results) {
    if (c_.json_out.empty()) return true;
    const Json rep = report_file(argv_, c_.seed, tol_, opt_, std::move(results), utc_timestamp());
    return write_text(c_.json_out, rep.dump(2) + "\n");
  }

  int classify_cmd(const std::string& path) {
    const OperatorFile f = load_operator(path);
    const ClassificationReport r = classify(f.op, tol_, opt_, c_.seed);
    out() << "operator " << (f.label.empty() ? path : f.label) << " (n=" << f.op.dim()
          << ", p=" << f.op.space.p() << ")\n";
    const auto row = [&](const char* name, double res, bool v) {
      out() << "  " << name << std::string(14 - std::string(name).size(), ' ')
            << (v ? "yes" : "no ") << "  residual " << res << "\n";
    };
    row("self-adjoint", r.residual_self_adjoint, r.self_adjoint);
    row("hermitian", r.residual_hermitian, r.hermitian);
    row("positive", r.residual_positive, r.positive);
    row("normal", r.residual_normal, r.normal);
    row("unitary", r.residual_unitary, r.unitary);
    if (r.strong_normal) {
      out() << "  strongly normal witness: " << (r.strong_normal->verdict ? "verified" : "rejected")
            << " (square residual " << r.strong_normal->square_residual << ")\n";
    }
    out() << "  tolerance " << r.tolerance << "\n";
    return emit({{"operator", to_json(f)}, {"classification", to_json(r)}}) ? kExitOk : kExitUsage;
  }

  int quantify_cmd(const std::string& path, const std::vector<std::string>& names, bool oracle,
                   int resolution, int samples) {
    const OperatorFile f = load_operator(path);
    std::vector<QuantityKind> kinds;
    for (const auto& n : names) {
      const auto k = parse_quantity_kind(n);
      if (!k) {
        std::cerr << "error: unknown quantity '" << n << "' (norm, mu, r, c)\n";
        return kExitUsage;
      }
      kinds.push_back(*k);
    }
    if (oracle && f.op.dim() > kOracleMaxDim) {
      std::cerr << "error: --oracle refused for dim " << f.op.dim() << " (grid oracle supports dim <= "
                << kOracleMaxDim << ")\n";
      return kExitUsage;
    }
    Json results = Json::array();
    out() << "operator " << (f.label.empty() ? path : f.label) << " (n=" << f.op.dim()
          << ", p=" << f.op.space.p() << ")\n";
    char buf[256];
    for (QuantityKind k : kinds) {
      const QuantityValue q = compute_quantity(f.op, k, opt_);
      Json j = to_json(q);
      std::snprintf(buf, sizeof buf, "  %-17s %.12g", std::string(to_string(k)).c_str(), q.value);
      out() << buf;
      if (q.reference) out() << "  (closed form " << *q.reference << ")";
      if (oracle) {
        const QuantityValue o = oracle_quantity(f.op, k, resolution);
        j["oracle"] = to_json(o);
        j["oracle_deviation"] = std::abs(o.value - q.value);
        std::snprintf(buf, sizeof buf, "  oracle %.12g  dev %.3g", o.value, std::abs(o.value - q.value));
        out() << buf;
      }
      out() << "\n";
      results.push_back(j);
    }
    Json res{{"operator", to_json(f)}, {"quantities", results}};
    if (samples > 0) {
      const NumericalRangeSample s = numerical_range_sample(f.op, samples, c_.seed);
      res["numerical_range"] = {{"count", s.count}, {"seed", s.seed}};
      if (!c_.csv_out.empty() && !write_text(c_.csv_out, numerical_range_csv(s))) return kExitUsage;
    }
    return emit(res) ? kExitOk : kExitUsage;
  }

  int spectrum_cmd(const std::string& path) {
    const OperatorFile f = load_operator(path);
    const SpectrumReport s = spectrum(f.op);
    for (const auto& e : s.pairs) {
      out() << "  lambda " << e.value.real() << (e.value.imag() < 0 ? " - " : " + ")
            << std::abs(e.value.imag()) << "i  residual " << e.residual << "\n";
    }
    out() << "  spectral radius " << s.spectral_radius << ", dist(0, sigma) " << s.dist_zero
          << (s.defective ? ", defective" : "") << "\n";
    return emit({{"operator", to_json(f)}, {"spectrum", to_json(s)}}) ? kExitOk : kExitUsage;
  }

  int verify_cmd(SuiteConfig cfg) {
    cfg.tolerances = tol_;
    cfg.harness.class_tol = c_.tol;
    cfg.optimizer = opt_;
    for (const auto& id : cfg.only) {
      const auto& known = known_check_ids();
      if (std::find(known.begin(), known.end(), id) == known.end()) {
        std::cerr << "error: unknown check id '" << id << "'\n";
        return kExitUsage;
      }
    }
    const SuiteReport r = run_suite(cfg, c_.seed);
    std::map<std::string, std::array<int, 3>> by_id;
    for (const auto& ch : r.checks) ++by_id[ch.id][static_cast<int>(ch.status)];
    char buf[256];
    for (const auto& [id, n] : by_id) {
      std::snprintf(buf, sizeof buf, "  %-30s pass %4d  fail %4d  skipped %4d\n", id.c_str(), n[0], n[1], n[2]);
      out() << buf;
    }
    for (const auto& ch : r.checks) {
      if (ch.status == CheckStatus::fail) {
        out() << "  FAIL " << ch.id << " " << ch.instance << " left=" << ch.left
              << " right=" << ch.right << " dev=" << ch.deviation() << " " << ch.note << "\n";
      } else if (ch.expected_failure) {
        out() << "  expected failure " << ch.id << " " << ch.instance << " left=" << ch.left
              << " right=" << ch.right << " gap=" << ch.abs_deviation << "\n";
      }
    }
    out() << "total " << r.total << ", passed " << r.passed << ", failed " << r.failed
          << ", skipped " << r.skipped << ", expected failures " << r.expected_failures << "\n";
    if (!emit({{"suite", to_json(r)}})) return kExitUsage;
    return r.ok() ? kExitOk : kExitFailedCheck;
  }

  int reproduce_cmd(const std::string& name) {
    const auto r = reproduce(name, opt_);
    if (!r) {
      std::cerr << "error: unknown example '" << name << "' (ex317, ex46, swapF)\n";
      return kExitUsage;
    }
    Json lines = Json::array();
    char buf[256];
    for (const auto& l : r->lines) {
      if (l.target) {
        std::snprintf(buf, sizeof buf, "  %-28s computed %.10f  target %.10f  dev %.3g  %s\n",
                      l.name.c_str(), l.computed, *l.target, l.deviation, l.pass ? "ok" : "FAIL");
      } else {
        std::snprintf(buf, sizeof buf, "  %-28s computed %.10f  threshold %.3g  %s\n", l.name.c_str(),
                      l.computed, l.tolerance, l.pass ? "ok" : "FAIL");
      }
      out() << buf;
      lines.push_back({{"name", l.name},
                       {"computed", l.computed},
                       {"target", l.target ? Json(*l.target) : Json(nullptr)},
                       {"deviation", l.deviation},
                       {"tolerance", l.tolerance},
                       {"pass", l.pass},
                       {"note", l.note}});
    }
    if (!emit({{"example", r->example}, {"lines", lines}, {"ok", r->ok()}})) return kExitUsage;
    return r->ok() ? kExitOk : kExitFailedCheck;
  }

 private:
  Common c_;
  std::vector<std::string> argv_;
  ToleranceConfig tol_;
  OptimizerConfig opt_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator quantities and class tests on finite-dimensional complex l^p"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lpops::kVersion);
  Common common;
  app.add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  app.add_option("--tol", common.tol, "class tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--starts", common.starts, "optimizer starts")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--json", common.json_out, "write JSON report ('-' for stdout)");
  app.add_option("--csv", common.csv_out, "write numerical range point cloud (quantify)");
  app.fallthrough();

  std::string path;
  auto* classify = app.add_subcommand("classify", "class residuals and verdicts");
  classify->add_option("file", path, "operator JSON file")->required();

  auto* quantify = app.add_subcommand("quantify", "norm, minimum modulus, numerical radius, Crawford number");
  std::vector<std::string> quantities{"norm", "mu", "r", "c"};
  bool oracle = false;
  int resolution = 96;
  int samples = 0;
  quantify->add_option("file", path, "operator JSON file")->required();
  quantify->add_option("--quantities", quantities, "subset of norm, mu, r, c")->delimiter(',');
  quantify->add_flag("--oracle", oracle, "cross-check with the grid oracle (dim <= 3)");
  quantify->add_option("--resolution", resolution, "oracle grid points per axis")->check(CLI::Range(2, 100000));
  quantify->add_option("--samples", samples, "numerical range sample points")->check(CLI::NonNegativeNumber);

  auto* spectrum = app.add_subcommand("spectrum", "eigenpairs");
  spectrum->add_option("file", path, "operator JSON file")->required();

  auto* verify = app.add_subcommand("verify", "run the check suite");
  lpops::SuiteConfig suite;
  std::vector<std::string> only;
  verify->add_option("--dims", suite.dims, "dimensions")->delimiter(',')->check(CLI::Range(2, 64));
  verify->add_option("--p", suite.ps, "exponents")->delimiter(',');
  verify->add_option("--count", suite.count, "instances per family, dimension and p")->check(CLI::PositiveNumber);
  verify->add_option("--max-power", suite.max_power, "highest power N")->check(CLI::Range(1, 16));
  verify->add_option("--only", only, "restrict to check ids")->delimiter(',');
  verify->add_flag("--counterexamples-only", suite.counterexamples_only, "run only counterexample checks");

  auto* reproduce = app.add_subcommand("reproduce", "reproduce a worked example");
  std::string example;
  reproduce->add_option("name", example, "ex317 | ex46 | swapF")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::vector<std::string> echo(argv, argv + argc);
  Runner run(common, echo);
  try {
    if (*classify) return run.classify_cmd(path);
    if (*quantify) return run.quantify_cmd(path, quantities, oracle, resolution, samples);
    if (*spectrum) return run.spectrum_cmd(path);
    if (*verify) {
      for (double p : suite.ps) lpops::SpaceSpec(1, p);  // validates p
      suite.only.insert(only.begin(), only.end());
      return run.verify_cmd(suite);
    }
    if (*reproduce) return run.reproduce_cmd(example);
  } catch (const lpops::OperatorFileError& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
