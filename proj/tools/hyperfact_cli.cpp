// hyperfact: classify hypercontractions, test factor-class membership,
// build and verify truncated dilations, and reproduce the 2x2 family.
//
// Exit codes: 0 every claim passed, 1 negative verdict, 2 input error,
// 3 internal numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hyperfact/dilate.hpp"
#include "hyperfact/factors.hpp"
#include "hyperfact/hyper.hpp"
#include "hyperfact/matrix_io.hpp"
#include "hyperfact/report.hpp"
#include "hyperfact/schur.hpp"
#include "hyperfact/weights.hpp"

namespace {

using namespace hyperfact;

constexpr int kExitPass = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

double env_default_tolerance(double fallback) {
  if (const char* raw = std::getenv("HYPERFACT_TOL")) {
    char* end = nullptr;
    const double value = std::strtod(raw, &end);
    if (end != raw && *end == '\0' && value > 0.0) return value;
  }
  return fallback;
}

void emit(const ReportDocument& report, bool as_json) {
  if (as_json) {
    std::cout << report.to_json_string();
  } else {
    report.print_text(std::cout);
  }
}

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

CMatrix load_matrix(const std::filesystem::path& path, ReportDocument& report,
                    const std::string& label) {
  const CMatrix m = read_matrix_file(path);
  report.inputs.emplace_back(label, file_digest(path));
  return m;
}

void add_certificate_claim(ReportDocument& report, const std::string& name,
                           const PsdCertificate& cert) {
  report.add(name, cert.is_psd, cert.min_eigenvalue,
             "min eigenvalue (tolerance " + fmt(cert.tolerance_used) + " x scale " +
                 fmt(cert.scale) + ")");
}

int cmd_classify(const std::string& path, int m_max, double tolerance, bool as_json) {
  ReportDocument report;
  report.command = "hyperfact classify " + path + " --m-max " + std::to_string(m_max);
  const CMatrix t = load_matrix(path, report, "matrix");
  const HyperReport rep = classify(t, m_max, tolerance);

  report.add("contraction", rep.is_contraction, rep.operator_norm, "operator norm");
  for (int n = 1; n <= m_max; ++n) {
    add_certificate_claim(report, "defect_order_" + std::to_string(n),
                          rep.certificates[static_cast<std::size_t>(n - 1)]);
  }
  const bool hyper = rep.hypercontraction_at(m_max);
  report.verdict = std::to_string(m_max) + "-hypercontraction: " +
                   (hyper ? "yes" : "no") + ", pure: " + (rep.is_pure ? "yes" : "no") +
                   " (spectral radius " + fmt(rep.spectral_radius) + ")";
  emit(report, as_json);
  return report.exit_status();
}

int cmd_check_fm(const std::string& t1_path, const std::string& t2_path, int m,
                 double tolerance, bool as_json) {
  ReportDocument report;
  report.command = "hyperfact check-fm " + t1_path + " " + t2_path + " --m " +
                   std::to_string(m);
  const CMatrix t1 = load_matrix(t1_path, report, "t1");
  const CMatrix t2 = load_matrix(t2_path, report, "t2");
  const FactorPair pair = make_factor_pair(t1, t2);
  const FmReport fm = check_fm(pair, m, tolerance);

  report.add("commuting", true, pair.commutator_norm, "commutator norm");
  for (int n = 1; n <= m; ++n) {
    for (int i = 1; i <= 2; ++i) {
      add_certificate_claim(
          report, "defect_order_" + std::to_string(n) + "_factor_" + std::to_string(i),
          fm.order_certificates[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i - 1)]);
    }
  }
  report.verdict = std::string("member of F_") + std::to_string(m) + ": " +
                   (fm.member ? "yes" : "no") + " (product " +
                   (fm.product_hyper.hypercontraction_at(m) ? "is" : "is not") + " a " +
                   std::to_string(m) + "-hypercontraction)";
  emit(report, as_json);
  return report.exit_status();
}

int cmd_dilate(const std::string& path, int m, Index degree, double tolerance,
               const std::string& out_dir, bool as_json) {
  ReportDocument report;
  const CMatrix t = load_matrix(path, report, "matrix");
  if (degree <= 0) degree = 4 * t.rows();
  report.command = "hyperfact dilate " + path + " --m " + std::to_string(m) +
                   " --degree " + std::to_string(degree);

  const DilationPack pack = douglas_dilation(t, m, degree, tolerance);
  for (const auto& [name, value] : pack.residuals) {
    report.add(name, value <= tolerance, value);
  }

  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_matrix_file(dir / "pi.json", pack.pi);
    if (pack.residual_dim() > 0) {
      write_matrix_file(dir / "q.json", pack.q);
      write_matrix_file(dir / "w.json", pack.w);
    }
  }
  report.verdict = "dilation at degree " + std::to_string(degree) +
                   ", residual space dimension " + std::to_string(pack.residual_dim()) +
                   ", isometry defect " + fmt(pack.residuals.at("isometry_defect"));
  emit(report, as_json);
  return report.exit_status();
}

int cmd_factorize(const std::string& t1_path, const std::string& t2_path, int m,
                  Index degree, double tolerance, bool as_json) {
  ReportDocument report;
  const CMatrix t1 = load_matrix(t1_path, report, "t1");
  const CMatrix t2 = load_matrix(t2_path, report, "t2");
  const FactorPair pair = make_factor_pair(t1, t2);
  if (degree <= 0) degree = 4 * t1.rows();
  report.command = "hyperfact factorize " + t1_path + " " + t2_path + " --m " +
                   std::to_string(m) + " --degree " + std::to_string(degree);

  try {
    const VerificationReport vr = verify_factorization(pair, m, degree, tolerance);
    report.add("membership", true, std::nullopt,
               vr.pure_path ? "pure product path" : "residual-summand path");
    for (const auto& [name, value] : vr.residuals) {
      report.add(name, value <= tolerance, value);
    }
    for (const auto& [name, value] : vr.diagnostics) {
      report.add(name, true, value, "informational");
    }
    report.verdict = std::string("factorization verified: ") +
                     (vr.all_passed() ? "yes" : "no");
  } catch (const NotPsdError& err) {
    add_certificate_claim(report, "membership", err.certificate());
    report.verdict = "factorization verified: no (pair is not in the class)";
  }
  emit(report, as_json);
  return report.exit_status();
}

int cmd_generate(std::uint64_t seed, int base_dim, int m, int degree,
                 const std::string& out_dir, bool as_json) {
  ReportDocument report;
  report.command = "hyperfact generate --seed " + std::to_string(seed) +
                   " --base-dim " + std::to_string(base_dim) + " --m " +
                   std::to_string(m) + " --degree " + std::to_string(degree);
  const FactorPair pair = generate_fm_pair(seed, base_dim, m, degree);
  report.add("membership_verified", true, std::nullopt,
             "checked before emitting the pair");
  report.add("commuting", pair.commutator_norm <= 1e-9, pair.commutator_norm,
             "commutator norm");

  const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);
  std::filesystem::create_directories(dir);
  write_matrix_file(dir / "t1.json", pair.t1);
  write_matrix_file(dir / "t2.json", pair.t2);
  report.inputs.emplace_back("t1", file_digest(dir / "t1.json"));
  report.inputs.emplace_back("t2", file_digest(dir / "t2.json"));
  report.verdict = "wrote " + (dir / "t1.json").string() + " and " +
                   (dir / "t2.json").string() + " (dimension " +
                   std::to_string(pair.t1.rows()) + ")";
  emit(report, as_json);
  return report.exit_status();
}

int cmd_counterexample(double r, double a, double b, double tolerance, bool as_json) {
  ReportDocument report;
  report.command = "hyperfact counterexample --r " + fmt(r) + " --a " + fmt(a) +
                   " --b " + fmt(b);
  const SzegoInstance inst = szego_counterexample(r, a, b);

  const HyperReport product = classify(inst.pair.product, 2, tolerance);
  report.add("product_2_hypercontraction", product.hypercontraction_at(2),
             product.certificates[1].min_eigenvalue, "order-2 defect min eigenvalue");
  const Index dim = inst.pair.t1.rows();
  report.add("factor_1_contraction",
             psd_check(CMatrix::Identity(dim, dim) -
                           inst.pair.t1 * inst.pair.t1.adjoint(),
                       tolerance)
                 .is_psd,
             spectral_norm(inst.pair.t1), "operator norm");
  report.add("factor_2_contraction",
             psd_check(CMatrix::Identity(dim, dim) -
                           inst.pair.t2 * inst.pair.t2.adjoint(),
                       tolerance)
                 .is_psd,
             spectral_norm(inst.pair.t2), "operator norm");
  report.add("commuting", true, inst.pair.commutator_norm, "commutator norm");

  const CMatrix hereditary_route = pair_defect(inst.pair, 2, 2);
  report.add("defect_formula_match", (hereditary_route - inst.defect2).norm() <= 1e-10,
             (hereditary_route - inst.defect2).norm(),
             "closed form vs hereditary calculus");

  const PsdCertificate formula_cert = psd_check(inst.defect2, tolerance);
  const FmReport fm = check_fm(inst.pair, 2, tolerance);
  report.add("membership_implies_formula", !fm.member || formula_cert.is_psd,
             formula_cert.min_eigenvalue, "defect matrix min eigenvalue");

  report.verdict = std::string("pair in F_2: ") + (fm.member ? "yes" : "no") +
                   " (defect min eigenvalue " + fmt(formula_cert.min_eigenvalue) + ")";
  emit(report, as_json);
  return report.exit_status();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional hypercontraction factorization toolkit"};
  app.require_subcommand(1);

  bool as_json = false;
  app.add_flag("--json", as_json, "emit machine-readable reports");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "classify a single operator");
  std::string classify_path;
  int classify_m = 2;
  double classify_tol = env_default_tolerance(tol::kPsd);
  classify_cmd->add_option("matrix", classify_path, "matrix file")->required();
  classify_cmd->add_option("--m-max", classify_m, "largest order to certify");
  classify_cmd->add_option("--tol", classify_tol, "positivity tolerance");

  // check-fm
  auto* fm_cmd = app.add_subcommand("check-fm", "test factor-class membership");
  std::string fm_t1, fm_t2;
  int fm_m = 2;
  double fm_tol = env_default_tolerance(tol::kPsd);
  fm_cmd->add_option("t1", fm_t1, "first factor file")->required();
  fm_cmd->add_option("t2", fm_t2, "second factor file")->required();
  fm_cmd->add_option("--m", fm_m, "class order");
  fm_cmd->add_option("--tol", fm_tol, "positivity tolerance");

  // dilate
  auto* dilate_cmd = app.add_subcommand("dilate", "build the truncated dilation");
  std::string dilate_path, dilate_out;
  int dilate_m = 1;
  Index dilate_degree = 0;
  double dilate_tol = env_default_tolerance(tol::kVerify);
  dilate_cmd->add_option("matrix", dilate_path, "matrix file")->required();
  dilate_cmd->add_option("--m", dilate_m, "hypercontraction order");
  dilate_cmd->add_option("--degree", dilate_degree,
                         "truncation degree (default 4 x dimension)");
  dilate_cmd->add_option("--tol", dilate_tol, "residual tolerance");
  dilate_cmd->add_option("--out", dilate_out, "directory for pi/q/w matrix files");

  // factorize
  auto* fact_cmd = app.add_subcommand("factorize", "verify the factorization chain");
  std::string fact_t1, fact_t2;
  int fact_m = 2;
  Index fact_degree = 0;
  double fact_tol = env_default_tolerance(tol::kVerify);
  fact_cmd->add_option("t1", fact_t1, "first factor file")->required();
  fact_cmd->add_option("t2", fact_t2, "second factor file")->required();
  fact_cmd->add_option("--m", fact_m, "class order");
  fact_cmd->add_option("--degree", fact_degree, "truncation degree");
  fact_cmd->add_option("--tol", fact_tol, "residual tolerance");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "emit a verified member pair");
  std::uint64_t gen_seed = 0;
  int gen_base = 2, gen_m = 2, gen_degree = 4;
  std::string gen_out;
  gen_cmd->add_option("--seed", gen_seed, "PRNG seed")->required();
  gen_cmd->add_option("--base-dim", gen_base, "coefficient space dimension");
  gen_cmd->add_option("--m", gen_m, "class order");
  gen_cmd->add_option("--degree", gen_degree, "model truncation degree");
  gen_cmd->add_option("--out", gen_out, "output directory");

  // counterexample
  auto* cx_cmd = app.add_subcommand("counterexample", "explore the 2x2 family");
  double cx_r = 1.0 / std::sqrt(2.0);
  double cx_a = 1.0 / std::sqrt(2.0);
  double cx_b = 0.5;
  double cx_tol = env_default_tolerance(tol::kPsd);
  cx_cmd->add_option("--r", cx_r, "nilpotent entry");
  cx_cmd->add_option("--a", cx_a, "diagonal of the second factor");
  cx_cmd->add_option("--b", cx_b, "off-diagonal of the second factor");
  cx_cmd->add_option("--tol", cx_tol, "positivity tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) {
      return cmd_classify(classify_path, classify_m, classify_tol, as_json);
    }
    if (*fm_cmd) return cmd_check_fm(fm_t1, fm_t2, fm_m, fm_tol, as_json);
    if (*dilate_cmd) {
      return cmd_dilate(dilate_path, dilate_m, dilate_degree, dilate_tol, dilate_out,
                        as_json);
    }
    if (*fact_cmd) {
      return cmd_factorize(fact_t1, fact_t2, fact_m, fact_degree, fact_tol, as_json);
    }
    if (*gen_cmd) {
      return cmd_generate(gen_seed, gen_base, gen_m, gen_degree, gen_out, as_json);
    }
    if (*cx_cmd) return cmd_counterexample(cx_r, cx_a, cx_b, cx_tol, as_json);
  } catch (const PreconditionError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInput;
  } catch (const OverflowError& err) {
    std::cerr << "input error: " << err.what() << "\n";
    return kExitInput;
  } catch (const Error& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return kExitNumerical;
  }
  return kExitPass;
}
