#include "modfactor/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "modfactor/error.hpp"
#include "modfactor/random.hpp"
#include "modfactor/report.hpp"
#include "modfactor/serialize.hpp"
#include "modfactor/stinespring.hpp"

namespace modfactor {

namespace {

struct Options {
  double tol = NumericConfig{}.verify_tol;
  bool json = true;
  std::string out_path;
  std::string input;

  // generate
  std::string kind;
  std::string spec = "2:2";
  std::uint64_t seed = 0;
  bool seed_given = false;
  int rank = 2;
  int gens = 2;
  int pad = 1;
  bool operator_codomain = false;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidInput:
    case ErrorKind::WrongShape:
      return kExitUsage;
    default:
      return kExitCheckFailed;
  }
}

std::vector<int> parse_blocks(const std::string& text) {
  std::vector<int> dims;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      dims.push_back(n);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad block list '" + text + "'");
    }
  }
  return dims;
}

/// "B:C" with comma-separated block sizes, e.g. "2,1:2".
std::pair<AlgebraSpec, AlgebraSpec> parse_spec_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::InvalidInput, "--spec expects DOMAIN:CODOMAIN, e.g. 2,1:2");
  return {AlgebraSpec(parse_blocks(text.substr(0, colon))),
          AlgebraSpec(parse_blocks(text.substr(colon + 1)))};
}

void emit(const Report& r, const Options& o, std::ostream& out) {
  if (o.json) {
    out << r.to_json().dump(2) << "\n";
  } else {
    out << r.to_text();
  }
}

template <typename T>
const T& expect_payload(const InstanceFile& f, const char* what) {
  const T* p = std::get_if<T>(&f.payload);
  if (!p) {
    fail(ErrorKind::InvalidInput, std::string("expected a ") + what + " file, got " +
                                      std::string(kind_name(f)));
  }
  return *p;
}

void cmd_check_cp(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const LinearMap& phi = expect_payload<CpMapProblem>(file, "cp_map_problem").map;
  const ChoiSpectrum spec = choi_spectrum(phi, cfg);
  r.verdict = is_cp(phi, cfg);
  r.values.emplace_back("lambda_min", spec.lambda_min);
  r.values.emplace_back("lambda_max", spec.lambda_max);
  r.defects.emplace_back("choi_negativity", std::max(0.0, -spec.lambda_min));
  r.dims.emplace_back("choi_blocks", phi.domain().num_blocks());
  if (r.verdict) {
    const KrausDecomposition k = kraus_reconstruction(phi, cfg);
    r.defects.emplace_back("kraus_reconstruction", k.reconstruction_defect);
    r.defects.emplace_back("kraus_subalgebra", k.subalgebra_defect);
    long long ops = 0;
    for (const auto& block : k.operators) ops += static_cast<long long>(block.size());
    r.dims.emplace_back("kraus_operators", ops);
  }
}

void cmd_gns(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const LinearMap& phi = expect_payload<CpMapProblem>(file, "cp_map_problem").map;
  const GnsData g = gns(phi, cfg);
  const LeftActionReport la = check_left_action(g.corr, cfg);
  const MinimalityReport mr = gns_minimality(g, cfg);
  r.defects.emplace_back("gns", gns_defect(g, phi));
  r.defects.emplace_back("left_unital", la.unital_defect);
  r.defects.emplace_back("left_mult", la.mult_defect);
  r.defects.emplace_back("left_adjoint", la.adjoint_defect);
  r.checks.emplace_back("minimal", mr.pass);
  r.dims.emplace_back("generators", g.corr.generators());
  r.dims.emplace_back("F_corr", mr.module_rank);
  if (!o.out_path.empty()) {
    Json j{{"correspondence", to_json(g.corr)}, {"zeta", to_json(g.zeta)}};
    write_text_file(o.out_path, format_json(j));
  }
}

void cmd_check_phimap(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const auto& pm = expect_payload<PhiMapProblem>(file, "phi_map_problem");
  if (!pm.phi) fail(ErrorKind::InvalidInput, "phi_map_problem has no 'phi' field");
  const PhiMapReport rep = is_phi_map(pm.t, *pm.phi, cfg);
  r.defects.emplace_back("phi_map", rep.max_defect);
  r.defects.emplace_back("well_definedness", well_definedness_defect(pm.t, cfg));
  r.dims.emplace_back("E", module_dim(pm.t.domain(), cfg));
  r.dims.emplace_back("F", module_dim(pm.t.codomain(), cfg));
}

void cmd_infer_phi(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const auto& pm = expect_payload<PhiMapProblem>(file, "phi_map_problem");
  const LinearMap phi = infer_phi(pm.t, cfg);
  r.defects.emplace_back("phi_map", is_phi_map(pm.t, phi, cfg).max_defect);
  r.checks.emplace_back("cp", is_cp(phi, cfg));
  r.dims.emplace_back("domain", phi.domain().dim());
  r.dims.emplace_back("codomain", phi.codomain().dim());
  if (pm.phi) r.values.emplace_back("difference_to_given_phi", max_difference(phi, *pm.phi));
  if (!o.out_path.empty()) write_text_file(o.out_path, serialize(InstanceFile{.payload = CpMapProblem{phi}}));
}

void cmd_factorize(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const auto& pm = expect_payload<PhiMapProblem>(file, "phi_map_problem");
  const LinearMap phi = pm.phi ? *pm.phi : infer_phi(pm.t, cfg);
  const Factorization f = factorize(pm.t, phi, cfg);
  r.defects.emplace_back("isometry", f.defects.isometry);
  r.defects.emplace_back("reconstruction", f.defects.reconstruction);
  r.defects.emplace_back("well_definedness", f.defects.well_definedness);
  const int tensor_dim = module_dim(f.tensor, cfg);
  const int f_dim = module_dim(pm.t.codomain(), cfg);
  r.dims.emplace_back("F_corr", module_dim(f.gns.corr.module(), cfg));
  r.dims.emplace_back("tensor", tensor_dim);
  r.dims.emplace_back("F", f_dim);
  r.checks.emplace_back("tensor_fits_in_F", tensor_dim <= f_dim);
  r.verdict = f.pass;
  if (!o.out_path.empty()) {
    InstanceFile bundle{.payload = FactorizationBundle{pm.t.domain(), f.gns.corr, f.gns.zeta, f.v}};
    write_text_file(o.out_path, serialize(bundle));
  }
}

void cmd_stinespring(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const auto& pm = expect_payload<PhiMapProblem>(file, "phi_map_problem");
  const LinearMap phi = pm.phi ? *pm.phi : infer_phi(pm.t, cfg);
  const StinespringData s = stinespring(pm.t, phi, cfg);
  const CyclicityReport c = cyclicity_check(s, cfg);
  const auto& d = s.defects;
  r.defects.emplace_back("reconstruction", d.reconstruction);
  r.defects.emplace_back("coisometry", d.coisometry);
  r.defects.emplace_back("v_gram", d.v_gram);
  r.defects.emplace_back("rho_unital", d.rho_unital);
  r.defects.emplace_back("rho_mult", d.rho_mult);
  r.defects.emplace_back("rho_adjoint", d.rho_adjoint);
  r.defects.emplace_back("psi_inner", d.psi_inner);
  r.checks.emplace_back("stinespring_cyclic", c.stinespring_cyclic);
  r.checks.emplace_back("nondegenerate", c.nondegenerate);
  r.dims.emplace_back("H1", s.h1_dim);
  r.dims.emplace_back("H2", s.h2_dim);
  r.dims.emplace_back("K1", s.k1_dim());
  r.dims.emplace_back("K2", s.k2_dim());
}

void cmd_verify(const Options& o, const NumericConfig& cfg, Report& r) {
  const auto file = read_instance_file(o.input);
  const auto& fb = expect_payload<FactorizationBundle>(file, "factorization_bundle");
  const PhiMapPair pair = from_factorization(fb.corr, fb.zeta, fb.v, fb.e, cfg);
  const ModuleMap v_on_tensor(interior_tensor(fb.e, fb.corr, cfg), fb.v.codomain(), fb.v.matrix());
  r.defects.emplace_back("isometry", isometry_defect(v_on_tensor).max());
  r.defects.emplace_back("phi_map", is_phi_map(pair.t, pair.phi, cfg).max_defect);
  r.checks.emplace_back("cp", is_cp(pair.phi, cfg));
  r.dims.emplace_back("tensor", module_dim(v_on_tensor.domain(), cfg));
  r.dims.emplace_back("F", module_dim(fb.v.codomain(), cfg));
}

int cmd_generate(const Options& o, std::ostream& out) {
  const auto [b, c] = parse_spec_pair(o.spec);
  if (o.rank < 1 || o.gens < 1 || o.pad < 0) {
    fail(ErrorKind::InvalidInput, "--rank and --gens must be >= 1, --pad >= 0");
  }
  InstanceFile file;
  if (o.kind == "cp") {
    file.payload = CpMapProblem{random_cp(b, c, o.rank, o.seed)};
  } else if (o.kind == "phimap") {
    const PresentedModule e = random_module(b, o.gens, derive_seed(o.seed, 10));
    PhiMapInstance inst = [&] {
      if (o.operator_codomain) {
        if (c.num_blocks() != 1) fail(ErrorKind::InvalidInput, "--operator needs a single-block codomain");
        return random_operator_phi_map(e, c.block_dim(0), o.rank, o.pad, derive_seed(o.seed, 11));
      }
      return random_phi_map(e, c, o.rank, o.pad, derive_seed(o.seed, 11));
    }();
    file.payload = PhiMapProblem{std::move(inst.t), std::move(inst.phi)};
  } else {
    FactorizationTriple t = random_factorization_triple(b, c, o.gens, o.rank, o.pad, o.seed);
    file.payload = FactorizationBundle{std::move(t.e), std::move(t.corr), std::move(t.zeta), std::move(t.v)};
  }
  const std::string text = serialize(file);
  if (o.out_path.empty()) {
    out << text;
  } else {
    write_text_file(o.out_path, text);
  }
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Factorization of phi-maps between Hilbert modules over finite-dimensional C*-algebras",
               "modfactor"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "verification tolerance (overrides verify_tol)");
  auto* json_flag = app.add_flag("--json", "JSON report (default)");
  auto* text_flag = app.add_flag("--text", "plain-text report");
  json_flag->excludes(text_flag);
  app.add_option("--out", o.out_path, "write the command's artifact to this path");

  using Handler = std::function<void(const Options&, const NumericConfig&, Report&)>;
  std::vector<std::pair<CLI::App*, Handler>> file_commands;
  auto add_file_command = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("file", o.input, "input instance file")->required();
    file_commands.emplace_back(sub, std::move(h));
  };
  add_file_command("check-cp", "check complete positivity via Choi matrices", cmd_check_cp);
  add_file_command("gns", "GNS correspondence of a CP map", cmd_gns);
  add_file_command("check-phimap", "check <T x, T x'> = phi(<x, x'>)", cmd_check_phimap);
  add_file_command("infer-phi", "recover phi from T", cmd_infer_phi);
  add_file_command("factorize", "factor T = v (id (.) zeta) and verify", cmd_factorize);
  add_file_command("stinespring", "build and verify the dilation data K1, K2, V, W, rho, Psi",
                   cmd_stinespring);
  add_file_command("verify", "check a factorization bundle (F, zeta, v) yields a phi-map", cmd_verify);

  CLI::App* gen = app.add_subcommand("generate", "write a seeded random instance");
  gen->add_option("kind", o.kind, "cp | phimap | bundle")
      ->required()
      ->check(CLI::IsMember({"cp", "phimap", "bundle"}));
  gen->add_option("--spec", o.spec, "DOMAIN:CODOMAIN block sizes, e.g. 2,1:2");
  auto* seed_opt = gen->add_option("--seed", o.seed, "seed (default: $MODFACTOR_SEED or 0)");
  gen->add_option("--rank", o.rank, "rank of the random CP map");
  gen->add_option("--gens", o.gens, "generators of the random module E");
  gen->add_option("--pad", o.pad, "extra codomain dimensions beyond the range of v");
  gen->add_flag("--operator", o.operator_codomain, "phimap into B(C^d1, C^d2) instead of a free module");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }
  o.json = !(text_flag->count() > 0);
  o.seed_given = seed_opt->count() > 0;
  if (!o.seed_given) {
    if (const char* env = std::getenv("MODFACTOR_SEED")) {
      try {
        o.seed = std::stoull(env);
      } catch (const std::exception&) {
        err << "MODFACTOR_SEED is not a valid seed\n";
        return kExitUsage;
      }
    }
  }

  NumericConfig cfg;
  cfg.verify_tol = o.tol;
  Report report;
  report.config = cfg;
  try {
    cfg.validate();
    if (gen->parsed()) return cmd_generate(o, out);
    for (const auto& [sub, handler] : file_commands) {
      if (!sub->parsed()) continue;
      report.command = sub->get_name();
      handler(o, cfg, report);
      emit(report, o, out);
      return report.pass() ? kExitPass : kExitCheckFailed;
    }
    err << "no command given\n";
    return kExitUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    if (code == kExitUsage) {
      err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
      return code;
    }
    report.verdict = false;
    report.error = std::string(to_string(e.kind())) + ": " + e.what();
    emit(report, o, out);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace modfactor
