// Command-line front end: weight descriptors in, JSON/CSV/text reports out.
// Exit codes: 0 ok, 2 degree exceeded, 3 bad descriptor, 4 commutativity or
// Hankel condition failed, 5 multiple zeros, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "mvcf/cubature.hpp"
#include "mvcf/families.hpp"
#include "mvcf/jsonio.hpp"
#include "mvcf/momentrec.hpp"

using namespace mvcf;

namespace {

struct RunConfig {
  std::string weight;
  int d = 0;  // 0: descriptor default
  int degree = 2;
  int levels = 2;
  int level = 1;
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "json";
  std::string out;
  std::string flavor = "sign-orthonormal";
  std::string zlist;
  bool closed_form = false;
};

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out.empty()) {
    std::cout << content;
  } else {
    write_atomic(cfg.out, content);
  }
}

double d17(Real v) { return static_cast<double>(v); }

Json alpha_json(const MultiIndex& a) { return Json(a.e); }

// nodes as two flat arrays, node-major real parts then imaginary parts
void nodes_json(const std::vector<CVecX>& nodes, Json& doc) {
  Json re = Json::array(), im = Json::array();
  for (const auto& z : nodes) {
    for (int i = 0; i < z.size(); ++i) {
      re.push_back(d17(z(i).real()));
      im.push_back(d17(z(i).imag()));
    }
  }
  doc["nodes"] = Json::array({re, im});
}

ProviderPtr provider_for(const RunConfig& cfg, int needed_degree) {
  const WeightDescriptor desc = parse_weight_descriptor(cfg.weight);
  return make_provider(desc, cfg.d, needed_degree);
}

// --- moments ---

int cmd_moments(const RunConfig& cfg) {
  ProviderPtr p = provider_for(cfg, 2 * cfg.degree);
  if (cfg.format == "json") {
    emit(cfg, moments_to_json(*p, 2 * cfg.degree));
    return 0;
  }
  const GradedBasis basis(p->dim(), 2 * cfg.degree);
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "alpha;value\n";
    for (int i = 0; i < basis.size(); ++i) {
      const auto& a = basis.at(i);
      for (int j = 0; j < a.dim(); ++j) os << (j ? " " : "") << a[j];
      os << ";" << fmt17(d17(p->moment(a))) << "\n";
    }
  } else {
    os << "moments of " << cfg.weight << " (d=" << p->dim() << ", |alpha| <= " << 2 * cfg.degree
       << ")\n";
    for (int i = 0; i < basis.size(); ++i) {
      const auto& a = basis.at(i);
      os << "  mu[";
      for (int j = 0; j < a.dim(); ++j) os << (j ? "," : "") << a[j];
      os << "] = " << fmt17(d17(p->moment(a))) << "\n";
    }
  }
  emit(cfg, os.str());
  return 0;
}

// --- orthopoly ---

Json matrix_json(const MatX& M) {
  Json data = Json::array();
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c) data.push_back(d17(M(r, c)));
  Json out;
  out["rows"] = static_cast<int>(M.rows());
  out["cols"] = static_cast<int>(M.cols());
  out["data"] = std::move(data);
  return out;
}

int cmd_orthopoly(const RunConfig& cfg) {
  ProviderPtr p = provider_for(cfg, 2 * cfg.degree);
  const MonicBasis monic = build_monic(p, cfg.degree, cfg.tol.def);
  RecurrenceData rec;
  if (cfg.flavor == "monic") {
    rec = recurrence_monic(monic, cfg.tol.def);
  } else if (cfg.flavor == "sign-orthonormal") {
    rec = recurrence_from_L(sign_orthonormalize(monic, cfg.tol.def), *p, cfg.tol.def);
  } else {
    fail(Err::BadDescriptor, "flavor must be sign-orthonormal or monic");
  }
  Json doc;
  doc["weight"] = cfg.weight;
  doc["d"] = rec.d;
  doc["flavor"] = cfg.flavor;
  doc["levels"] = rec.levels;
  doc["p0"] = d17(rec.p0);
  Json signs = Json::array();
  for (const auto& s : rec.sign) {
    Json row = Json::array();
    for (int i = 0; i < s.size(); ++i) row.push_back(d17(s(i)));
    signs.push_back(std::move(row));
  }
  doc["signs"] = std::move(signs);
  for (const char* name : {"A", "B", "C"}) {
    Json arr = Json::array();
    const auto& family = name[0] == 'A' ? rec.A : (name[0] == 'B' ? rec.B : rec.C);
    for (int k = 0; k < static_cast<int>(family.size()); ++k) {
      for (int i = 0; i < static_cast<int>(family[static_cast<std::size_t>(k)].size()); ++i) {
        Json cell = matrix_json(family[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]);
        Json entry;
        entry["k"] = k;
        entry["i"] = i + 1;
        entry["rows"] = cell["rows"];
        entry["cols"] = cell["cols"];
        entry["data"] = cell["data"];
        arr.push_back(std::move(entry));
      }
    }
    doc[name] = std::move(arr);
  }
  emit(cfg, dump_json17(doc));
  return 0;
}

// --- zeros / cubature ---

struct PipelineAtDegree {
  ProviderPtr provider;
  SignOrthoBasis basis;
  RecurrenceData rec;
  ZeroSet zeros;
};

PipelineAtDegree run_zeros(const RunConfig& cfg) {
  PipelineAtDegree out;
  out.provider = provider_for(cfg, 2 * (cfg.degree + 1));
  out.basis =
      sign_orthonormalize(build_monic(out.provider, cfg.degree + 1, cfg.tol.def), cfg.tol.def);
  out.rec = recurrence_from_L(out.basis, *out.provider, cfg.tol.def);
  const TruncatedJacobi tj = build_truncated(out.rec, cfg.degree);
  out.zeros = common_zeros(tj, out.basis, cfg.tol, cfg.seed);
  simplicity_check(out.zeros, out.basis, cfg.tol);
  return out;
}

Json zeroset_json(const ZeroSet& zeros) {
  Json doc;
  doc["n"] = zeros.n;
  Json points = Json::array();
  for (const auto& pt : zeros.points) {
    Json entry;
    Json re = Json::array(), im = Json::array();
    for (int i = 0; i < pt.z.size(); ++i) {
      re.push_back(d17(pt.z(i).real()));
      im.push_back(d17(pt.z(i).imag()));
    }
    entry["re"] = std::move(re);
    entry["im"] = std::move(im);
    entry["simple"] = pt.simple;
    entry["residual"] = d17(pt.eig_residual);
    points.push_back(std::move(entry));
  }
  doc["points"] = std::move(points);
  return doc;
}

int cmd_zeros(const RunConfig& cfg) {
  const PipelineAtDegree pipe = run_zeros(cfg);
  if (cfg.format == "json") {
    emit(cfg, dump_json17(zeroset_json(pipe.zeros)));
    return 0;
  }
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "re;im;simple;residual\n";
    for (const auto& pt : pipe.zeros.points) {
      for (int i = 0; i < pt.z.size(); ++i) os << (i ? " " : "") << fmt17(d17(pt.z(i).real()));
      os << ";";
      for (int i = 0; i < pt.z.size(); ++i) os << (i ? " " : "") << fmt17(d17(pt.z(i).imag()));
      os << ";" << (pt.simple ? 1 : 0) << ";" << fmt17(d17(pt.eig_residual)) << "\n";
    }
  } else {
    os << "common zeros at degree " << pipe.zeros.n << " (" << pipe.zeros.points.size() << " of "
       << pipe.zeros.expected << ")\n";
    for (const auto& pt : pipe.zeros.points) {
      os << "  (";
      for (int i = 0; i < pt.z.size(); ++i) {
        os << (i ? ", " : "") << fmt17(d17(pt.z(i).real()));
        if (pt.z(i).imag() != 0.0L)
          os << (pt.z(i).imag() > 0 ? "+" : "") << fmt17(d17(pt.z(i).imag())) << "i";
      }
      os << ")" << (pt.simple ? "" : "  [not simple]") << "\n";
    }
  }
  emit(cfg, os.str());
  return 0;
}

Json rule_json(const CubatureRule& rule, const std::string& weight) {
  Json doc;
  doc["weight"] = weight;
  doc["exact_degree"] = rule.exact_degree;
  nodes_json(rule.nodes, doc);
  Json w = Json::array();
  for (int i = 0; i < rule.weights.size(); ++i) w.push_back(d17(rule.weights(i)));
  doc["weights"] = std::move(w);
  doc["provenance"] = rule.provenance;
  return doc;
}

int cmd_cubature(const RunConfig& cfg) {
  const WeightDescriptor desc = parse_weight_descriptor(cfg.weight);
  CubatureRule rule;
  if (cfg.closed_form) {
    if (desc.family != WeightDescriptor::Family::SymMap)
      fail(Err::BadDescriptor, "--closed-form needs a symmap weight");
    const int m = cfg.degree + desc.d;
    rule = closed_form_symmap_rule(base_recurrence_1d(desc.base, m + 1), desc.d, desc.sign_half,
                                   cfg.degree);
  } else {
    const PipelineAtDegree pipe = run_zeros(cfg);
    const KernelEvaluator kernel(pipe.basis, cfg.degree);
    rule = gauss_cubature(pipe.zeros, kernel, cfg.tol);
  }
  if (cfg.format == "json") {
    emit(cfg, dump_json17(rule_json(rule, cfg.weight)));
    return 0;
  }
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "node_re;node_im;weight\n";
    for (int k = 0; k < rule.size(); ++k) {
      for (int i = 0; i < rule.nodes[static_cast<std::size_t>(k)].size(); ++i)
        os << (i ? " " : "") << fmt17(d17(rule.nodes[static_cast<std::size_t>(k)](i).real()));
      os << ";";
      for (int i = 0; i < rule.nodes[static_cast<std::size_t>(k)].size(); ++i)
        os << (i ? " " : "") << fmt17(d17(rule.nodes[static_cast<std::size_t>(k)](i).imag()));
      os << ";" << fmt17(d17(rule.weights(k))) << "\n";
    }
  } else {
    os << "cubature rule, exact to degree " << rule.exact_degree << " (" << rule.provenance
       << ")\n";
    for (int k = 0; k < rule.size(); ++k) {
      os << "  w=" << fmt17(d17(rule.weights(k))) << " at (";
      for (int i = 0; i < rule.nodes[static_cast<std::size_t>(k)].size(); ++i)
        os << (i ? ", " : "") << fmt17(d17(rule.nodes[static_cast<std::size_t>(k)](i).real()));
      os << ")\n";
    }
  }
  emit(cfg, os.str());
  return 0;
}

// --- recover / convergent-eval ---

Json convergent_json(const ConvergentSequence& seq, const std::string& weight) {
  Json doc;
  doc["weight"] = weight;
  doc["d"] = seq.d;
  doc["mu0"] = d17(seq.mu0);
  Json levels = Json::array();
  for (const auto& lev : seq.levels) {
    Json entry;
    entry["n"] = lev.n;
    nodes_json(lev.expo.nodes, entry);
    Json cre = Json::array(), cim = Json::array();
    for (int i = 0; i < lev.expo.coeff.size(); ++i) {
      cre.push_back(d17(lev.expo.coeff(i).real()));
      cim.push_back(d17(lev.expo.coeff(i).imag()));
    }
    entry["coefficients"] = Json::array({cre, cim});
    entry["coincidence_max_dev"] = d17(lev.coincidence.max_dev);
    entry["first_mismatch_alpha"] =
        lev.coincidence.first_fail ? alpha_json(*lev.coincidence.first_fail) : Json(nullptr);
    entry["dev_at_2n"] = d17(lev.coincidence.dev_at_2n);
    entry["fit_residual"] = d17(lev.expo.fit_residual);
    entry["vandermonde_condition"] = d17(lev.expo.vdm_condition);
    levels.push_back(std::move(entry));
  }
  doc["levels"] = std::move(levels);
  return doc;
}

int cmd_recover(const RunConfig& cfg) {
  ProviderPtr p = provider_for(cfg, 2 * (cfg.levels + 1));
  const ConvergentSequence seq = continued_fraction_run(p, cfg.levels, cfg.tol, cfg.seed);
  if (cfg.format == "json") {
    emit(cfg, dump_json17(convergent_json(seq, cfg.weight)));
    return 0;
  }
  std::ostringstream os;
  if (cfg.format == "csv") {
    os << "n;coincidence_max_dev;dev_at_2n;fit_residual\n";
    for (const auto& lev : seq.levels)
      os << lev.n << ";" << fmt17(d17(lev.coincidence.max_dev)) << ";"
         << fmt17(d17(lev.coincidence.dev_at_2n)) << ";" << fmt17(d17(lev.expo.fit_residual))
         << "\n";
  } else {
    os << "moment recovery for " << cfg.weight << ", " << seq.levels.size() << " levels\n";
    for (const auto& lev : seq.levels)
      os << "  level " << lev.n << ": nodes=" << lev.expo.nodes.size()
         << " coincidence_max_dev=" << fmt17(d17(lev.coincidence.max_dev))
         << " dev_at_2n=" << fmt17(d17(lev.coincidence.dev_at_2n)) << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_convergent_eval(const RunConfig& cfg) {
  RunConfig sub = cfg;
  sub.levels = cfg.level;
  ProviderPtr p = provider_for(sub, 2 * (sub.levels + 1));
  const ConvergentSequence seq = continued_fraction_run(p, sub.levels, cfg.tol, cfg.seed);
  const ConvergentLevel& lev = seq.levels.back();

  std::vector<Complex> z;
  {
    std::stringstream ss(cfg.zlist);
    std::string item;
    std::vector<Real> vals;
    while (std::getline(ss, item, ',')) {
      try {
        vals.push_back(std::stold(item));
      } catch (const std::exception&) {
        fail(Err::BadDescriptor, "--z: cannot parse '" + item + "'");
      }
    }
    if (static_cast<int>(vals.size()) != 2 * seq.d)
      fail(Err::BadDescriptor, "--z: need " + std::to_string(2 * seq.d) +
                                   " comma-separated numbers (re,im per coordinate)");
    for (int i = 0; i < seq.d; ++i)
      z.emplace_back(vals[static_cast<std::size_t>(2 * i)],
                     vals[static_cast<std::size_t>(2 * i) + 1]);
  }
  const Complex value = Complex(seq.mu0, 0.0L) * rational_eval(lev.expo, z);
  Json doc;
  doc["weight"] = cfg.weight;
  doc["level"] = lev.n;
  Json zj = Json::array();
  for (const auto& zi : z) zj.push_back(Json::array({d17(zi.real()), d17(zi.imag())}));
  doc["z"] = std::move(zj);
  doc["value"] = Json::array({d17(value.real()), d17(value.imag())});
  emit(cfg, dump_json17(doc));
  return 0;
}

// --- check ---

int cmd_check(const RunConfig& cfg) {
  ProviderPtr p = provider_for(cfg, 2 * (cfg.levels + 1));
  Json doc;
  doc["weight"] = cfg.weight;
  doc["d"] = p->dim();
  doc["levels"] = cfg.levels;
  bool verdict = true;
  int exit_code = 0;
  int failing_level = 0;

  Json defin = Json::array();
  const auto scan = definiteness_scan(*p, cfg.levels, cfg.tol.def);
  for (const auto& row : scan) {
    Json entry;
    entry["n"] = row.n;
    entry["det"] = d17(row.determinant);
    entry["sv_floor"] = d17(row.sv_floor);
    entry["definite"] = row.definite;
    defin.push_back(std::move(entry));
    if (!row.definite) verdict = false;
  }
  doc["definiteness"] = std::move(defin);

  SignOrthoBasis basis;
  RecurrenceData rec;
  const bool structure_ok = verdict;
  if (structure_ok) {
    basis = sign_orthonormalize(build_monic(p, cfg.levels + 1, cfg.tol.def), cfg.tol.def);
    rec = recurrence_from_L(basis, *p, cfg.tol.def);
  }

  Json comm = Json::array(), hankel = Json::array();
  bool comm_ok = true, hankel_ok = true;
  if (structure_ok) {
    for (int n = 1; n <= cfg.levels; ++n) {
      const TruncatedJacobi tj = build_truncated(rec, n);
      const CommutativityReport rep = commutativity_report(tj, cfg.tol.comm);
      Json entry;
      entry["n"] = n;
      entry["residual_full"] = d17(rep.worst_full);
      entry["residual_top"] = d17(rep.worst_top);
      entry["ok"] = rep.ok;
      comm.push_back(std::move(entry));
      if (!rep.ok && comm_ok) {
        comm_ok = false;
        failing_level = n;
      }

      const HankelSchurReport hs = hankel_schur_test(*p, n, cfg.tol.cub);
      Json hentry;
      hentry["n"] = n;
      hentry["deviation"] = d17(hs.deviation);
      hentry["scale"] = d17(hs.scale);
      hentry["ok"] = hs.hankel;
      if (!hs.hankel) {
        Json witness;
        witness["alpha"] = alpha_json(hs.alpha);
        witness["beta"] = alpha_json(hs.beta);
        witness["alpha2"] = alpha_json(hs.alpha2);
        witness["beta2"] = alpha_json(hs.beta2);
        hentry["witness"] = std::move(witness);
      }
      hankel.push_back(std::move(hentry));
      if (!hs.hankel) hankel_ok = false;
    }
  }
  doc["commutativity"] = std::move(comm);
  doc["hankel_schur"] = std::move(hankel);
  verdict = verdict && comm_ok && hankel_ok;

  Json coin = Json::array();
  if (verdict) {
    try {
      const ConvergentSequence seq = continued_fraction_run(p, cfg.levels, cfg.tol, cfg.seed);
      for (const auto& lev : seq.levels) {
        Json entry;
        entry["n"] = lev.n;
        entry["max_dev"] = d17(lev.coincidence.max_dev);
        const bool ok =
            lev.coincidence.max_dev <= 1e-8L * std::max(lev.coincidence.scale, Real(1.0L));
        entry["ok"] = ok;
        coin.push_back(std::move(entry));
        if (!ok) verdict = false;
      }
    } catch (const Error& e) {
      verdict = false;
      doc["error"] = std::string(err_name(e.code())) + ": " + e.what();
      if (e.code() == Err::MultipleZeros) exit_code = 5;
      if (e.code() == Err::DegreeExceeded) exit_code = 2;
    }
  }
  doc["coincidence"] = std::move(coin);
  doc["verdict"] = verdict;
  if (failing_level > 0) doc["failing_level"] = failing_level;

  emit(cfg, dump_json17(doc));
  if (verdict) return 0;
  return exit_code != 0 ? exit_code : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multivariate orthogonal polynomials, Gaussian cubature, and moment recovery"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  RunConfig cfg;

  app.add_option("--weight", cfg.weight,
                 "weight descriptor: legendre | chebyshev | gegenbauer:lambda=<f>,mu=<f> | "
                 "symmap:base=<legendre|chebyshev>,d=<int>,sign=<-0.5|+0.5> | table:<path>");
  app.add_option("--d", cfg.d, "dimension (product weights); descriptor defaults otherwise");
  app.add_option("--seed", cfg.seed, "seed for the joint-eigenvalue combination");
  app.add_option("--format", cfg.format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", cfg.out, "output path (atomic write); stdout if absent");
  double tdef = -1, torth = -1, tcomm = -1, teig = -1, tcub = -1, tfit = -1;
  app.add_option("--tol-def", tdef, "definiteness tolerance");
  app.add_option("--tol-orth", torth, "orthogonality tolerance");
  app.add_option("--tol-comm", tcomm, "commutativity tolerance");
  app.add_option("--tol-eig", teig, "eigenpair tolerance");
  app.add_option("--tol-cub", tcub, "cubature tolerance");
  app.add_option("--tol-fit", tfit, "exponential fit tolerance");

  auto* cmoments = app.add_subcommand("moments", "emit the moment table |alpha| <= 2n");
  cmoments->add_option("--degree", cfg.degree, "n");
  auto* corth = app.add_subcommand("orthopoly", "recurrence matrices of the orthogonal basis");
  corth->add_option("--degree", cfg.degree, "basis degree");
  corth->add_option("--flavor", cfg.flavor, "sign-orthonormal | monic");
  auto* czeros = app.add_subcommand("zeros", "common zeros of the degree-n basis");
  czeros->add_option("--degree", cfg.degree, "n");
  auto* ccub = app.add_subcommand("cubature", "Gaussian cubature rule of degree 2n-1");
  ccub->add_option("--degree", cfg.degree, "n");
  ccub->add_flag("--closed-form", cfg.closed_form, "use the symmetric-map construction");
  auto* crecover = app.add_subcommand("recover", "iterate the moment-sequence convergents");
  crecover->add_option("--levels", cfg.levels, "N");
  auto* ceval = app.add_subcommand("convergent-eval", "evaluate the rational convergent");
  ceval->add_option("--level", cfg.level, "n");
  ceval->add_option("--z", cfg.zlist, "re,im per coordinate, comma separated");
  auto* ccheck =
      app.add_subcommand("check", "definiteness, commutativity, Hankel and coincidence verdicts");
  ccheck->add_option("--levels", cfg.levels, "N");

  CLI11_PARSE(app, argc, argv);

  if (tdef > 0) cfg.tol.def = static_cast<Real>(tdef);
  if (torth > 0) cfg.tol.orth = cfg.tol.eval = static_cast<Real>(torth);
  if (tcomm > 0) cfg.tol.comm = static_cast<Real>(tcomm);
  if (teig > 0) cfg.tol.eig = static_cast<Real>(teig);
  if (tcub > 0) cfg.tol.cub = static_cast<Real>(tcub);
  if (tfit > 0) cfg.tol.fit = static_cast<Real>(tfit);

  try {
    if (cfg.weight.empty()) fail(Err::BadDescriptor, "--weight is required");
    if (cmoments->parsed()) return cmd_moments(cfg);
    if (corth->parsed()) return cmd_orthopoly(cfg);
    if (czeros->parsed()) return cmd_zeros(cfg);
    if (ccub->parsed()) return cmd_cubature(cfg);
    if (crecover->parsed()) return cmd_recover(cfg);
    if (ceval->parsed()) return cmd_convergent_eval(cfg);
    if (ccheck->parsed()) return cmd_check(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << err_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case Err::DegreeExceeded: return 2;
      case Err::BadDescriptor: return 3;
      case Err::CommutativityFailed: return 4;
      case Err::MultipleZeros: return 5;
      default: return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
