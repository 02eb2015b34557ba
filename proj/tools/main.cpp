// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synopt/error.hpp"
#include "synopt/flow.hpp"
#include "synopt/ground.hpp"
#include "synopt/lp.hpp"
#include "synopt/mh2s.hpp"
#include "synopt/oracle.hpp"
#include "synopt/parser.hpp"
#include "synopt/syntactic_eval.hpp"

namespace {

using namespace synopt;

// Collected output: key=value records always, prose only in text mode.
class Report {
 public:
  explicit Report(bool text_mode) : text_mode_(text_mode) {}

  void kv(const std::string& key, const std::string& value) {
    lines_.push_back(key + "=" + value);
  }
  void kv(const std::string& key, std::uint64_t value) {
    kv(key, std::to_string(value));
  }
  void kv(const std::string& key, const Rat& value) { kv(key, rat_str(value)); }
  void kv(const std::string& key, bool value) {
    kv(key, std::string(value ? "1" : "0"));
  }
  void prose(const std::string& line) {
    if (text_mode_) lines_.push_back(line);
  }
  void emit() const {
    for (const std::string& line : lines_) std::cout << line << "\n";
  }

 private:
  bool text_mode_;
  std::vector<std::string> lines_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) input_error("cannot write " + path);
  out << content;
}

std::string strip_suffix(const std::string& path, const std::string& suffix) {
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return path.substr(0, path.size() - suffix.size());
  return path;
}

void dump_witness(Report& rep, const SyntacticInstance& inst,
                  const SOAssignment& witness) {
  std::size_t universe = inst.structure.universe().size();
  for (const RelationSymbol& sym : inst.query.vocab.so_signature()) {
    std::size_t table = 1;
    for (unsigned a = 0; a < sym.arity; ++a) table *= universe;
    for (std::size_t t = 0; t < table; ++t) {
      std::vector<ElemId> tuple = index_tuple(t, sym.arity, universe);
      std::string key = "witness." + sym.name + "(";
      for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) key += ",";
        key += inst.structure.elem_name(tuple[i]);
      }
      key += ")";
      rep.kv(key, witness.get(sym.name, t));
    }
  }
}

int cmd_eval(const std::string& fms, const std::string& fml, bool kv_mode,
             std::uint64_t limit, int jobs) {
  FiniteStructure st = parse_structure(read_file(fms));
  Query q = parse_query(read_file(fml), st.vocab());
  SyntacticInstance inst{st, q};
  EvalResult r = evaluate_max(inst, limit, jobs);
  Report rep(!kv_mode);
  rep.kv("optimum", r.optimum);
  rep.kv("examined", r.examined);
  dump_witness(rep, inst, r.witness);
  rep.emit();
  return 0;
}

int cmd_encode(const std::string& cnf, const std::string& out_base,
               bool dedupe, bool kv_mode) {
  MH2SInstance inst = parse_mh2s(read_file(cnf));
  EncodedMH2S enc = encode(inst, dedupe);
  std::string base = out_base.empty() ? strip_suffix(cnf, ".cnf") : out_base;
  write_file(base + ".fms", print_structure(enc.instance.structure));
  write_file(base + ".fml", print_query(enc.instance.query));
  Report rep(!kv_mode);
  rep.kv("variables", static_cast<std::uint64_t>(inst.num_vars));
  rep.kv("clauses", static_cast<std::uint64_t>(inst.clauses.size()));
  rep.kv("raw_cnf_clauses", static_cast<std::uint64_t>(enc.raw_cnf_clauses));
  rep.kv("raw_literals_per_clause",
         static_cast<std::uint64_t>(enc.raw_literals_per_clause));
  rep.kv("simplified_clauses",
         static_cast<std::uint64_t>(enc.simplified_clauses));
  rep.kv("matrix_clauses", static_cast<std::uint64_t>(enc.matrix_clauses));
  rep.kv("structure_file", base + ".fms");
  rep.kv("query_file", base + ".fml");
  rep.emit();
  return 0;
}

int cmd_mh2s_opt(const std::string& cnf, bool kv_mode, int jobs) {
  MH2SInstance inst = parse_mh2s(read_file(cnf));
  MH2SOpt opt = brute_force_opt(inst, 24, jobs);
  Report rep(!kv_mode);
  rep.kv("optimum", opt.optimum);
  std::string assign;
  for (std::uint32_t v = 0; v < inst.num_vars; ++v) {
    if (v) assign += ' ';
    assign += mh2s_var_name(v) + "=" + (opt.assignment[v] ? "T" : "F");
  }
  rep.kv("assignment", assign);
  rep.emit();
  return 0;
}

int cmd_search(const std::string& problem, const std::string& file,
               std::int64_t lo_opt, std::int64_t hi_opt, bool kv_mode,
               int jobs) {
  std::unique_ptr<DecisionOracle> oracle;
  std::uint64_t lo = lo_opt < 0 ? 0 : static_cast<std::uint64_t>(lo_opt);
  std::uint64_t hi;
  if (problem == "mh2s") {
    MH2SInstance inst = parse_mh2s(read_file(file));
    hi = hi_opt < 0 ? inst.clauses.size() : static_cast<std::uint64_t>(hi_opt);
    oracle = make_mh2s_oracle(inst, false, jobs);
  } else if (problem == "lp") {
    if (hi_opt < 0) input_error("lp search needs --hi");
    hi = static_cast<std::uint64_t>(hi_opt);
    oracle = make_lp_objective_oracle(parse_lp(read_file(file)));
  } else if (problem == "flow") {
    if (hi_opt < 0) input_error("flow search needs --hi");
    hi = static_cast<std::uint64_t>(hi_opt);
    oracle = make_flow_oracle(parse_network(read_file(file)));
  } else {
    input_error("unknown search problem '" + problem +
                "' (expected mh2s, lp, or flow)");
  }
  SearchOutcome out = binary_search_opt(*oracle, lo, hi);
  Report rep(!kv_mode);
  rep.kv("optimum", out.optimum);
  rep.kv("calls", out.calls);
  rep.kv("ceiling", search_call_ceiling(out.lo, out.hi));
  rep.kv("lo", out.lo);
  rep.kv("hi", out.hi);
  rep.emit();
  return 0;
}

int cmd_lp_dual(const std::string& lp, bool kv_mode) {
  LPPrimal p = parse_lp(read_file(lp));
  LPDual d = make_dual(p);
  Report rep(!kv_mode);
  rep.kv("b", lp_str(d.b));
  rep.kv("c", lp_str(d.c));
  for (std::size_t j = 0; j < d.at.size(); ++j)
    rep.kv("At." + std::to_string(j + 1), lp_str(d.at[j]));
  rep.prose("min " + lp_str(d.b) + " . y  subject to  At y >= " +
            lp_str(d.c) + ", y >= 0");
  rep.emit();
  return 0;
}

int cmd_lp_verify(const std::string& lp, const std::string& cert_file,
                  const std::string& horn_out, bool kv_mode) {
  LPPrimal p = parse_lp(read_file(lp));
  CertificatePair cert = parse_cert(read_file(cert_file), p.cols(), p.rows());
  CSReport rep_cs = check_cs(p, cert);
  Report rep(!kv_mode);
  rep.kv("primal_feasible", rep_cs.primal_feasible);
  rep.kv("dual_feasible", rep_cs.dual_feasible);
  for (std::size_t i = 0; i < rep_cs.row_products.size(); ++i)
    rep.kv("row_product." + std::to_string(i + 1), rep_cs.row_products[i]);
  for (std::size_t j = 0; j < rep_cs.col_products.size(); ++j)
    rep.kv("col_product." + std::to_string(j + 1), rep_cs.col_products[j]);
  rep.kv("cs_ok", rep_cs.cs_ok);
  rep.kv("primal_objective", rep_cs.primal_objective);
  rep.kv("dual_objective", rep_cs.dual_objective);
  rep.kv("optimal_pair", rep_cs.optimal_pair);
  rep.prose("objectives " + rat_str(rep_cs.primal_objective) + " = " +
            rat_str(rep_cs.dual_objective));
  rep.prose(rep_cs.optimal_pair ? "verdict accepted" : "verdict rejected");
  if (!horn_out.empty()) {
    HornCS horn = emit_horn_cs(p, cert);
    write_file(horn_out, to_dimacs(horn.cnf));
    rep.kv("horn_cnf_file", horn_out);
    rep.kv("horn_cnf_satisfied", horn.satisfied);
  }
  rep.emit();
  return rep_cs.optimal_pair ? 0 : 1;
}

int cmd_lp_decide(const std::string& lp, bool kv_mode, int jobs) {
  LPPrimal p = parse_lp(read_file(lp));
  LPDecision d = decide_optimal_pair(p, jobs);
  Report rep(!kv_mode);
  switch (d.status) {
    case LPStatus::Found: {
      rep.kv("status", std::string("found"));
      rep.kv("x", lp_str(d.cert->x));
      rep.kv("y", lp_str(d.cert->y));
      Rat obj = dot(p.c, d.cert->x);
      rep.kv("objective", obj);
      rep.kv("joint_feasibility_calls", d.joint_feasibility_calls);
      rep.prose("objectives " + rat_str(obj) + " = " +
                rat_str(dot(p.b, d.cert->y)));
      rep.emit();
      return 0;
    }
    case LPStatus::PrimalInfeasible:
      rep.kv("status", std::string("primal-infeasible"));
      break;
    case LPStatus::PrimalUnbounded:
      rep.kv("status", std::string("primal-unbounded"));
      break;
  }
  rep.kv("joint_feasibility_calls", d.joint_feasibility_calls);
  rep.emit();
  return 1;
}

int cmd_flow_solve(const std::string& net_file, bool kv_mode, int jobs) {
  FlowNetwork net = parse_network(read_file(net_file));
  MaxFlowResult r = max_flow(net);
  Cut u = min_cut_from_flow(net, r.flow);
  Report rep(!kv_mode);
  rep.kv("value", r.value);
  for (std::size_t i = 0; i < net.edges.size(); ++i)
    rep.kv("flow." + net.edges[i].from + "->" + net.edges[i].to,
           r.flow.edge_flow[i]);
  rep.kv("cut", cut_names(net, u));
  rep.kv("cut_capacity", cut_capacity(net, u));
  auto cut2 = exists_certifying_cut(net, r.flow, jobs);
  rep.kv("certifying_cut_found", cut2.has_value());
  rep.emit();
  return 0;
}

int cmd_flow_verify(const std::string& net_file, const std::string& flow_file,
                    const std::string& cut_file, bool kv_mode) {
  FlowNetwork net = parse_network(read_file(net_file));
  Flow f = parse_flow(read_file(flow_file), net);
  Cut u = parse_cut(read_file(cut_file), net);
  CertificateReport r = verify_certificate(net, f, u);
  Report rep(!kv_mode);
  rep.kv("cut_valid", r.cut_valid);
  rep.kv("bounds_ok", r.bounds_ok);
  rep.kv("conservation_ok", r.conservation_ok);
  rep.kv("forward_saturated", r.forward_saturated);
  rep.kv("backward_zero", r.backward_zero);
  rep.kv("value_matches", r.value_matches);
  rep.kv("value", r.value);
  rep.kv("capacity", r.capacity);
  rep.kv("verdict", std::string(r.verdict ? "accepted" : "rejected"));
  if (!r.verdict) {
    std::string failed;
    auto name = [&](bool ok, const char* label) {
      if (!ok) {
        if (!failed.empty()) failed += ' ';
        failed += label;
      }
    };
    name(r.cut_valid, "cut_valid");
    name(r.bounds_ok, "bounds_ok");
    name(r.conservation_ok, "conservation_ok");
    name(r.forward_saturated, "forward_saturated");
    name(r.backward_zero, "backward_zero");
    name(r.value_matches, "value_matches");
    rep.prose("failed: " + failed);
  }
  rep.emit();
  return r.verdict ? 0 : 1;
}

int cmd_horn_sat(const std::string& dimacs, bool kv_mode) {
  PropCNF cnf = parse_dimacs(read_file(dimacs));
  HornResult r = horn_sat(cnf);
  Report rep(!kv_mode);
  rep.kv("satisfiable", r.satisfiable);
  if (r.satisfiable) {
    std::string model;
    for (std::size_t v = 0; v < r.model.size(); ++v) {
      if (v) model += ' ';
      model += r.model[v] ? '1' : '0';
    }
    rep.kv("model", model);
  } else if (r.conflict_clause) {
    rep.kv("conflict_clause",
           static_cast<std::uint64_t>(*r.conflict_clause));
  }
  rep.emit();
  return r.satisfiable ? 0 : 1;
}

int cmd_ground(const std::string& fms, const std::string& fml,
               const std::vector<std::string>& binds, int jobs) {
  FiniteStructure st = parse_structure(read_file(fms));
  Query q = parse_query(read_file(fml), st.vocab());
  VariableBinding binding;
  for (const std::string& spec : binds) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
      input_error("--bind expects var=element, got '" + spec + "'");
    std::string var = spec.substr(0, eq);
    std::string elem = spec.substr(eq + 1);
    auto id = st.elem_id(elem);
    if (!id) input_error("unknown element '" + elem + "'");
    binding.bind(var, *id);
  }
  PropCNF cnf = ground(q, st, binding, jobs);
  std::cout << to_dimacs(cnf);
  return 0;
}

int cmd_equiv_check(const std::string& fms, const std::string& fml_a,
                    const std::string& fml_b, bool kv_mode) {
  FiniteStructure st = parse_structure(read_file(fms));
  Query a = parse_query(read_file(fml_a), st.vocab());
  Query b = parse_query(read_file(fml_b), st.vocab());
  bool eq = check_equivalence(a.matrix, b.matrix, {});
  Report rep(!kv_mode);
  rep.kv("equivalent", eq);
  rep.emit();
  return eq ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for logic-defined optimization"};
  app.require_subcommand(1);

  std::string output_mode = "text";
  int jobs = 1;
  std::uint64_t seed = 0;  // reserved for randomized modes
  std::uint64_t limit = std::uint64_t{1} << 24;
  app.add_option("--output", output_mode, "output mode: text or kv")
      ->check(CLI::IsMember({"text", "kv"}));
  app.add_option("--jobs", jobs, "worker count (0 = all cores)");
  app.add_option("--seed", seed, "seed for randomized modes (reserved)");
  app.add_option("--limit", limit, "assignment enumeration cap");

  std::string in_a, in_b, in_c;
  std::string out_base, horn_out, problem;
  bool dedupe = false;
  std::int64_t lo = 0, hi = -1;
  std::vector<std::string> binds;

  CLI::App* eval = app.add_subcommand("eval", "maximize a counting query");
  eval->add_option("structure", in_a)->required();
  eval->add_option("query", in_b)->required();

  CLI::App* enc = app.add_subcommand("encode", "encode clauses as a query");
  enc->add_option("cnf", in_a)->required();
  enc->add_option("-o,--out", out_base, "output basename");
  enc->add_flag("--dedupe", dedupe, "drop exact duplicate clauses first");

  CLI::App* mopt = app.add_subcommand("mh2s-opt", "exhaustive optimum");
  mopt->add_option("cnf", in_a)->required();

  CLI::App* search = app.add_subcommand("search", "binary search an oracle");
  search->add_option("problem", problem, "mh2s, lp, or flow")->required();
  search->add_option("file", in_a)->required();
  search->add_option("--lo", lo, "lower bound (ask(lo) must hold)");
  search->add_option("--hi", hi, "upper bound");

  CLI::App* dual = app.add_subcommand("lp-dual", "derive the dual program");
  dual->add_option("lp", in_a)->required();

  CLI::App* lpv = app.add_subcommand("lp-verify", "check an optimal pair");
  lpv->add_option("lp", in_a)->required();
  lpv->add_option("cert", in_b)->required();
  lpv->add_option("--horn-dimacs", horn_out,
                  "write the slackness clauses as DIMACS");

  CLI::App* lpd = app.add_subcommand("lp-decide", "find an optimal pair");
  lpd->add_option("lp", in_a)->required();

  CLI::App* fsolve = app.add_subcommand("flow-solve", "maximum flow and cut");
  fsolve->add_option("net", in_a)->required();

  CLI::App* fverify = app.add_subcommand("flow-verify", "check a certificate");
  fverify->add_option("net", in_a)->required();
  fverify->add_option("flow", in_b)->required();
  fverify->add_option("cut", in_c)->required();

  CLI::App* hsat = app.add_subcommand("horn-sat", "unit propagation");
  hsat->add_option("dimacs", in_a)->required();

  CLI::App* grd = app.add_subcommand("ground", "instantiate to DIMACS");
  grd->add_option("structure", in_a)->required();
  grd->add_option("query", in_b)->required();
  grd->add_option("--bind", binds, "free variable binding var=element");

  CLI::App* eqv = app.add_subcommand("equiv-check", "matrix equivalence");
  eqv->add_option("structure", in_a)->required();
  eqv->add_option("query_a", in_b)->required();
  eqv->add_option("query_b", in_c)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  bool kv_mode = output_mode == "kv";
  try {
    if (*eval) return cmd_eval(in_a, in_b, kv_mode, limit, jobs);
    if (*enc) return cmd_encode(in_a, out_base, dedupe, kv_mode);
    if (*mopt) return cmd_mh2s_opt(in_a, kv_mode, jobs);
    if (*search) return cmd_search(problem, in_a, lo, hi, kv_mode, jobs);
    if (*dual) return cmd_lp_dual(in_a, kv_mode);
    if (*lpv) return cmd_lp_verify(in_a, in_b, horn_out, kv_mode);
    if (*lpd) return cmd_lp_decide(in_a, kv_mode, jobs);
    if (*fsolve) return cmd_flow_solve(in_a, kv_mode, jobs);
    if (*fverify) return cmd_flow_verify(in_a, in_b, in_c, kv_mode);
    if (*hsat) return cmd_horn_sat(in_a, kv_mode);
    if (*grd) return cmd_ground(in_a, in_b, binds, jobs);
    if (*eqv) return cmd_equiv_check(in_a, in_b, in_c, kv_mode);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ResourceCap ? 3 : 2;
  }
  return 2;
}
