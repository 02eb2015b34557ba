// SPDX-License-Identifier: Apache-2.0
#include "synopt/lp.hpp"

#include <atomic>
#include <sstream>

#include "synopt/error.hpp"
#include "synopt/parallel.hpp"

namespace synopt {

namespace {

struct Tok {
  std::string text;
  SourceSpan span;
};

std::vector<Tok> tokenize(const std::string& text) {
  std::vector<Tok> toks;
  std::size_t line = 1, col = 1;
  std::string cur;
  SourceSpan start{1, 1, 0};
  auto flush = [&] {
    if (!cur.empty()) {
      toks.push_back({cur, start});
      cur.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char ch = text[i];
    if (ch == '#') {
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      --i;
      continue;
    }
    if (ch == '\n') {
      flush();
      ++line;
      col = 1;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      flush();
      ++col;
      continue;
    }
    if (ch == ';') {
      flush();
      toks.push_back({";", {line, col, i}});
      ++col;
      continue;
    }
    if (cur.empty()) start = {line, col, i};
    cur.push_back(ch);
    ++col;
  }
  flush();
  return toks;
}

class TokCursor {
 public:
  explicit TokCursor(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Tok& peek() const {
    if (done()) input_error("unexpected end of input");
    return toks_[pos_];
  }
  Tok next() {
    Tok t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& text) {
    Tok t = next();
    if (t.text != text)
      input_error("expected '" + text + "', found '" + t.text + "'", t.span);
  }
  std::size_t count() {
    Tok t = next();
    try {
      std::size_t pos = 0;
      long v = std::stol(t.text, &pos);
      if (pos != t.text.size() || v < 1) throw std::invalid_argument("");
      return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      input_error("expected a positive count, found '" + t.text + "'", t.span);
    }
  }
  Rat rational() {
    Tok t = next();
    try {
      return parse_rat(t.text);
    } catch (const Error& e) {
      input_error(std::string(e.what()), t.span);
    }
  }

 private:
  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

void validate(const LPPrimal& p) {
  if (p.cols() < 1 || p.rows() < 1)
    input_error("program needs at least one variable and one constraint");
  if (p.b.size() != p.rows()) input_error("b length does not match row count");
  for (const Vec& row : p.a)
    if (row.size() != p.cols())
      input_error("constraint row width does not match variable count");
}

}  // namespace

LPPrimal parse_lp(const std::string& text) {
  TokCursor in(tokenize(text));
  LPPrimal p;
  std::size_t n = in.count();
  std::size_t m = in.count();
  in.expect("c:");
  for (std::size_t j = 0; j < n; ++j) p.c.push_back(in.rational());
  in.expect("b:");
  for (std::size_t i = 0; i < m; ++i) p.b.push_back(in.rational());
  in.expect("A:");
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0) in.expect(";");
    Vec row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(in.rational());
    p.a.push_back(std::move(row));
  }
  if (!in.done() && in.peek().text == ";") in.next();
  if (!in.done())
    input_error("trailing input: '" + in.peek().text + "'", in.peek().span);
  validate(p);
  return p;
}

CertificatePair parse_cert(const std::string& text, std::size_t n,
                           std::size_t m) {
  TokCursor in(tokenize(text));
  CertificatePair cert;
  for (std::size_t j = 0; j < n; ++j) cert.x.push_back(in.rational());
  for (std::size_t i = 0; i < m; ++i) cert.y.push_back(in.rational());
  if (!in.done())
    input_error("trailing input: '" + in.peek().text + "'", in.peek().span);
  return cert;
}

LPDual make_dual(const LPPrimal& p) {
  validate(p);
  return LPDual{p.b, transpose(p.a), p.c};
}

LPPrimal dual_as_primal(const LPDual& d) {
  LPPrimal p;
  for (const Rat& v : d.b) p.c.push_back(-v);
  for (const Vec& row : d.at) {
    Vec neg;
    for (const Rat& v : row) neg.push_back(-v);
    p.a.push_back(std::move(neg));
  }
  for (const Rat& v : d.c) p.b.push_back(-v);
  validate(p);
  return p;
}

CSReport check_cs(const LPPrimal& p, const CertificatePair& cert) {
  validate(p);
  if (cert.x.size() != p.cols()) input_error("x* length does not match");
  if (cert.y.size() != p.rows()) input_error("y* length does not match");

  CSReport rep;
  rep.primal_objective = dot(p.c, cert.x);
  rep.dual_objective = dot(p.b, cert.y);

  rep.primal_feasible = true;
  for (const Rat& v : cert.x)
    if (v < 0) rep.primal_feasible = false;
  Vec ax = mat_vec(p.a, cert.x);
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (ax[i] > p.b[i]) rep.primal_feasible = false;

  Mat at = transpose(p.a);
  rep.dual_feasible = true;
  for (const Rat& v : cert.y)
    if (v < 0) rep.dual_feasible = false;
  Vec aty = mat_vec(at, cert.y);
  for (std::size_t j = 0; j < p.cols(); ++j)
    if (aty[j] < p.c[j]) rep.dual_feasible = false;

  rep.cs_ok = true;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    rep.row_products.push_back(cert.y[i] * (p.b[i] - ax[i]));
    if (rep.row_products.back() != 0) rep.cs_ok = false;
  }
  for (std::size_t j = 0; j < p.cols(); ++j) {
    rep.col_products.push_back(cert.x[j] * (p.c[j] - aty[j]));
    if (rep.col_products.back() != 0) rep.cs_ok = false;
  }

  rep.optimal_pair = rep.primal_feasible && rep.dual_feasible && rep.cs_ok;
  return rep;
}

bool verify_optimal_pair(const LPPrimal& p, const CertificatePair& cert) {
  CSReport rep = check_cs(p, cert);
  if (!rep.optimal_pair) return false;
  if (rep.primal_objective != rep.dual_objective)
    internal_error("optimal pair accepted but objectives differ: " +
                   rat_str(rep.primal_objective) + " vs " +
                   rat_str(rep.dual_objective));
  return true;
}

HornCS emit_horn_cs(const LPPrimal& p, const CertificatePair& cert) {
  CSReport rep = check_cs(p, cert);
  Vec ax = mat_vec(p.a, cert.x);
  Vec aty = mat_vec(transpose(p.a), cert.y);

  HornCS out;
  auto add_fact = [&](const std::string& symbol, std::size_t index,
                      bool value) {
    GroundAtom atom{symbol, {std::to_string(index + 1)}};
    std::uint32_t id = out.cnf.var_id(atom);
    if (out.assignment.size() <= id) out.assignment.resize(id + 1, false);
    out.assignment[id] = value;
    return id;
  };

  for (std::size_t i = 0; i < p.rows(); ++i) {
    std::uint32_t y_nz = add_fact("YnotEq0", i, cert.y[i] != 0);
    std::uint32_t s_nz = add_fact("B_AnotEq0", i, p.b[i] - ax[i] != 0);
    out.cnf.clauses.push_back(PropClause({{y_nz, false}, {s_nz, false}}));
    out.cnf.origins.push_back({i, "i=" + std::to_string(i + 1)});
  }
  for (std::size_t j = 0; j < p.cols(); ++j) {
    std::uint32_t x_nz = add_fact("XnotEq0", j, cert.x[j] != 0);
    std::uint32_t s_nz = add_fact("C_AnotEq0", j, p.c[j] - aty[j] != 0);
    out.cnf.clauses.push_back(PropClause({{x_nz, false}, {s_nz, false}}));
    out.cnf.origins.push_back({p.rows() + j, "j=" + std::to_string(j + 1)});
  }

  out.satisfied = true;
  for (const PropClause& cl : out.cnf.clauses) {
    bool sat = false;
    for (const PropLit& lit : cl.lits())
      if (out.assignment[lit.var] == lit.positive) sat = true;
    if (!sat) out.satisfied = false;
  }
  if (out.satisfied != rep.cs_ok)
    internal_error("slackness clauses disagree with the product check");
  return out;
}

std::optional<CertificatePair> solve_pattern(const LPPrimal& p,
                                             std::uint64_t pattern) {
  std::size_t m = p.rows(), n = p.cols();
  Mat at = transpose(p.a);

  Mat x_eq;
  Vec x_rhs;
  for (std::size_t i = 0; i < m; ++i)
    if ((pattern >> i) & 1) {
      x_eq.push_back(p.a[i]);
      x_rhs.push_back(p.b[i]);
    }
  for (std::size_t j = 0; j < n; ++j)
    if (!((pattern >> (m + j)) & 1)) {
      Vec unit(n, Rat(0));
      unit[j] = 1;
      x_eq.push_back(std::move(unit));
      x_rhs.push_back(0);
    }
  IneqSystem x_ineq;
  for (std::size_t i = 0; i < m; ++i) x_ineq.push_back({p.a[i], p.b[i]});
  for (std::size_t j = 0; j < n; ++j) {
    Vec unit(n, Rat(0));
    unit[j] = -1;
    x_ineq.push_back({std::move(unit), Rat(0)});
  }
  std::optional<Vec> x = solve_eq_ineq(x_eq, x_rhs, x_ineq, n);
  if (!x) return std::nullopt;

  Mat y_eq;
  Vec y_rhs;
  for (std::size_t i = 0; i < m; ++i)
    if (!((pattern >> i) & 1)) {
      Vec unit(m, Rat(0));
      unit[i] = 1;
      y_eq.push_back(std::move(unit));
      y_rhs.push_back(0);
    }
  for (std::size_t j = 0; j < n; ++j)
    if ((pattern >> (m + j)) & 1) {
      y_eq.push_back(at[j]);
      y_rhs.push_back(p.c[j]);
    }
  IneqSystem y_ineq;
  for (std::size_t j = 0; j < n; ++j) {
    Vec neg;
    for (const Rat& v : at[j]) neg.push_back(-v);
    y_ineq.push_back({std::move(neg), -p.c[j]});
  }
  for (std::size_t i = 0; i < m; ++i) {
    Vec unit(m, Rat(0));
    unit[i] = -1;
    y_ineq.push_back({std::move(unit), Rat(0)});
  }
  std::optional<Vec> y = solve_eq_ineq(y_eq, y_rhs, y_ineq, m);
  if (!y) return std::nullopt;

  return CertificatePair{*x, *y};
}

namespace {

// The single joint-feasibility decision: is some complementarity
// pattern feasible on both sides?
std::optional<CertificatePair> joint_feasible(const LPPrimal& p, int jobs) {
  std::size_t m = p.rows(), n = p.cols();
  std::uint64_t total = std::uint64_t{1} << (m + n);

  std::uint64_t found = total;
  if (jobs <= 1) {
    for (std::uint64_t pat = 0; pat < total; ++pat)
      if (solve_pattern(p, pat)) {
        found = pat;
        break;
      }
  } else {
    std::atomic<std::uint64_t> best{total};
#pragma omp parallel num_threads(jobs)
    {
#pragma omp for schedule(dynamic, 8)
      for (std::int64_t pat = 0; pat < static_cast<std::int64_t>(total);
           ++pat) {
        std::uint64_t u = static_cast<std::uint64_t>(pat);
        if (u >= best.load(std::memory_order_relaxed)) continue;
        if (!solve_pattern(p, u)) continue;
        std::uint64_t cur = best.load(std::memory_order_relaxed);
        while (u < cur &&
               !best.compare_exchange_weak(cur, u, std::memory_order_relaxed))
          ;
      }
    }
    found = best.load();
  }

  if (found == total) return std::nullopt;
  return solve_pattern(p, found);
}

LPDecision decide_impl(const LPPrimal& p, int jobs) {
  validate(p);
  if (p.rows() + p.cols() > 12)
    cap_error("pattern enumeration supports at most 12 rows plus columns");

  LPDecision d;
  std::optional<CertificatePair> cert = joint_feasible(p, jobs);
  d.joint_feasibility_calls = 1;

  if (cert) {
    if (!verify_optimal_pair(p, *cert))
      internal_error("pattern search produced a non-optimal pair");
    d.status = LPStatus::Found;
    d.cert = std::move(cert);
    return d;
  }
  if (!primal_feasible_point(p)) {
    d.status = LPStatus::PrimalInfeasible;
    return d;
  }
  if (dual_feasible_point(p))
    internal_error("both programs feasible but no pattern admits a pair");
  d.status = LPStatus::PrimalUnbounded;
  return d;
}

}  // namespace

LPDecision decide_optimal_pair(const LPPrimal& p, int jobs) {
  return decide_impl(p, resolve_jobs(jobs));
}

LPDecision decide_optimal_pair_serial(const LPPrimal& p) {
  return decide_impl(p, 1);
}

std::optional<Vec> primal_feasible_point(const LPPrimal& p) {
  validate(p);
  IneqSystem sys;
  for (std::size_t i = 0; i < p.rows(); ++i) sys.push_back({p.a[i], p.b[i]});
  for (std::size_t j = 0; j < p.cols(); ++j) {
    Vec unit(p.cols(), Rat(0));
    unit[j] = -1;
    sys.push_back({std::move(unit), Rat(0)});
  }
  return fm_feasible_point(sys, p.cols());
}

std::optional<Vec> dual_feasible_point(const LPPrimal& p) {
  validate(p);
  Mat at = transpose(p.a);
  IneqSystem sys;
  for (std::size_t j = 0; j < p.cols(); ++j) {
    Vec neg;
    for (const Rat& v : at[j]) neg.push_back(-v);
    sys.push_back({std::move(neg), -p.c[j]});
  }
  for (std::size_t i = 0; i < p.rows(); ++i) {
    Vec unit(p.rows(), Rat(0));
    unit[i] = -1;
    sys.push_back({std::move(unit), Rat(0)});
  }
  return fm_feasible_point(sys, p.rows());
}

std::string lp_str(const Vec& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << rat_str(v[i]);
  }
  return out.str();
}

}  // namespace synopt
