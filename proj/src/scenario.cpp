#include "fhm/scenario.hpp"

#include "fhm/fixtures.hpp"

#include <cctype>
#include <sstream>

namespace fhm {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

ConstraintTags parse_tags(const std::string& spec, int line) {
  ConstraintTags tags;
  std::string rest = spec;
  while (!rest.empty()) {
    std::string head = rest;
    if (auto plus = rest.find('+'); plus != std::string::npos) {
      head = rest.substr(0, plus);
      rest = rest.substr(plus + 1);
    } else {
      rest.clear();
    }
    if (head == "IR")
      tags.ir = true;
    else if (head == "EENE")
      tags.eene = true;
    else if (head != "ALLOC")
      throw ParseError(line, "unknown constraint tag '" + head + "'");
  }
  return tags;
}

std::string tags_str(ConstraintTags t) {
  if (t.ir && t.eene) return "IR+EENE";
  if (t.ir) return "IR";
  if (t.eene) return "EENE";
  return "ALLOC";
}

// "{1,3}" -> ascending 0-based coalition.
Coalition parse_coalition(const std::string& tok, const Economy& e, int line) {
  if (tok.size() < 2 || tok.front() != '{' || tok.back() != '}')
    throw ParseError(line, "expected coalition like {1,3}, got '" + tok + "'");
  Coalition s;
  std::istringstream in(tok.substr(1, tok.size() - 2));
  std::string part;
  while (std::getline(in, part, ',')) {
    int agent;
    try {
      agent = std::stoi(trim(part));
    } catch (const std::exception&) {
      throw ParseError(line, "bad coalition member '" + part + "'");
    }
    if (agent < 1 || agent > e.n) throw ParseError(line, "coalition member out of range");
    s.push_back(agent - 1);
  }
  for (size_t k = 1; k < s.size(); ++k)
    if (s[k] <= s[k - 1]) throw ParseError(line, "coalition must be strictly ascending");
  if (s.size() < 2) throw ParseError(line, "coalition needs at least two members");
  return s;
}

// "+/- [c*]p[i,oK]" terms, no internal whitespace.
RatVec parse_functional(const std::string& s, const Economy& e, int line) {
  RatVec coeffs(e.n * e.n, Rat(0));
  size_t pos = 0;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError(line, "bad functional '" + s + "': " + why);
  };
  while (pos < s.size()) {
    Rat sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
    }
    Rat coef = 1;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      size_t end = pos;
      while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '/'))
        ++end;
      coef = parse_rational(s.substr(pos, end - pos));
      pos = end;
      if (pos >= s.size() || s[pos] != '*') throw fail("expected '*' after coefficient");
      ++pos;
    }
    if (s.compare(pos, 2, "p[") != 0) throw fail("expected p[i,oK]");
    pos += 2;
    size_t comma = s.find(',', pos);
    size_t close = s.find(']', pos);
    if (comma == std::string::npos || close == std::string::npos || comma > close)
      throw fail("expected p[i,oK]");
    int agent;
    try {
      agent = std::stoi(s.substr(pos, comma - pos));
    } catch (const std::exception&) {
      throw fail("bad agent index");
    }
    if (agent < 1 || agent > e.n) throw fail("agent index out of range");
    int object;
    try {
      object = parse_object_name(s.substr(comma + 1, close - comma - 1), e.n);
    } catch (const std::invalid_argument& ex) {
      throw fail(ex.what());
    }
    coeffs[(agent - 1) * e.n + object] += sign * coef;
    pos = close + 1;
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') throw fail("expected '+' or '-'");
  }
  return coeffs;
}

// Splits tokens into rows at ";" and parses each as n rationals.
std::vector<Assignment> parse_rows(const std::vector<std::string>& toks, size_t from, size_t to,
                                   int n, int line) {
  std::vector<Assignment> rows;
  Assignment cur;
  for (size_t k = from; k < to; ++k) {
    if (toks[k] == ";") {
      rows.push_back(cur);
      cur.clear();
      continue;
    }
    try {
      cur.push_back(parse_rational(toks[k]));
    } catch (const std::invalid_argument& ex) {
      throw ParseError(line, ex.what());
    }
  }
  rows.push_back(cur);
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != n)
      throw ParseError(line, "bundle row needs " + std::to_string(n) + " entries");
  return rows;
}

struct Runner {
  const Economy& e;
  ConstraintTags tags;
  ConstraintSet set;
  // Bundles certified per-prefix maximal by successful best-exchange steps.
  std::vector<std::pair<int, Assignment>> certified;
  std::vector<std::pair<int, Assignment>> conclusions;

  explicit Runner(const Economy& econ) : e(econ), tags{}, set(build_constraints(econ, {})) {}

  RatVec unit_functional(int agent, int object) const {
    RatVec f(e.n * e.n, Rat(0));
    f[set.var(agent, object)] = 1;
    return f;
  }

  void do_constraints(ScenarioStep& st, ConstraintTags t) {
    tags = t;
    set = build_constraints(e, t);
    certified.clear();
    conclusions.clear();
    st.detail.push_back("constraint set: " + tags_str(t) + " (" + std::to_string(set.rows.size()) +
                        " rows)");
    st.ok = true;
  }

  void do_forced(ScenarioStep& st, bool eq, const RatVec& f, const Rat& want) {
    ForcedBounds fb = forced_bounds(set, f);
    if (!fb.feasible) {
      st.detail.push_back("constraint set is infeasible");
      return;
    }
    st.bound_min = fb.min;
    st.bound_max = fb.max;
    bool certs = check_certificate(set.to_lp(f, Sense::Minimize), fb.min_outcome) &&
                 check_certificate(set.to_lp(f, Sense::Maximize), fb.max_outcome);
    st.detail.push_back("exact range [" + rat_str(fb.min) + ", " + rat_str(fb.max) + "], want " +
                        (eq ? "= " : "<= ") + rat_str(want) +
                        (certs ? ", LP certificates verified" : ", CERTIFICATE CHECK FAILED"));
    st.ok = certs && (eq ? (fb.min == want && fb.max == want) : (fb.max <= want));
  }

  void do_best_exchange(ScenarioStep& st, const Coalition& s, const std::vector<Assignment>& rows) {
    st.members = s;
    for (int o = 0; o < e.n; ++o) {
      Rat lhs = 0, rhs = 0;
      for (size_t k = 0; k < s.size(); ++k) {
        lhs += rows[k][o];
        rhs += e.endow[s[k]][o];
      }
      if (lhs != rhs) {
        st.detail.push_back("bundles do not redistribute the coalition's endowment at " +
                            object_name(o));
        return;
      }
    }
    bool all = true;
    for (size_t k = 0; k < s.size(); ++k) {
      PolytopeDominance d = dominates_over_polytope(e, set, s[k], rows[k]);
      if (!d.feasible) {
        st.detail.push_back("constraint set is infeasible");
        return;
      }
      st.gaps.push_back(d.gaps);
      st.detail.push_back("agent " + std::to_string(s[k] + 1) + " prefix gaps: " +
                          rat_row_str(d.gaps) + (d.dominates ? "" : " (negative gap)"));
      all = all && d.dominates;
    }
    st.ok = all;
    if (all)
      for (size_t k = 0; k < s.size(); ++k) certified.emplace_back(s[k], rows[k]);
  }

  void do_conclude(ScenarioStep& st, const std::vector<std::pair<int, Assignment>>& rows) {
    bool all = true;
    for (const auto& [agent, row] : rows) {
      bool backed = false;
      for (const auto& [ca, crow] : certified)
        if (ca == agent && crow == row) {
          backed = true;
          break;
        }
      if (backed) {
        st.detail.push_back("p[" + std::to_string(agent + 1) + "] backed by a certified exchange");
      } else {
        bool forced = true;
        for (int o = 0; o < e.n && forced; ++o) {
          ForcedBounds fb = forced_bounds(set, unit_functional(agent, o));
          forced = fb.feasible && fb.min == row[o] && fb.max == row[o];
        }
        backed = forced;
        st.detail.push_back("p[" + std::to_string(agent + 1) +
                            (forced ? "] entrywise forced" : "] NOT backed"));
      }
      all = all && backed;
    }
    if (all)
      for (const auto& pr : rows) conclusions.push_back(pr);
    st.ok = all;
  }

  void do_expect_infeasible(ScenarioStep& st) {
    ConstraintSet sys = set;
    for (const auto& [agent, row] : conclusions)
      for (int o = 0; o < e.n; ++o) {
        RatVec f = unit_functional(agent, o);
        sys.add(std::move(f), Rel::EQ, row[o],
                "concluded p[" + std::to_string(agent + 1) + "," + object_name(o) + "]");
      }
    LinearProgram lp = sys.to_lp(RatVec(e.n * e.n, Rat(0)), Sense::Maximize);
    LpOutcome out = lp_solve(lp);
    if (out.status == LpStatus::Infeasible) {
      st.farkas_checked = check_certificate(lp, out);
      st.detail.push_back(st.farkas_checked ? "infeasible, Farkas certificate verified"
                                            : "infeasible, but CERTIFICATE CHECK FAILED");
      st.ok = st.farkas_checked;
    } else {
      st.detail.push_back("system is feasible");
      for (int i = 0; i < e.n; ++i) {
        RatVec r(out.primal.begin() + i * e.n, out.primal.begin() + (i + 1) * e.n);
        st.detail.push_back("  p[" + std::to_string(i + 1) + "] = " + rat_row_str(r));
      }
    }
  }

  void do_uniform_block(ScenarioStep& st, const Coalition& s, const std::vector<Assignment>& rows,
                        ConstraintTags t) {
    st.members = s;
    ConstraintSet over = build_constraints(e, t);
    UniformBlockCertificate cert;
    try {
      cert = certify_uniform_strong_block(e, over, s, rows);
    } catch (const std::invalid_argument& ex) {
      st.detail.push_back(ex.what());
      return;
    }
    st.gaps = cert.gaps;
    st.strict_prefix = cert.strict_prefix;
    for (size_t k = 0; k < s.size(); ++k) {
      std::string line = "agent " + std::to_string(s[k] + 1) + " prefix gaps: " +
                         rat_row_str(cert.gaps[k]);
      if (cert.strict_prefix[k] >= 0)
        line += ", strict at prefix " + std::to_string(cert.strict_prefix[k] + 1);
      st.detail.push_back(line);
    }
    if (!cert.success) st.detail.push_back("failure: " + cert.failure);
    st.ok = cert.success;
  }
};

}  // namespace

ScenarioReport run_scenario(const Economy& e, const std::string& script) {
  Runner run(e);
  ScenarioReport rep;
  rep.success = true;

  std::istringstream in(script);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto toks = split_ws(line);

    ScenarioStep st;
    st.text = line;
    if (toks[0] == "constraints" && toks.size() == 2) {
      run.do_constraints(st, parse_tags(toks[1], lineno));
    } else if (toks[0] == "forced" && toks.size() == 4 && (toks[1] == "eq" || toks[1] == "le")) {
      RatVec f = parse_functional(toks[2], e, lineno);
      Rat want;
      try {
        want = parse_rational(toks[3]);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(lineno, ex.what());
      }
      run.do_forced(st, toks[1] == "eq", f, want);
    } else if (toks[0] == "best-exchange" && toks.size() >= 3) {
      Coalition s = parse_coalition(toks[1], e, lineno);
      auto rows = parse_rows(toks, 2, toks.size(), e.n, lineno);
      if (rows.size() != s.size()) throw ParseError(lineno, "one bundle row per member required");
      run.do_best_exchange(st, s, rows);
    } else if (toks[0] == "conclude-equalities") {
      std::vector<std::pair<int, Assignment>> rows;
      size_t k = 1;
      while (k < toks.size()) {
        const std::string& head = toks[k];
        if (head.size() < 4 || head.compare(0, 2, "p[") != 0 || head.back() != ']')
          throw ParseError(lineno, "expected p[i], got '" + head + "'");
        int agent;
        try {
          agent = std::stoi(head.substr(2, head.size() - 3));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad agent in '" + head + "'");
        }
        if (agent < 1 || agent > e.n) throw ParseError(lineno, "agent index out of range");
        if (k + 1 >= toks.size() || toks[k + 1] != "=")
          throw ParseError(lineno, "expected '=' after " + head);
        k += 2;
        Assignment row;
        while (k < toks.size() && toks[k] != ";") {
          try {
            row.push_back(parse_rational(toks[k]));
          } catch (const std::invalid_argument& ex) {
            throw ParseError(lineno, ex.what());
          }
          ++k;
        }
        if (k < toks.size()) ++k;  // skip ';'
        if (static_cast<int>(row.size()) != e.n)
          throw ParseError(lineno, "row needs " + std::to_string(e.n) + " entries");
        rows.emplace_back(agent - 1, std::move(row));
      }
      if (rows.empty()) throw ParseError(lineno, "conclude-equalities needs at least one row");
      run.do_conclude(st, rows);
    } else if (toks[0] == "expect" && toks.size() == 2 && toks[1] == "infeasible") {
      run.do_expect_infeasible(st);
    } else if (toks[0] == "uniform-block" && toks.size() >= 5) {
      if (toks[toks.size() - 2] != "over")
        throw ParseError(lineno, "uniform-block needs a trailing 'over <tags>'");
      ConstraintTags t = parse_tags(toks.back(), lineno);
      Coalition s = parse_coalition(toks[1], e, lineno);
      auto rows = parse_rows(toks, 2, toks.size() - 2, e.n, lineno);
      if (rows.size() != s.size()) throw ParseError(lineno, "one bundle row per member required");
      run.do_uniform_block(st, s, rows, t);
    } else {
      throw ParseError(lineno, "unknown directive '" + toks[0] + "'");
    }
    rep.success = rep.success && st.ok;
    rep.steps.push_back(std::move(st));
  }
  if (rep.steps.empty()) throw ParseError(1, "empty scenario script");
  return rep;
}

ScenarioReport certify_statement1(const Economy& e) {
  return run_scenario(e, fixtures::kStatement1Script);
}

ScenarioReport certify_statement3(const Economy& e) {
  return run_scenario(e, fixtures::kStatement3Script);
}

}  // namespace fhm
