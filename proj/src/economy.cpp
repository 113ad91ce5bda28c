#include "fhm/economy.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fhm {

namespace {

// Strips the comment tail and splits on whitespace.
std::vector<std::string> tokenize(const std::string& line) {
  std::string body = line;
  if (auto hash = body.find('#'); hash != std::string::npos) body.resize(hash);
  std::vector<std::string> toks;
  std::istringstream in(body);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

}  // namespace

void Economy::rebuild_ranks() {
  rank_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < static_cast<int>(prefs[i].size()); ++t) {
      int o = prefs[i][t];
      if (o >= 0 && o < n) rank_[i][o] = t;
    }
}

std::string object_name(int index) { return "o" + std::to_string(index + 1); }

int parse_object_name(const std::string& name, int n) {
  std::string s = name;
  if (s.size() >= 2 && s[0] == 'o') {
    std::string digits = s.substr(1);
    if (!digits.empty() && digits[0] == '_') digits = digits.substr(1);
    bool ok = !digits.empty();
    for (char c : digits) ok = ok && std::isdigit(static_cast<unsigned char>(c));
    if (ok) {
      int k = std::stoi(digits);
      if (k >= 1 && k <= n) return k - 1;
    }
  }
  throw std::invalid_argument("bad object name: '" + name + "'");
}

Economy parse_economy(const std::string& text) {
  // Collect the non-empty payload lines with their original line numbers.
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (!toks.empty()) rows.emplace_back(lineno, std::move(toks));
  }
  if (rows.empty()) throw ParseError(1, "empty economy file");

  const auto& head = rows[0];
  if (head.second.size() != 1) throw ParseError(head.first, "expected a single agent count");
  int n;
  try {
    n = std::stoi(head.second[0]);
  } catch (const std::exception&) {
    throw ParseError(head.first, "bad agent count '" + head.second[0] + "'");
  }
  if (n < 1) throw ParseError(head.first, "agent count must be >= 1");
  if (static_cast<int>(rows.size()) != 1 + 2 * n)
    throw ParseError(rows.back().first,
                     "expected " + std::to_string(1 + 2 * n) + " payload lines, got " +
                         std::to_string(rows.size()));

  Economy e;
  e.n = n;
  e.prefs.resize(n);
  e.endow.assign(n, RatVec(n, Rat(0)));
  for (int i = 0; i < n; ++i) {
    const auto& [ln, toks] = rows[1 + i];
    if (static_cast<int>(toks.size()) != n)
      throw ParseError(ln, "preference line needs " + std::to_string(n) + " object names");
    std::vector<bool> seen(n, false);
    for (const auto& t : toks) {
      int o;
      try {
        o = parse_object_name(t, n);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ln, ex.what());
      }
      if (seen[o]) throw ParseError(ln, "object " + t + " repeats in the preference list");
      seen[o] = true;
      e.prefs[i].push_back(o);
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto& [ln, toks] = rows[1 + n + i];
    if (static_cast<int>(toks.size()) != n)
      throw ParseError(ln, "endowment row needs " + std::to_string(n) + " entries");
    for (int o = 0; o < n; ++o) {
      try {
        e.endow[i][o] = parse_rational(toks[o]);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ln, ex.what());
      }
    }
  }
  e.rebuild_ranks();
  return e;
}

std::string serialize_economy(const Economy& e) {
  std::ostringstream out;
  out << e.n << "\n";
  for (int i = 0; i < e.n; ++i) {
    for (int t = 0; t < e.n; ++t) {
      if (t) out << ' ';
      out << object_name(e.prefs[i][t]);
    }
    out << "\n";
  }
  for (int i = 0; i < e.n; ++i) out << rat_row_str(e.endow[i]) << "\n";
  return out.str();
}

Allocation parse_allocation(const std::string& text) {
  Allocation p;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    RatVec row;
    for (const auto& t : toks) {
      try {
        row.push_back(parse_rational(t));
      } catch (const std::invalid_argument& ex) {
        throw ParseError(lineno, ex.what());
      }
    }
    p.push_back(std::move(row));
  }
  if (p.empty()) throw ParseError(1, "empty allocation file");
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i].size() != p.size())
      throw ParseError(1, "allocation must be square: row " + std::to_string(i + 1) + " has " +
                              std::to_string(p[i].size()) + " entries for " +
                              std::to_string(p.size()) + " rows");
  return p;
}

std::string serialize_allocation(const Allocation& p) {
  std::string out;
  for (const auto& row : p) {
    out += rat_row_str(row);
    out += '\n';
  }
  return out;
}

bool is_assignment(const Assignment& row) {
  for (const Rat& x : row)
    if (x < 0) return false;
  return rat_sum(row) == 1;
}

bool is_doubly_stochastic(const RatMat& m) {
  size_t n = m.size();
  for (const auto& row : m) {
    if (row.size() != n) return false;
    if (!is_assignment(row)) return false;
  }
  for (size_t o = 0; o < n; ++o) {
    Rat col = 0;
    for (size_t i = 0; i < n; ++i) col += m[i][o];
    if (col != 1) return false;
  }
  return true;
}

bool is_integral_market(const Economy& e) {
  for (const auto& row : e.endow)
    for (const Rat& x : row)
      if (x != 0 && x != 1) return false;
  return true;
}

ValidationReport validate(const Economy& e) {
  ValidationReport rep;
  if (e.n < 1) {
    rep.push_back("agent count must be >= 1");
    return rep;
  }
  for (int i = 0; i < e.n; ++i) {
    std::vector<bool> seen(e.n, false);
    bool ok = static_cast<int>(e.prefs[i].size()) == e.n;
    if (ok)
      for (int o : e.prefs[i]) {
        if (o < 0 || o >= e.n || seen[o]) {
          ok = false;
          break;
        }
        seen[o] = true;
      }
    if (!ok)
      rep.push_back("agent " + std::to_string(i + 1) +
                    ": preference is not a permutation of the objects");
  }
  for (int i = 0; i < e.n; ++i) {
    for (int o = 0; o < e.n; ++o)
      if (e.endow[i][o] < 0)
        rep.push_back("agent " + std::to_string(i + 1) + ": negative endowment of " +
                      object_name(o));
    Rat s = rat_sum(e.endow[i]);
    if (s != 1)
      rep.push_back("agent " + std::to_string(i + 1) + ": endowment row sums to " + rat_str(s) +
                    ", expected 1");
  }
  for (int o = 0; o < e.n; ++o) {
    Rat s = 0;
    for (int i = 0; i < e.n; ++i) s += e.endow[i][o];
    if (s != 1)
      rep.push_back("object " + object_name(o) + ": endowment column sums to " + rat_str(s) +
                    ", expected 1");
  }
  return rep;
}

ValidationReport validate_allocation(const Economy& e, const Allocation& p) {
  ValidationReport rep;
  if (static_cast<int>(p.size()) != e.n) {
    rep.push_back("allocation has " + std::to_string(p.size()) + " rows, economy has " +
                  std::to_string(e.n) + " agents");
    return rep;
  }
  for (int i = 0; i < e.n; ++i) {
    if (static_cast<int>(p[i].size()) != e.n) {
      rep.push_back("agent " + std::to_string(i + 1) + ": row has " +
                    std::to_string(p[i].size()) + " entries, expected " + std::to_string(e.n));
      continue;
    }
    for (int o = 0; o < e.n; ++o)
      if (p[i][o] < 0)
        rep.push_back("agent " + std::to_string(i + 1) + ": negative share of " + object_name(o));
    Rat s = rat_sum(p[i]);
    if (s != 1)
      rep.push_back("agent " + std::to_string(i + 1) + ": row sums to " + rat_str(s) +
                    ", expected 1");
  }
  for (int o = 0; o < e.n; ++o) {
    Rat s = 0;
    for (int i = 0; i < e.n; ++i)
      if (static_cast<int>(p[i].size()) == e.n) s += p[i][o];
    if (s != 1)
      rep.push_back("object " + object_name(o) + ": column sums to " + rat_str(s) +
                    ", expected 1");
  }
  return rep;
}

EqualClassPartition equal_class_partition(const Economy& e) {
  EqualClassPartition part;
  part.class_of.assign(e.n, -1);
  for (int i = 0; i < e.n; ++i) {
    if (part.class_of[i] >= 0) continue;
    int g = static_cast<int>(part.groups.size());
    part.groups.push_back({i});
    part.class_of[i] = g;
    for (int j = i + 1; j < e.n; ++j) {
      if (part.class_of[j] >= 0) continue;
      if (e.prefs[i] == e.prefs[j] && e.endow[i] == e.endow[j]) {
        part.groups[g].push_back(j);
        part.class_of[j] = g;
      }
    }
  }
  return part;
}

Allocation endowment_allocation(const Economy& e) { return e.endow; }

}  // namespace fhm
