#include "fhm/cli.hpp"

#include "fhm/blocking.hpp"
#include "fhm/core.hpp"
#include "fhm/dominance.hpp"
#include "fhm/economy.hpp"
#include "fhm/equilibrium.hpp"
#include "fhm/fixtures.hpp"
#include "fhm/scenario.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fhm {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  static const char* kHex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = kHex[h & 0xF];
  return s;
}

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitNegative = 3;
constexpr int kExitSolver = 4;

// Collects the report so stdout is written in one deterministic block.
struct Report {
  bool structured = false;
  std::ostringstream buf;

  void text(const std::string& line) {
    if (!structured) buf << line << '\n';
  }
  void kv(const std::string& key, const std::string& value) {
    if (structured) buf << key << '=' << value << '\n';
  }
  // Emits the structured pair, or the text line when that differs.
  void both(const std::string& key, const std::string& value, const std::string& line) {
    if (structured)
      kv(key, value);
    else
      text(line);
  }
};

std::string yesno(bool b) { return b ? "yes" : "no"; }

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::string coalition_text(const Coalition& s) {
  std::string out = "{";
  for (size_t k = 0; k < s.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(s[k] + 1);
  }
  return out + "}";
}

struct LoadedEconomy {
  Economy e;
  std::string path_label;
  std::string digest;
};

// Reads, parses and validates an economy; nonzero exit code on failure.
int load_economy(const std::string& path, const char* bundled_text,
                 const std::string& bundled_label, LoadedEconomy& out, std::ostream& err) {
  std::string bytes;
  if (!path.empty()) {
    if (!read_file(path, bytes)) {
      err << "error: cannot read " << path << '\n';
      return kExitIo;
    }
    out.path_label = path;
  } else {
    bytes = bundled_text;
    out.path_label = bundled_label;
  }
  out.digest = digest_hex(bytes);
  try {
    out.e = parse_economy(bytes);
  } catch (const ParseError& ex) {
    err << "error: " << out.path_label << " line " << ex.line << ": " << ex.what() << '\n';
    return kExitValidation;
  }
  ValidationReport v = validate(out.e);
  if (!v.empty()) {
    for (const auto& msg : v) err << "error: " << out.path_label << ": " << msg << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

struct LoadedAllocation {
  Allocation p;
  std::string path_label;
  std::string digest;
};

int load_allocation(const std::string& path, const Economy& e, LoadedAllocation& out,
                    std::ostream& err) {
  std::string bytes;
  if (!read_file(path, bytes)) {
    err << "error: cannot read " << path << '\n';
    return kExitIo;
  }
  out.path_label = path;
  out.digest = digest_hex(bytes);
  try {
    out.p = parse_allocation(bytes);
  } catch (const ParseError& ex) {
    err << "error: " << path << " line " << ex.line << ": " << ex.what() << '\n';
    return kExitValidation;
  }
  ValidationReport v = validate_allocation(e, out.p);
  if (!v.empty()) {
    for (const auto& msg : v) err << "error: " << path << ": " << msg << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

void emit_header(Report& rep, const std::string& command) {
  rep.both("command", command, "command: " + command);
}

void emit_input(Report& rep, const std::string& role, const std::string& label,
                const std::string& digest) {
  if (rep.structured) {
    rep.kv("input." + role, label);
    rep.kv("digest." + role, "fnv1a:" + digest);
  } else {
    rep.text(role + ": " + label + " (fnv1a:" + digest + ")");
  }
}

void emit_steps(Report& rep, const ScenarioReport& sr) {
  for (size_t k = 0; k < sr.steps.size(); ++k) {
    const ScenarioStep& st = sr.steps[k];
    if (rep.structured) {
      const std::string base = "step." + std::to_string(k + 1);
      rep.kv(base + ".directive", st.text);
      rep.kv(base + ".ok", yesno(st.ok));
      for (size_t j = 0; j < st.detail.size(); ++j)
        rep.kv(base + ".detail." + std::to_string(j + 1), st.detail[j]);
    } else {
      rep.text(std::string("[") + (st.ok ? "ok" : "FAIL") + "] " + st.text);
      for (const auto& d : st.detail) rep.text("    " + d);
    }
  }
}

// ---- subcommand bodies ------------------------------------------------

struct ValidateArgs {
  std::string economy, allocation;
};

int cmd_validate(const ValidateArgs& a, Report& rep, std::ostream& err) {
  emit_header(rep, "validate");
  std::string bytes;
  if (!read_file(a.economy, bytes)) {
    err << "error: cannot read " << a.economy << '\n';
    return kExitIo;
  }
  emit_input(rep, "economy", a.economy, digest_hex(bytes));
  Economy e;
  bool ok = true;
  try {
    e = parse_economy(bytes);
  } catch (const ParseError& ex) {
    rep.both("violation.1", "line " + std::to_string(ex.line) + ": " + ex.what(),
             "violation: line " + std::to_string(ex.line) + ": " + ex.what());
    rep.both("valid", "no", "economy: invalid");
    return kExitValidation;
  }
  ValidationReport v = validate(e);
  for (size_t k = 0; k < v.size(); ++k)
    rep.both("violation." + std::to_string(k + 1), v[k], "violation: " + v[k]);
  ok = v.empty();
  rep.kv("n", std::to_string(e.n));
  rep.both("valid", yesno(ok),
           ok ? "economy: valid (n=" + std::to_string(e.n) + ")" : "economy: invalid");
  if (!ok) return kExitValidation;

  if (!a.allocation.empty()) {
    std::string abytes;
    if (!read_file(a.allocation, abytes)) {
      err << "error: cannot read " << a.allocation << '\n';
      return kExitIo;
    }
    emit_input(rep, "allocation", a.allocation, digest_hex(abytes));
    try {
      Allocation p = parse_allocation(abytes);
      ValidationReport av = validate_allocation(e, p);
      for (size_t k = 0; k < av.size(); ++k)
        rep.both("allocation.violation." + std::to_string(k + 1), av[k], "violation: " + av[k]);
      rep.both("allocation.valid", yesno(av.empty()),
               av.empty() ? "allocation: valid" : "allocation: invalid");
      if (!av.empty()) return kExitValidation;
    } catch (const ParseError& ex) {
      rep.both("allocation.violation.1", "line " + std::to_string(ex.line) + ": " + ex.what(),
               "violation: line " + std::to_string(ex.line) + ": " + ex.what());
      rep.both("allocation.valid", "no", "allocation: invalid");
      return kExitValidation;
    }
  }
  return kExitOk;
}

struct CheckArgs {
  std::string economy, allocation, properties = "ir,ete,eene,sdeff,envy";
};

int cmd_check(const CheckArgs& a, Report& rep, std::ostream& err) {
  emit_header(rep, "check");
  LoadedEconomy le;
  if (int rc = load_economy(a.economy, nullptr, "", le, err)) return rc;
  LoadedAllocation la;
  if (int rc = load_allocation(a.allocation, le.e, la, err)) return rc;
  emit_input(rep, "economy", le.path_label, le.digest);
  emit_input(rep, "allocation", la.path_label, la.digest);

  bool want[5] = {false, false, false, false, false};  // ir, ete, eene, sdeff, envy
  static const char* kNames[5] = {"ir", "ete", "eene", "sdeff", "envy"};
  {
    std::istringstream in(a.properties);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      bool found = false;
      for (int k = 0; k < 5; ++k)
        if (tok == kNames[k]) want[k] = found = true;
      if (!found) {
        err << "error: unknown property '" << tok << "'\n";
        return kExitValidation;
      }
    }
  }

  const Economy& e = le.e;
  const Allocation& p = la.p;
  if (want[0]) {
    int violator = -1;
    bool ok = is_IR(e, p, &violator);
    rep.both("property.ir", yesno(ok),
             ok ? "ir: yes"
                : "ir: no (agent " + std::to_string(violator + 1) + " below endowment)");
    if (!ok) rep.kv("property.ir.violator", std::to_string(violator + 1));
  }
  if (want[1]) {
    std::pair<int, int> w{-1, -1};
    bool ok = satisfies_ETE(e, p, &w);
    rep.both("property.ete", yesno(ok),
             ok ? "ete: yes"
                : "ete: no (equal agents " + std::to_string(w.first + 1) + " and " +
                      std::to_string(w.second + 1) + " receive different rows)");
    if (!ok)
      rep.kv("property.ete.witness",
             std::to_string(w.first + 1) + "," + std::to_string(w.second + 1));
  }
  if (want[2]) {
    std::pair<int, int> w{-1, -1};
    bool ok = satisfies_EENE(e, p, &w);
    rep.both("property.eene", yesno(ok),
             ok ? "eene: yes"
                : "eene: no (agent " + std::to_string(w.first + 1) + " envies agent " +
                      std::to_string(w.second + 1) + " under equal endowments)");
    if (!ok)
      rep.kv("property.eene.witness",
             std::to_string(w.first + 1) + "," + std::to_string(w.second + 1));
  }
  if (want[3]) {
    SdEfficiencyResult r = is_sd_efficient(e, p);
    rep.both("property.sdeff", yesno(r.efficient), r.efficient ? "sdeff: yes" : "sdeff: no");
    if (!r.efficient && r.witness) {
      if (!rep.structured) rep.text("  improving allocation:");
      for (size_t i = 0; i < r.witness->size(); ++i)
        rep.both("property.sdeff.witness." + std::to_string(i + 1),
                 rat_row_str((*r.witness)[i]), "    " + rat_row_str((*r.witness)[i]));
    }
  }
  if (want[4]) {
    int count = 0;
    for (int i = 0; i < e.n; ++i)
      for (int j = 0; j < e.n; ++j) {
        if (i == j || !envies(e, p, i, j)) continue;
        ++count;
        rep.both("property.envy." + std::to_string(count),
                 std::to_string(i + 1) + ">" + std::to_string(j + 1),
                 "envy: agent " + std::to_string(i + 1) + " envies agent " +
                     std::to_string(j + 1));
      }
    rep.both("property.envy", count == 0 ? "none" : std::to_string(count),
             count == 0 ? "envy: none" : "envy: " + std::to_string(count) + " pair(s)");
  }
  return kExitOk;
}

struct CoreArgs {
  std::string economy, allocation, notion;
  int max_size = 0;
};

int cmd_core(const CoreArgs& a, Report& rep, std::ostream& err) {
  emit_header(rep, "core");
  LoadedEconomy le;
  if (int rc = load_economy(a.economy, nullptr, "", le, err)) return rc;
  LoadedAllocation la;
  if (int rc = load_allocation(a.allocation, le.e, la, err)) return rc;
  emit_input(rep, "economy", le.path_label, le.digest);
  emit_input(rep, "allocation", la.path_label, la.digest);
  rep.both("notion", a.notion, "notion: " + a.notion);

  int max_size = a.max_size;
  if (le.e.n > 16 && (max_size == 0 || max_size > 16)) {
    max_size = 16;
    err << "warning: coalition size capped at 16 (n=" << le.e.n
        << "; pass --max-size to override)\n";
  }

  CoreMembershipReport r = a.notion == "strong" ? in_strong_core(le.e, la.p, max_size)
                                                : in_weak_core(le.e, la.p, max_size);
  rep.kv("coalitions.checked", std::to_string(r.coalitions_checked));
  if (r.ir_violator) {
    rep.both("ir", "no",
             "ir: no (agent " + std::to_string(*r.ir_violator + 1) + " below endowment)");
    rep.kv("ir.violator", std::to_string(*r.ir_violator + 1));
  }
  if (r.certificate) {
    rep.both("blocking.coalition", coalition_text(r.certificate->coalition),
             "blocking coalition: " + coalition_text(r.certificate->coalition));
    const auto lines = split_lines(r.certificate->to_text());
    for (size_t k = 0; k < lines.size(); ++k)
      rep.both("certificate." + std::to_string(k + 1), lines[k], "  " + lines[k]);
  }
  rep.both("member", yesno(r.member),
           std::string("member: ") + (r.member ? "yes" : "no") + " (" +
               std::to_string(r.coalitions_checked) + " coalitions checked)");
  return r.member ? kExitOk : kExitNegative;
}

struct ReproduceArgs {
  std::string item, economy;
};

int cmd_reproduce(const ReproduceArgs& a, Report& rep, std::ostream& err) {
  emit_header(rep, "reproduce");
  rep.both("item", a.item, "item: " + a.item);
  const bool s1 = a.item == "statement1";
  LoadedEconomy le;
  if (int rc = load_economy(a.economy, s1 ? fixtures::kEconomyProfileA : fixtures::kEconomyProfileB,
                            s1 ? "bundled:profile-A" : "bundled:profile-B", le, err))
    return rc;
  emit_input(rep, "economy", le.path_label, le.digest);

  ScenarioReport sr;
  try {
    sr = s1 ? certify_statement1(le.e) : certify_statement3(le.e);
  } catch (const ParseError& ex) {
    err << "error: scenario line " << ex.line << ": " << ex.what() << '\n';
    return kExitValidation;
  }
  emit_steps(rep, sr);
  if (sr.success) {
    const std::string verdict =
        s1 ? "STRONG CORE EMPTY: certified" : "WEAK CORE ∩ EENE = ∅: certified";
    rep.both("verdict", verdict, "verdict: " + verdict);
    return kExitOk;
  }
  size_t first_fail = 0;
  for (size_t k = 0; k < sr.steps.size(); ++k)
    if (!sr.steps[k].ok) {
      first_fail = k;
      break;
    }
  const std::string verdict = "NOT CERTIFIED: step " + std::to_string(first_fail + 1) +
                              " failed: " + sr.steps[first_fail].text;
  rep.both("verdict", verdict, "verdict: " + verdict);
  return kExitNegative;
}

struct FindCoreArgs {
  std::string economy, output, tol = "0";
  int schedule = FindCoreOptions{}.schedule_len;
  unsigned long maxden = FindCoreOptions{}.maxden;
  std::uint64_t seed = FindCoreOptions{}.seed;
};

int cmd_find_core(const FindCoreArgs& a, Report& rep, std::ostream& err) {
  emit_header(rep, "find-core");
  LoadedEconomy le;
  if (int rc = load_economy(a.economy, nullptr, "", le, err)) return rc;
  emit_input(rep, "economy", le.path_label, le.digest);

  FindCoreOptions opts;
  opts.schedule_len = a.schedule;
  opts.maxden = a.maxden;
  opts.seed = a.seed;
  try {
    opts.tol = parse_rational(a.tol);
  } catch (const std::invalid_argument& ex) {
    err << "error: --tol: " << ex.what() << '\n';
    return kExitValidation;
  }
  if (opts.tol < 0 || opts.schedule_len < 0 || opts.maxden == 0) {
    err << "error: --tol must be >= 0, --schedule >= 0, --maxden >= 1\n";
    return kExitValidation;
  }
  rep.kv("seed", std::to_string(a.seed));
  if (!rep.structured) rep.text("seed: " + std::to_string(a.seed));

  FindCoreResult r = find_weak_core_ETE(le.e, opts);
  for (size_t k = 0; k < r.transcript.size(); ++k)
    rep.both("search." + std::to_string(k + 1), r.transcript[k], "search: " + r.transcript[k]);
  rep.both("converged", yesno(r.success),
           r.success ? "converged: yes" : "converged: no");
  if (!r.success) return kExitSolver;

  rep.both("eps", rat_str(r.eps_used), "eps: " + rat_str(r.eps_used));
  rep.both("verify.ir", yesno(r.ir), "ir: yes");
  rep.both("verify.ete", yesno(r.ete), "ete: yes");
  rep.both("verify.eene", yesno(r.eene), "eene: " + yesno(r.eene));
  rep.both("verify.weak-core", "yes",
           "weak-core: yes (" + std::to_string(r.coalitions_checked) + " coalitions checked)");
  rep.kv("verify.coalitions.checked", std::to_string(r.coalitions_checked));
  if (!rep.structured) rep.text("allocation:");
  for (int i = 0; i < le.e.n; ++i)
    rep.both("allocation." + std::to_string(i + 1), rat_row_str(r.allocation[i]),
             "  " + rat_row_str(r.allocation[i]));

  const std::string out_path = a.output.empty() ? a.economy + ".core" : a.output;
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << "error: cannot write " << out_path << '\n';
    return kExitIo;
  }
  out << serialize_allocation(r.allocation);
  out.close();
  rep.both("output", out_path, "output: " + out_path);
  return kExitOk;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact analysis of housing markets with fractional endowments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "structured"}));

  ValidateArgs va;
  auto* sub_validate = app.add_subcommand("validate", "validate an economy (and allocation) file");
  sub_validate->add_option("--economy", va.economy, "economy file")->required();
  sub_validate->add_option("--allocation", va.allocation, "allocation file");

  CheckArgs ca;
  auto* sub_check = app.add_subcommand("check", "check allocation properties");
  sub_check->add_option("--economy", ca.economy)->required();
  sub_check->add_option("--allocation", ca.allocation)->required();
  sub_check->add_option("--properties", ca.properties, "subset of ir,ete,eene,sdeff,envy");

  CoreArgs oa;
  auto* sub_core = app.add_subcommand("core", "decide core membership");
  sub_core->add_option("--economy", oa.economy)->required();
  sub_core->add_option("--allocation", oa.allocation)->required();
  sub_core->add_option("--notion", oa.notion, "strong or weak")
      ->required()
      ->check(CLI::IsMember({"strong", "weak"}));
  sub_core->add_option("--max-size", oa.max_size, "largest coalition size (default n)");

  ReproduceArgs ra;
  auto* sub_repro = app.add_subcommand("reproduce", "run a bundled certification chain");
  sub_repro->add_option("item", ra.item, "statement1 or statement3")
      ->required()
      ->check(CLI::IsMember({"statement1", "statement3"}));
  sub_repro->add_option("--economy", ra.economy, "override the bundled economy");

  FindCoreArgs fa;
  auto* sub_find = app.add_subcommand("find-core", "search for a weak-core ETE allocation");
  sub_find->add_option("--economy", fa.economy)->required();
  sub_find->add_option("--schedule", fa.schedule, "eps schedule length");
  sub_find->add_option("--maxden", fa.maxden, "entry denominator cap for rounding");
  sub_find->add_option("--seed", fa.seed, "search seed");
  sub_find->add_option("--tol", fa.tol, "residual tolerance (rational)");
  sub_find->add_option("--output", fa.output, "allocation output path (default <economy>.core)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  const auto started = std::chrono::steady_clock::now();
  Report rep;
  rep.structured = format == "structured";
  int rc = kExitOk;
  std::string name;
  try {
    if (sub_validate->parsed()) {
      name = "validate";
      rc = cmd_validate(va, rep, err);
    } else if (sub_check->parsed()) {
      name = "check";
      rc = cmd_check(ca, rep, err);
    } else if (sub_core->parsed()) {
      name = "core";
      rc = cmd_core(oa, rep, err);
    } else if (sub_repro->parsed()) {
      name = "reproduce";
      rc = cmd_reproduce(ra, rep, err);
    } else if (sub_find->parsed()) {
      name = "find-core";
      rc = cmd_find_core(fa, rep, err);
    }
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    rc = kExitValidation;
  }
  rep.kv("exit", std::to_string(rc));
  out << rep.buf.str();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - started)
                      .count();
  err << "[time] " << name << " total_ms=" << ms << '\n';
  return rc;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_run(args, std::cout, std::cerr);
}

}  // namespace fhm
