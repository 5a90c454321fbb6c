#include "affsob/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "affsob/errors.hpp"

namespace affsob {

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::LessEq: return "<=";
    case Relation::GreaterEq: return ">=";
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
    case Relation::Equal: return "=";
    case Relation::Drift: return "drift";
    case Relation::Finite: return "finite";
  }
  return "?";
}

CheckResult evaluate_check(const std::string& suite, const CheckSpec& spec, double lhs, double rhs, double seconds) {
  if (spec.id.empty()) throw DomainError("CheckSpec: empty id");
  if (!(spec.tolerance > 0)) throw DomainError("CheckSpec " + spec.id + ": tolerance must be positive");
  CheckResult r;
  r.suite = suite;
  r.id = spec.id;
  r.theorem = spec.theorem;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : INFINITY);
  r.tolerance = spec.tolerance;
  r.seconds = seconds;
  const double tol = spec.tolerance;
  const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
  switch (spec.relation) {
    case Relation::LessEq: r.pass = finite && lhs <= rhs + tol * std::abs(rhs); break;
    case Relation::GreaterEq: r.pass = finite && lhs >= rhs - tol * std::abs(rhs); break;
    case Relation::Less: r.pass = finite && lhs < rhs - tol * std::abs(rhs); break;
    case Relation::Greater: r.pass = finite && lhs > rhs + tol * std::abs(rhs); break;
    case Relation::Equal: r.pass = finite && std::abs(lhs - rhs) <= tol * std::abs(rhs); break;
    case Relation::Drift: r.pass = finite && lhs > 0 && rhs > 0 && std::abs(lhs / rhs - 1.0) <= tol; break;
    case Relation::Finite: r.pass = finite && lhs > 0 && rhs > 0; break;
  }
  return r;
}

bool VerificationReport::passed() const { return !checks.empty() && failures() == 0; }

std::size_t VerificationReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.pass ? 0 : 1;
  return n;
}

const CheckResult* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

void VerificationReport::append(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  plots.insert(plots.end(), other.plots.begin(), other.plots.end());
}

std::string VerificationReport::summary() const {
  return suite + ": " + std::to_string(checks.size() - failures()) + "/" + std::to_string(checks.size()) +
         " checks passed";
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s) {
  if (s == "nan" || s == "NA") return NAN;
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ConfigError("report CSV: bad number \"" + s + "\"");
  return v;
}

// Check ids and tags never contain commas, so a plain split suffices.
std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

const char* kHeader = "suite,check_id,theorem,lhs,rhs,ratio,tolerance,pass,seconds";

}  // namespace

std::string VerificationReport::to_csv(bool with_timings) const {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& c : checks) {
    out += c.suite + "," + c.id + "," + c.theorem + "," + num(c.lhs) + "," + num(c.rhs) + "," + num(c.ratio) + "," +
           num(c.tolerance) + "," + (c.pass ? "true" : "false") + ",";
    out += with_timings && c.seconds >= 0 ? num(c.seconds) : std::string("NA");
    out += "\n";
  }
  return out;
}

std::string VerificationReport::plots_csv() const {
  std::string out = "series,x,y\n";
  for (const auto& p : plots) out += p.series + "," + num(p.x) + "," + num(p.y) + "\n";
  return out;
}

VerificationReport VerificationReport::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || split(line) != split(kHeader)) throw ConfigError("report CSV: missing header");
  VerificationReport rep;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw ConfigError("report CSV: expected 9 fields in \"" + line + "\"");
    if (f[7] != "true" && f[7] != "false") throw ConfigError("report CSV: bad pass flag \"" + f[7] + "\"");
    CheckResult c;
    c.suite = f[0];
    c.id = f[1];
    c.theorem = f[2];
    c.lhs = parse_num(f[3]);
    c.rhs = parse_num(f[4]);
    c.ratio = parse_num(f[5]);
    c.tolerance = parse_num(f[6]);
    c.pass = f[7] == "true";
    c.seconds = f[8] == "NA" ? -1.0 : parse_num(f[8]);
    if (!ids.insert(c.suite + "/" + c.id).second) throw ConfigError("report CSV: duplicate check id " + c.id);
    if (rep.suite.empty()) rep.suite = c.suite;
    else if (rep.suite != c.suite) rep.suite = "all";
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

}  // namespace affsob
