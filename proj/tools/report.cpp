#include "report.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "isopoly/errors.hpp"
#include "json.hpp"

namespace isopoly::report {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kStatusNames[] = {"pass", "fail", "hypothesis_failed", "input_error", "budget",
                                        "indeterminate"};

json to_json(const Fields& fields) {
  json obj = json::object();
  for (const auto& [k, v] : fields) obj[k] = v;
  return obj;
}

Fields from_json(const json& obj) {
  Fields out;
  for (const auto& [k, v] : obj.items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value, got '" + line + "'");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

const std::string& field(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("certificate is missing '" + key + "'");
  return it->second;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("expected true or false, got '" + s + "'");
}

void check_space(const std::map<std::string, std::string>& kv, const BaseSpaceId& space) {
  if (parse_space(field(kv, "space")) != space) {
    throw InvalidArgument("certificate was issued for " + field(kv, "space") + ", not " + format_space(space));
  }
}

}  // namespace

std::string to_string(Status s) { return kStatusNames[static_cast<int>(s)]; }

Status parse_status(const std::string& text) {
  for (int i = 0; i < 6; ++i) {
    if (text == kStatusNames[i]) return static_cast<Status>(i);
  }
  throw ParseError("unknown status '" + text + "'");
}

void write_jsonl(std::ostream& out, const Header& header, const std::vector<TrialRecord>& records) {
  json h;
  h["header"] = "isopoly-verify";
  h["lemma"] = header.lemma;
  h["space"] = header.space;
  h["seed"] = header.seed;
  h["trials"] = header.trials;
  h["violate_hypothesis"] = header.violate;
  h["timestamp"] = header.timestamp;
  out << h.dump() << '\n';
  for (const auto& r : records) {
    json j;
    j["trial"] = r.trial;
    j["lemma"] = r.lemma;
    j["instance"] = to_json(r.instance);
    j["hypothesis"] = r.status == Status::HypothesisFailed ? "failed" : (r.status == Status::InputError ? "error" : "ok");
    j["measured"] = to_json(r.measured);
    j["verdict"] = to_string(r.status);
    if (!r.message.empty()) j["message"] = r.message;
    out << j.dump() << '\n';
  }
}

std::vector<TrialRecord> read_jsonl(std::istream& in, Header* header) {
  std::vector<TrialRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad report line: ") + e.what());
    }
    if (j.contains("header")) {
      if (header) {
        header->lemma = j.value("lemma", "");
        header->space = j.value("space", "");
        header->seed = j.value("seed", "");
        header->trials = j.value("trials", "");
        header->violate = j.value("violate_hypothesis", false);
        header->timestamp = j.value("timestamp", "");
      }
      continue;
    }
    TrialRecord r;
    r.trial = j.at("trial").get<std::size_t>();
    r.lemma = j.at("lemma").get<std::string>();
    r.instance = from_json(j.at("instance"));
    r.measured = from_json(j.at("measured"));
    r.status = parse_status(j.at("verdict").get<std::string>());
    r.message = j.value("message", "");
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t Summary::total() const {
  std::size_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

std::vector<Summary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<Summary> out;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Summary& s) { return s.lemma == r.lemma; });
    if (it == out.end()) {
      out.push_back({r.lemma});
      it = out.end() - 1;
    }
    ++it->counts[static_cast<int>(r.status)];
  }
  return out;
}

void write_csv(std::ostream& out, const std::vector<Summary>& summary) {
  out << "lemma,trials";
  for (const char* name : kStatusNames) out << ',' << name;
  out << '\n';
  for (const auto& s : summary) {
    out << s.lemma << ',' << s.total();
    for (auto c : s.counts) out << ',' << c;
    out << '\n';
  }
}

int exit_code(const std::vector<TrialRecord>& records, bool negative_control) {
  bool fail = false, budget = false, input = false;
  for (const auto& r : records) {
    switch (r.status) {
      case Status::Pass:
        fail = fail || negative_control;
        break;
      case Status::Fail:
        fail = true;
        break;
      case Status::HypothesisFailed:
        input = input || !negative_control;
        break;
      case Status::InputError:
        input = true;
        break;
      case Status::Budget:
      case Status::Indeterminate:
        budget = true;
        break;
    }
  }
  if (fail) return 1;
  if (budget) return 3;
  if (input) return 2;
  return 0;
}

std::string format_member(const MMember& member) {
  switch (member.kind) {
    case MMember::Kind::Zero:
      return "zero";
    case MMember::Kind::Coordinate:
      return "coordinate " + std::to_string(member.coordinate);
    case MMember::Kind::Measure: {
      std::string out = "measure ";
      const auto& parts = member.decomposition.parts;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " | ";
        out += format_measure(parts[i]);
      }
      return out;
    }
  }
  return "";
}

MMember parse_member(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks) {
  const std::string t = trim(text);
  if (t == "zero") return MMember::zero();
  if (t.rfind("coordinate ", 0) == 0) return MMember::unit(std::stoll(t.substr(11)));
  if (t.rfind("measure ", 0) != 0) throw ParseError("unknown member '" + t + "'");
  MDecomposition d;
  std::string rest = t.substr(8);
  std::size_t at = 0;
  while (at <= rest.size()) {
    const auto bar = rest.find('|', at);
    const std::string piece = rest.substr(at, bar == std::string::npos ? std::string::npos : bar - at);
    d.parts.push_back(parse_measure(piece));
    if (bar == std::string::npos) break;
    at = bar + 1;
  }
  d.zbound = zbounded_optimum(d.combined(), space, blocks);
  return MMember::measure(std::move(d));
}

std::string format_norm_certificate(const NormCertificate& cert, const SparseVector& x, const BaseSpaceId& space) {
  std::ostringstream out;
  out << "kind = norm\n"
      << "space = " << format_space(space) << '\n'
      << "vector = " << format_vector(x) << '\n'
      << "value = " << format_rational(cert.value) << '\n'
      << "exhaustive = " << (cert.exhaustive ? "true" : "false") << '\n'
      << "programs = " << cert.programs << '\n'
      << "maximizer = " << format_member(cert.maximizer) << '\n';
  return out.str();
}

LoadedNorm load_norm_certificate(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks) {
  const auto kv = parse_key_values(text);
  if (field(kv, "kind") != "norm") throw ParseError("not a norm certificate");
  check_space(kv, space);
  LoadedNorm out;
  out.x = parse_vector(field(kv, "vector"));
  out.cert.value = parse_rational(field(kv, "value"));
  out.cert.exhaustive = parse_bool(field(kv, "exhaustive"));
  out.cert.programs = std::stoull(field(kv, "programs"));
  out.cert.maximizer = parse_member(field(kv, "maximizer"), space, blocks);
  const std::string why = certificate_violation(out.cert, out.x, space, blocks);
  if (!why.empty()) throw Error("norm certificate does not re-validate: " + why);
  return out;
}

std::string format_dual_certificate(const DualNormCertificate& cert, const SparseVector& f, const BaseSpaceId& space) {
  std::ostringstream out;
  out << "kind = dualnorm\n"
      << "space = " << format_space(space) << '\n'
      << "functional = " << format_vector(f) << '\n'
      << "lower = " << format_rational(cert.value.lower) << '\n'
      << "upper = " << format_rational(cert.value.upper) << '\n'
      << "exact = " << (cert.exact ? "true" : "false") << '\n'
      << "iterations = " << cert.iterations << '\n'
      << "witness = " << format_vector(cert.witness) << '\n'
      << "cuts = " << cert.cuts.size() << '\n';
  for (std::size_t i = 0; i < cert.cuts.size(); ++i) out << "cut." << i << " = " << format_vector(cert.cuts[i]) << '\n';
  return out.str();
}

LoadedDual load_dual_certificate(const std::string& text, const BaseSpaceId& space, const BlockSystem& blocks) {
  const auto kv = parse_key_values(text);
  if (field(kv, "kind") != "dualnorm") throw ParseError("not a dual norm certificate");
  check_space(kv, space);
  LoadedDual out;
  out.f = parse_vector(field(kv, "functional"));
  out.cert.value = {parse_rational(field(kv, "lower")), parse_rational(field(kv, "upper"))};
  out.cert.exact = parse_bool(field(kv, "exact"));
  out.cert.iterations = std::stoull(field(kv, "iterations"));
  out.cert.witness = parse_vector(field(kv, "witness"));
  const auto cuts = std::stoull(field(kv, "cuts"));
  for (std::size_t i = 0; i < cuts; ++i) out.cert.cuts.push_back(parse_vector(field(kv, "cut." + std::to_string(i))));

  // The lower bound is f(w) for a witness of M-norm at most 1; every cut must lie in M.
  if (out.cert.value.lower > out.cert.value.upper) throw Error("dual certificate has lower > upper");
  if (out.f.dot(out.cert.witness) != out.cert.value.lower) throw Error("dual witness does not attain the lower bound");
  if (exact_norm_M(out.cert.witness, space, blocks).value > 1) throw Error("dual witness lies outside the unit ball");
  for (const auto& cut : out.cert.cuts) {
    if (!in_M(cut, space, blocks)) throw Error("certificate cut is not in M: " + format_vector(cut));
  }
  return out;
}

}  // namespace isopoly::report
