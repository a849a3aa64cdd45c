// isopoly: parameter building, norm queries and lemma verification campaigns.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "isopoly/errors.hpp"
#include "isopoly/generators.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace isopoly;
using report::Status;
using report::TrialRecord;

namespace {

constexpr int kPass = 0, kVerdictFailure = 1, kInputError = 2, kBudget = 3;

struct RunConfig {
  std::string space = "c0";
  std::string params;  // ledger file; empty builds one from depth/lambda/sizing
  int depth = 4;
  std::string lambda;
  Index sizing = 0;
  Index k_max = 8;
  std::string precision = "1/1000000000";
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::uint64_t budget = 2000000;
  std::string out;
  std::string summary;
  unsigned threads = 1;
  std::string lemma;
  bool violate = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

ParameterFile build_parameters(const RunConfig& cfg, const BaseSpaceId& space) {
  const K0Selection sel = select_k0(space, cfg.k_max);
  LambdaRule rule;
  if (!cfg.lambda.empty()) rule.value = parse_rational(cfg.lambda);
  ParameterFile pf;
  pf.ledger = build_ledger(space, sel.k0, sel.phi, rule, cfg.depth);
  SizingRule sizing;
  if (cfg.sizing > 0) sizing.factor = cfg.sizing;
  pf.blocks = build_blocks(pf.ledger, sizing);
  return pf;
}

// Default ledgers are cached under $ISOPOLY_CACHE_DIR when it is set.
std::optional<fs::path> cache_path(const RunConfig& cfg) {
  const char* dir = std::getenv("ISOPOLY_CACHE_DIR");
  if (!dir || !*dir || !cfg.lambda.empty() || cfg.sizing > 0) return std::nullopt;
  std::string name = cfg.space + "-depth" + std::to_string(cfg.depth) + ".params";
  std::replace_if(name.begin(), name.end(), [](char c) { return c == ':' || c == '/' || c == '='; }, '_');
  return fs::path(dir) / name;
}

Setting make_setting(const RunConfig& cfg) {
  const BaseSpaceId space = parse_space(cfg.space);
  ParameterFile pf;
  if (!cfg.params.empty()) {
    pf = load_parameters(cfg.params);
  } else if (auto cached = cache_path(cfg); cached && fs::exists(*cached)) {
    pf = load_parameters(cached->string());
  } else {
    pf = build_parameters(cfg, space);
    if (cached) {
      fs::create_directories(cached->parent_path());
      save_parameters(cached->string(), pf.ledger, pf.blocks);
    }
  }
  if (pf.ledger.space != space) {
    throw InvalidArgument("parameter file is for " + format_space(pf.ledger.space) + ", not " + cfg.space);
  }
  Setting s{space, pf.ledger, pf.blocks};
  s.precision = parse_rational(cfg.precision);
  if (sgn(s.precision) <= 0) throw InvalidArgument("precision must be positive");
  return s;
}

std::string format_family(const std::vector<std::vector<int>>& family) {
  std::string out;
  for (const auto& member : family) {
    if (!out.empty()) out += ";";
    out += "{";
    for (std::size_t i = 0; i < member.size(); ++i) out += (i ? "," : "") + std::to_string(member[i]);
    out += "}";
  }
  return out;
}

Verdict run_trial(const std::string& lemma, Rng& rng, const Setting& s, bool violate, TrialRecord& rec) {
  if (lemma == "L1") {
    const L1Case c = generate_L1(rng, s, violate);
    rec.instance = {{"I", format_set(c.I)}, {"profile", format_profile(c.profile)}};
    return verify_L1(c.I, c.profile, s);
  }
  if (lemma == "L2" || lemma == "T3") {
    const SparseVector a = generate_coefficients(rng, s, violate);
    rec.instance = {{"a", format_vector(a)}};
    return lemma == "L2" ? verify_L2_lowerbound(a, s) : verify_T3_sandwich(a, s);
  }
  if (lemma == "L3") {
    const L3Case c = generate_L3(rng, s, violate);
    rec.instance = {{"mu", format_measure(c.mu)}, {"u", format_vector(c.u)}, {"n", std::to_string(c.n)}};
    return verify_L3(c.mu, c.u, c.n, s);
  }
  if (lemma == "L4") {
    const L4Instance in = generate_L4(rng, s, violate);
    rec.instance = {{"I", format_set(in.I)},          {"n", std::to_string(in.n)},
                    {"segments", format_profile(in.segments)}, {"rho", format_vector(in.rho)},
                    {"family", format_family(in.family)},      {"u", format_vector(in.u)}};
    return verify_L4(in, s);
  }
  if (lemma == "L5") {
    const L5Case c = generate_L5(rng, s, violate);
    rec.instance = {{"u", format_vector(c.u)}, {"rho", format_vector(c.rho)}};
    return verify_L5(c.u, c.rho, s);
  }
  if (lemma == "C3") {
    // Adjoint identity at one block index, then the operator bound on a random vector.
    const int depth = s.blocks.depth();
    const int n = violate ? depth + static_cast<int>(uniform(rng, 1, 3)) : 1 + static_cast<int>(rec.trial % depth);
    const SparseVector x = random_block_vector(rng, s.blocks, depth, 6, true);
    rec.instance = {{"n", std::to_string(n)}, {"x", format_vector(x)}};
    const bool adjoint = verify_adjoint(n, s.blocks);
    Verdict v = verify_operator_bound(x, s);
    v.require(adjoint, "adjoint");
    return v;
  }
  throw InvalidArgument("unknown lemma '" + lemma + "'");
}

TrialRecord run_guarded(const std::string& lemma, std::size_t trial, const RunConfig& cfg, const Setting& s) {
  TrialRecord rec;
  rec.trial = trial;
  rec.lemma = lemma;
  // Each trial owns its stream, so the report does not depend on scheduling.
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  Rng rng(seq);
  try {
    Verdict v = run_trial(lemma, rng, s, cfg.violate, rec);
    rec.measured = v.measured;
    rec.status = v.passed ? Status::Pass : Status::Fail;
  } catch (const HypothesisFailed& e) {
    rec.status = Status::HypothesisFailed;
    rec.message = e.what();
  } catch (const BudgetExceeded& e) {
    rec.status = Status::Budget;
    rec.message = e.what();
  } catch (const IterationCap& e) {
    rec.status = Status::Budget;
    rec.message = e.what();
  } catch (const OverflowBudget& e) {
    rec.status = Status::Budget;
    rec.message = e.what();
  } catch (const Indeterminate& e) {
    rec.status = Status::Indeterminate;
    rec.message = e.what();
  } catch (const InvalidArgument& e) {
    rec.status = Status::InputError;
    rec.message = e.what();
  } catch (const ParseError& e) {
    rec.status = Status::InputError;
    rec.message = e.what();
  } catch (const Error& e) {
    rec.status = Status::Fail;
    rec.message = e.what();
  }
  return rec;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

int cmd_params(const RunConfig& cfg) {
  const BaseSpaceId space = parse_space(cfg.space);
  const ParameterFile pf = build_parameters(cfg, space);
  const std::string why = block_violation(pf.ledger, pf.blocks);
  if (!why.empty()) {
    std::cerr << "block condition violated: " << why << '\n';
    return kInputError;
  }
  const std::string out = cfg.out.empty() ? "ledger.params" : cfg.out;
  save_parameters(out, pf.ledger, pf.blocks);
  std::cout << "space  = " << format_space(space) << '\n'
            << "k0     = " << pf.ledger.k0 << '\n'
            << "phi    = [" << format_rational(pf.ledger.phi_k0.bound.lower) << ", "
            << format_rational(pf.ledger.phi_k0.bound.upper) << "]\n"
            << "lambda = " << format_rational(pf.ledger.lambda) << '\n'
            << "blocks =";
  for (const Block& b : pf.blocks.blocks()) std::cout << ' ' << b.start << '-' << b.end();
  std::cout << "\nA     >= " << format_rational(constant_A(pf.blocks)) << '\n';
  try {
    std::cout << "C     <= " << format_rational(constant_C(pf.ledger)) << '\n';
  } catch (const DivergenceGuard& e) {
    std::cout << "C      : " << e.what() << '\n';
  }
  std::cout << "wrote " << out << '\n';
  return kPass;
}

int cmd_norm(const RunConfig& cfg, const std::string& vector, const std::string& check) {
  const Setting s = make_setting(cfg);
  if (!check.empty()) {
    const auto loaded = report::load_norm_certificate(read_file(check), s.space, s.blocks);
    std::cout << "certificate ok: ||" << format_vector(loaded.x) << "||_M = " << format_rational(loaded.cert.value)
              << '\n';
    return kPass;
  }
  const SparseVector x = parse_vector(vector);
  NormOptions opt;
  opt.program_budget = cfg.budget;
  const NormCertificate cert = norm_M(x, s.space, s.blocks, opt);
  const std::string text = report::format_norm_certificate(cert, x, s.space);
  if (!cfg.out.empty()) write_file(cfg.out, text);
  std::cout << text;
  return cert.exhaustive ? kPass : kBudget;
}

int cmd_dualnorm(const RunConfig& cfg, const std::string& functional, const std::string& ustar,
                 const std::string& check) {
  const Setting s = make_setting(cfg);
  if (!check.empty()) {
    const auto loaded = report::load_dual_certificate(read_file(check), s.space, s.blocks);
    std::cout << "certificate ok: ||f||_* in [" << format_rational(loaded.cert.value.lower) << ", "
              << format_rational(loaded.cert.value.upper) << "]\n";
    return kPass;
  }
  if (functional.empty() == ustar.empty()) throw InvalidArgument("give exactly one of --functional and --ustar");
  const SparseVector f = functional.empty() ? u_star_combination(parse_vector(ustar), s.blocks) : parse_vector(functional);
  DualNormOptions opt;
  opt.precision = s.precision;
  opt.norm.program_budget = cfg.budget;
  const DualNormCertificate cert = dual_norm_M(f, s.space, s.blocks, opt);
  const std::string text = report::format_dual_certificate(cert, f, s.space);
  if (!cfg.out.empty()) write_file(cfg.out, text);
  std::cout << text;
  return kPass;
}

int cmd_verify(const RunConfig& cfg) {
  static const std::vector<std::string> lemmas = {"L1", "L2", "L3", "L4", "L5", "T3", "C3"};
  if (std::find(lemmas.begin(), lemmas.end(), cfg.lemma) == lemmas.end()) {
    throw InvalidArgument("unknown lemma '" + cfg.lemma + "'");
  }
  const Setting s = make_setting(cfg);
  std::vector<TrialRecord> records(cfg.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t; (t = next++) < cfg.trials;) records[t] = run_guarded(cfg.lemma, t, cfg, s);
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(cfg.trials)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  report::Header header{cfg.lemma, format_space(s.space), std::to_string(cfg.seed), std::to_string(cfg.trials),
                        cfg.violate, utc_timestamp()};
  if (cfg.out.empty()) {
    report::write_jsonl(std::cout, header, records);
  } else {
    std::ofstream out(cfg.out);
    if (!out) throw InvalidArgument("cannot write " + cfg.out);
    report::write_jsonl(out, header, records);
  }
  const auto summary = report::summarize(records);
  if (!cfg.summary.empty()) {
    std::ofstream out(cfg.summary);
    if (!out) throw InvalidArgument("cannot write " + cfg.summary);
    report::write_csv(out, summary);
  }
  report::write_csv(std::cerr, summary);
  return report::exit_code(records, cfg.violate);
}

int cmd_report(const std::string& input, const std::string& csv) {
  std::ifstream in(input);
  if (!in) throw InvalidArgument("cannot read " + input);
  report::Header header;
  const auto records = report::read_jsonl(in, &header);
  const auto summary = report::summarize(records);
  if (csv.empty()) {
    report::write_csv(std::cout, summary);
  } else {
    std::ofstream out(csv);
    report::write_csv(out, summary);
  }
  return report::exit_code(records, header.violate);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, dual norms and lemma checks for the block-measure construction over Z"};
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1);

  RunConfig cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--space", cfg.space, "c0, lp:<p>, tsirelson or c0sum-lp:<p>:blocks=<sizes>");
    sub->add_option("--params", cfg.params, "ledger file written by 'params'");
    sub->add_option("--depth", cfg.depth, "number of materialized blocks")->check(CLI::Range(1, 64));
    sub->add_option("--lambda", cfg.lambda, "override the default lambda (num/den)");
    sub->add_option("--sizing", cfg.sizing, "block sizing factor c in |F_n| = c 2^(n+1)");
    sub->add_option("--k-max", cfg.k_max, "largest k tried for k0");
    sub->add_option("--precision", cfg.precision, "enclosure width for irrational quantities");
    sub->add_option("--budget", cfg.budget, "weight-program budget per norm evaluation");
    sub->add_option("-o,--out", cfg.out, "output file");
  };

  auto* params = app.add_subcommand("params", "build and certify the parameter ledger");
  common(params);

  std::string vector, functional, ustar, check, input, csv;
  auto* norm = app.add_subcommand("norm", "||x||_M with a witness in M");
  common(norm);
  norm->add_option("--vector", vector, "sparse vector j:num/den,...");
  norm->add_option("--check", check, "re-validate a norm certificate file");

  auto* dual = app.add_subcommand("dualnorm", "||f||_* enclosure with a witness vector");
  common(dual);
  dual->add_option("--functional", functional, "sparse functional j:num/den,...");
  dual->add_option("--ustar", ustar, "coefficients a for sum a_n u_n*");
  dual->add_option("--check", check, "re-validate a dual certificate file");

  auto* verify = app.add_subcommand("verify", "run a verification campaign");
  common(verify);
  verify->add_option("--lemma", cfg.lemma, "L1 L2 L3 L4 L5 T3 C3")->required();
  verify->add_option("--trials", cfg.trials, "number of trials");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--summary", cfg.summary, "CSV summary file");
  verify->add_option("--threads", cfg.threads, "worker threads");
  verify->add_flag("--violate-hypothesis", cfg.violate, "negative control: generate hypothesis-violating instances");

  auto* rep = app.add_subcommand("report", "summarize a JSONL report");
  rep->add_option("input", input, "report file")->required();
  rep->add_option("--csv", csv, "write the summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*params) return cmd_params(cfg);
    if (*norm) {
      if (vector.empty() == check.empty()) throw InvalidArgument("give exactly one of --vector and --check");
      return cmd_norm(cfg, vector, check);
    }
    if (*dual) return cmd_dualnorm(cfg, functional, ustar, check);
    if (*verify) return cmd_verify(cfg);
    if (*rep) return cmd_report(input, csv);
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    return kBudget;
  } catch (const IterationCap& e) {
    std::cerr << e.what() << '\n';
    return kBudget;
  } catch (const Indeterminate& e) {
    std::cerr << e.what() << '\n';
    return kBudget;
  } catch (const NoUpperEstimateWitness& e) {
    std::cerr << "no upper estimate witness: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kVerdictFailure;
}
