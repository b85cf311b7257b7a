// lattice_lab: validate filtrations, classify sequences, reproduce the
// constructed examples, run the verification suite and generate instances.
//
// Exit codes: 0 success / confirmed, 1 a check was VIOLATED (or a filtration
// failed validation), 2 input error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lattice_lab/lattice_lab.hpp"

namespace ll = lattice_lab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInput = 2;

double default_tol() {
  if (const char* env = std::getenv("LATTICE_LAB_TOL")) {
    try {
      return std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable LATTICE_LAB_TOL='" << env << "'\n";
    }
  }
  return ll::kDefaultTol;
}

std::string witness_text(const std::optional<std::size_t>& w) { return w ? std::to_string(*w) : "none"; }

void print_report(const std::string& title, const ll::ClassificationReport& r) {
  std::cout << title << "\n"
            << "  martingale:    " << (r.is_martingale ? "yes" : "no") << "\n"
            << "  E-witness:     " << witness_text(r.e_witness) << "\n"
            << "  X verdict:     " << ll::to_string(r.x_verdict) << " (window from n=" << r.window_start
            << ", eps_x=" << r.eps_x << ")\n"
            << "  ||A||:         " << r.seq_norm << "\n"
            << "  defects d_n:  ";
  for (double d : r.x_defects) std::cout << ' ' << d;
  std::cout << "\n";
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, bool contractive, double tol, bool as_json) {
  const ll::io::InstanceFile inst = ll::io::read_instance(path);
  if (!inst.filtration) throw ll::lattice_error("'" + path + "' has no 'operators'");
  const ll::ValidationReport report = ll::validate(*inst.filtration, contractive, tol);
  if (as_json) {
    json j = ll::io::validation_to_json(report);
    j["dense"] = ll::is_dense(*inst.filtration, tol);
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& c : report.laws) {
      std::cout << (c.passed ? "pass  " : "FAIL  ") << c.law << "  worst=" << c.worst;
      if (c.witness) std::cout << "  at (" << c.witness->first << "," << c.witness->second << ")";
      std::cout << "\n";
    }
    std::cout << "dense (E_N = I): " << (ll::is_dense(*inst.filtration, tol) ? "yes" : "no") << "\n";
  }
  return report.ok() ? kExitOk : kExitViolated;
}

int cmd_classify(const std::string& path, const ll::ClassifyOptions& options) {
  const ll::io::InstanceFile inst = ll::io::read_instance(path);
  if (!inst.filtration || !inst.sequence) throw ll::lattice_error("'" + path + "' needs both 'operators' and 'vectors'");
  const ll::ClassificationReport r = ll::classify(*inst.sequence, *inst.filtration, options);
  std::cout << ll::io::report_to_json(r).dump(2) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DemoOutput {
  json data;
  std::string narrative;
  ll::LatticeClosureReport closure;
};

DemoOutput demo(const std::string& name, std::optional<std::size_t> size, const ll::ClassifyOptions& options) {
  DemoOutput out;
  std::ostringstream text;
  auto both = [&](const ll::MartingaleSeq& A, const ll::Filtration& F) {
    const auto closure = ll::check_lattice_closure(A, F, options);
    out.data["sequence"] = ll::io::report_to_json(closure.sequence);
    out.data["abs"] = ll::io::report_to_json(closure.absolute);
    out.data["abs_in_same_classes"] = closure.closed();
    out.closure = closure;
    return closure;
  };

  if (name == "haar") {
    const std::size_t L = size.value_or(3);
    const ll::Instance inst = ll::gen_haar(L);
    const auto c = both(inst.sequence, inst.filtration);
    text << "Haar martingale x_n = 2^n 1_[0,2^-n] - 1 on " << inst.filtration.space()->dim()
         << " dyadic cells (L1 norm), n = 1.." << L << "\n"
         << "expected: A is a martingale; E_n|x_{n+1}| != |x_n| for every n, so |A| is not an E-martingale\n";
    std::vector<double> norms;
    for (const auto& x : inst.sequence.vectors()) norms.push_back(ll::norm(x));
    out.data["norms"] = norms;
    if (L >= 2) text << "||E_1|x_2| - |x_1|||_1 = " << c.absolute.one_step_defects.front() << "\n";
  } else if (name == "pairing") {
    const std::size_t K = size.value_or(3);
    const ll::Instance inst = ll::gen_pairing_example(K);
    both(inst.sequence, inst.filtration);
    text << "Pairing filtration on c0 truncated to dim " << 2 * K << "; x_n = (-1,1,...,-1,1,0,...) with 2n entries\n"
         << "indexing: level n keeps 2n coordinates, matching x_n; the all-averaging level and x_0 = 0 are dropped\n"
         << "expected: A is a martingale, |A| is not an E-martingale (one-step defect 1 at n = 1)\n";
  } else if (name == "harmonic") {
    const std::size_t N = size.value_or(64);
    const ll::HarmonicTail h = ll::gen_harmonic_tail(N);
    both(h.limit, h.filtration);
    std::vector<double> distances;
    std::vector<json> witnesses;
    for (std::size_t m = 1; m < N; ++m) {
      distances.push_back(ll::seq_distance(h.family[m - 1], h.limit));
      const auto w = ll::classify_E(h.family[m - 1], h.filtration, options.tol);
      witnesses.push_back(w ? json(*w) : json(nullptr));
    }
    out.data["family_distances"] = distances;
    out.data["family_witnesses"] = witnesses;
    text << "Harmonic tails x_n = sum_{i>=n} e_i/i under coordinate truncation, N = " << N << "\n"
         << "expected: each A^m is an E-martingale with ||A^m - A|| = 1/m, yet A is not an E-martingale;"
            " A is an X-martingale with d_n = 1/n\n";
  } else if (name == "null") {
    const std::size_t N = size.value_or(64);
    const ll::Filtration T = ll::build_truncation(N);
    both(ll::gen_null(ll::LatticeVector::unit(T.space(), 1), N), T);
    text << "Null sequence x_n = e_1/n under coordinate truncation, N = " << N << "\n"
         << "expected: an X-martingale that is not an E-martingale\n";
  } else if (name == "scale-head") {
    const std::size_t L = size.value_or(3);
    const ll::Instance inst = ll::gen_haar(L);
    both(ll::scale_head(inst.sequence, 2.0), inst.filtration);
    text << "Haar martingale with y_1 = 2 x_1\n"
         << "expected: an E-martingale with witness 2 that is not a martingale\n";
  } else {
    throw ll::lattice_error("unknown demo '" + name + "' (haar, pairing, harmonic, null, scale-head)");
  }
  out.data["demo"] = name;
  out.narrative = text.str();
  return out;
}

int cmd_demo(const std::string& name, std::optional<std::size_t> size, const ll::ClassifyOptions& options,
             bool as_json) {
  const DemoOutput d = demo(name, size, options);
  if (as_json) {
    json j = d.data;
    j["narrative"] = d.narrative;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << d.narrative << "\n";
  print_report("A:", d.closure.sequence);
  print_report("|A|:", d.closure.absolute);
  return kExitOk;
}

int cmd_verify(const std::string& which, std::uint64_t seed, std::size_t trials, bool as_json) {
  std::vector<ll::TheoremResult> results;
  if (which == "all") {
    for (const auto& id : ll::theorem_ids()) {
      auto part = ll::run_theorem(id, seed, trials);
      results.insert(results.end(), part.begin(), part.end());
    }
  } else {
    results = ll::run_theorem(which, seed, trials);
  }
  bool violated = false;
  json all = json::array();
  for (const auto& r : results) {
    violated = violated || r.status == ll::Status::Violated;
    all.push_back(ll::to_json(r));
    if (!as_json) std::cout << ll::to_string(r.status) << "  " << r.id << "  [" << r.descriptor << "]\n";
  }
  if (as_json) std::cout << all.dump(2) << "\n";
  else std::cout << "(finite-horizon evidence, not proofs)\n";
  return violated ? kExitViolated : kExitOk;
}

struct GenParams {
  std::optional<std::size_t> size;
  std::optional<std::size_t> dim;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> member;
  double scale = 2.0;
  std::string norm = "l1";
};

ll::io::InstanceFile generate(const std::string& builder, const GenParams& p, std::uint64_t seed) {
  ll::io::InstanceFile inst;
  auto with_filtration = [&](ll::Filtration F) {
    inst.space = F.space();
    inst.filtration = std::move(F);
  };
  auto with_instance = [&](ll::Instance i) {
    inst.space = i.filtration.space();
    inst.filtration = std::move(i.filtration);
    inst.sequence = std::move(i.sequence);
  };

  if (builder == "truncation") {
    with_filtration(ll::build_truncation(p.size.value_or(8)));
  } else if (builder == "pairing") {
    with_filtration(ll::build_pairing(p.size.value_or(3)));
  } else if (builder == "dyadic") {
    with_filtration(ll::build_dyadic(p.size.value_or(3)));
  } else if (builder == "random-nested") {
    const std::size_t dim = p.dim.value_or(8);
    const ll::NormKind kind = p.norm == "sup" ? ll::NormKind::Sup : ll::NormKind::WeightedL1;
    with_filtration(ll::build_random_nested(dim, p.depth.value_or(dim), seed, kind));
  } else if (builder == "haar") {
    with_instance(ll::gen_haar(p.size.value_or(3)));
  } else if (builder == "pairing-example") {
    with_instance(ll::gen_pairing_example(p.size.value_or(3)));
  } else if (builder == "scale-head") {
    ll::Instance i = ll::gen_haar(p.size.value_or(3));
    i.sequence = ll::scale_head(i.sequence, p.scale);
    with_instance(std::move(i));
  } else if (builder == "harmonic") {
    ll::HarmonicTail h = ll::gen_harmonic_tail(p.size.value_or(64));
    ll::MartingaleSeq seq = h.limit;
    if (p.member) {
      if (*p.member == 0 || *p.member > h.family.size()) throw ll::lattice_error("--member must be in [1, N-1]");
      seq = h.family[*p.member - 1];
    }
    with_instance({std::move(h.filtration), std::move(seq)});
  } else if (builder == "null") {
    const std::size_t N = p.size.value_or(64);
    ll::Filtration T = ll::build_truncation(N);
    ll::MartingaleSeq A = ll::gen_null(ll::LatticeVector::unit(T.space(), 1), N);
    with_instance({std::move(T), std::move(A)});
  } else if (builder == "from-terminal") {
    const std::size_t dim = p.dim.value_or(8);
    ll::Filtration F = ll::build_random_nested(dim, p.depth.value_or(dim), seed);
    ll::Rng rng = ll::trial_stream(seed, 1);
    ll::MartingaleSeq A = ll::from_terminal(F, ll::random_vector(F.space(), rng));
    with_instance({std::move(F), std::move(A)});
  } else {
    throw ll::lattice_error("unknown builder '" + builder + "'");
  }
  return inst;
}

int cmd_gen(const std::string& builder, const GenParams& p, std::uint64_t seed, const std::string& out) {
  const json j = ll::io::instance_to_json(generate(builder, p, seed));
  if (out.empty() || out == "-") std::cout << j.dump(2) << "\n";
  else ll::io::write_json(out, j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vector-lattice martingale lab: filtrations, martingale-like sequences, and checks"};
  app.require_subcommand(1);

  const double env_tol = default_tol();
  double tol = env_tol;
  bool as_json = false;
  std::uint64_t seed = 1;
  std::size_t trials = 100;

  std::string path;
  bool contractive = false;
  auto* validate = app.add_subcommand("validate", "Check the filtration laws of an instance file");
  validate->add_option("path", path, "Instance or filtration JSON")->required();
  validate->add_flag("--contractive", contractive, "Also require operator norm <= 1");
  validate->add_option("--tol", tol, "Entrywise tolerance");
  validate->add_flag("--json", as_json, "JSON output");

  double eps_x = -1.0;
  double window = 0.25;
  auto* classify = app.add_subcommand("classify", "Classify the sequence of an instance file (JSON report)");
  classify->add_option("path", path, "Instance JSON with operators and vectors")->required();
  classify->add_option("--tol", tol, "Tolerance for the algebraic classes");
  classify->add_option("--eps-x", eps_x, "X-martingale threshold (default 0.05 max(1, ||A||))");
  classify->add_option("--window", window, "Tail window fraction")->check(CLI::Range(0.0, 1.0));
  classify->add_flag("--json", as_json, "Accepted for symmetry; output is always JSON");

  std::string demo_name;
  std::optional<std::size_t> size;
  auto* demo = app.add_subcommand("demo", "Reproduce a constructed example");
  demo->add_option("name", demo_name, "haar | pairing | harmonic | null | scale-head")->required();
  demo->add_option("--size", size, "L, K or N depending on the demo");
  demo->add_flag("--json", as_json, "JSON output");

  std::string theorem;
  auto* verify = app.add_subcommand("verify", "Run verification checks");
  verify->add_option("theorem", theorem, "Check id or 'all'")->required();
  verify->add_option("--seed", seed, "64-bit seed");
  verify->add_option("--trials", trials, "Randomized trials per check");
  verify->add_flag("--json", as_json, "JSON output");

  std::string builder;
  std::string out;
  GenParams params;
  auto* gen = app.add_subcommand("gen", "Write an instance file");
  gen->add_option("builder", builder,
                  "truncation | pairing | dyadic | random-nested | haar | pairing-example | harmonic | null | "
                  "scale-head | from-terminal")
      ->required();
  gen->add_option("--size", params.size, "N, K or L");
  gen->add_option("--dim", params.dim, "Dimension for random builders");
  gen->add_option("--depth", params.depth, "Number of nested partitions for random builders");
  gen->add_option("--member", params.member, "harmonic: write A^m instead of the limit");
  gen->add_option("--scale", params.scale, "scale-head: factor applied to x_1");
  gen->add_option("--norm", params.norm, "random-nested: sup | l1")->check(CLI::IsMember({"sup", "l1"}));
  gen->add_option("--seed", seed, "64-bit seed");
  gen->add_option("--out", out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  ll::ClassifyOptions options;
  options.tol = tol;
  options.window_fraction = window;
  if (eps_x >= 0.0) options.eps_x = eps_x;

  try {
    if (*validate) return cmd_validate(path, contractive, tol, as_json);
    if (*classify) return cmd_classify(path, options);
    if (*demo) return cmd_demo(demo_name, size, options, as_json);
    if (*verify) return cmd_verify(theorem, seed, trials, as_json);
    if (*gen) return cmd_gen(builder, params, seed, out);
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitInput;
  } catch (const ll::lattice_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
