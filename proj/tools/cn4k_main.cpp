// cn4k: command line front end for the decision kit.
//
// Exit codes are a contract:
//   0  positive answer (proved / checks / true / valid / found / all suites pass)
//   1  negative answer (not provable / rejected / false / falsified / none found)
//   2  search budget exceeded
//   3  malformed or invalid input (formulas, certificates, models, derivations)
//   64 usage errors
//   74 file I/O errors

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <cn4k/formula.hpp>
#include <cn4k/hilbert.hpp>
#include <cn4k/logic.hpp>
#include <cn4k/model_io.hpp>
#include <cn4k/oracle.hpp>
#include <cn4k/proof_io.hpp>
#include <cn4k/prover.hpp>
#include <cn4k/semantics.hpp>
#include <cn4k/sequent.hpp>

using nlohmann::json;
using namespace cn4k;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitBudget = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

std::chrono::steady_clock::time_point g_start;

double elapsed_ms() {
  auto d = std::chrono::steady_clock::now() - g_start;
  return std::chrono::duration<double, std::milli>(d).count();
}

// "-" reads stdin
std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int emit(const json& doc, bool json_mode, int code) {
  if (json_mode) {
    json out = doc;
    out["elapsed_ms"] = elapsed_ms();
    std::cout << out.dump(2) << "\n";
  }
  return code;
}

LogicId required_logic(const std::string& name) {
  auto l = parse_logic(name);
  if (!l) throw CLI::ValidationError("--logic", "unknown logic '" + name + "'");
  return *l;
}

uint64_t budget_from_env() {
  const char* env = std::getenv("CN4K_BUDGET");
  if (!env || !*env) return 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    std::cerr << "cn4k: CN4K_BUDGET must be a non-negative integer, got '" << env << "'\n";
    std::exit(kExitUsage);
  }
  return v;
}

Sequent parse_goal(const std::string& text) {
  if (text.find("=>") != std::string::npos) return parse_sequent(text);
  return Sequent{{}, parse(text)};
}

ParsedModel load_model(const std::string& path, bool close_leq) {
  ParsedModel pm = parse_model(read_input(path));
  if (close_leq) pm.model.frame.leq = reflexive_transitive_closure(pm.model.frame.leq);
  FrameClass cls = pm.declared_class.value_or(FrameClass::General);
  Report fr = check_frame(pm.model.frame, cls);
  Report mr = check_model(pm.model);
  if (!fr.ok || !mr.ok) {
    std::string msg = "invalid model:";
    for (const auto& v : fr.violations) msg += "\n  " + v;
    for (const auto& v : mr.violations) msg += "\n  " + v;
    throw ModelFormatError(msg);
  }
  return pm;
}

struct ProveArgs {
  std::string logic, goal, emit_proof;
  uint64_t budget = 0;
  bool budget_set = false, stats = false, json_mode = false;
};

int run_prove(const ProveArgs& a) {
  LogicId logic = required_logic(a.logic);
  Sequent s = parse_goal(a.goal);
  ProveOptions opt;
  opt.budget = a.budget_set ? a.budget : budget_from_env();
  DecideResult r = decide(s, logic, opt);

  json doc{{"command", "prove"},
           {"logic", logic_name(logic)},
           {"sequent", render_sequent(s)},
           {"stats",
            {{"nodes", r.stats.nodes},
             {"cache_hits", r.stats.cache_hits},
             {"max_depth", r.stats.max_depth}}}};
  int code = kExitNo;
  switch (r.verdict) {
    case Verdict::Proved: {
      doc["verdict"] = "proved";
      doc["proof"] = certificate_to_json(*r.proof, logic);
      code = kExitYes;
      if (!a.json_mode)
        std::cout << "proved (height " << proof_height(*r.proof) << ", size "
                  << proof_size(*r.proof) << ")\n";
      break;
    }
    case Verdict::NotProvable:
      doc["verdict"] = "not_provable";
      code = kExitNo;
      if (!a.json_mode) std::cout << "not provable\n";
      break;
    case Verdict::BudgetExceeded:
      doc["verdict"] = "budget_exceeded";
      code = kExitBudget;
      if (!a.json_mode) std::cout << "budget exceeded after " << r.stats.nodes << " goals\n";
      break;
  }
  if (a.stats && !a.json_mode)
    std::cout << "nodes=" << r.stats.nodes << " cache_hits=" << r.stats.cache_hits
              << " max_depth=" << r.stats.max_depth << " elapsed_ms=" << elapsed_ms() << "\n";
  if (!a.emit_proof.empty() && r.proof) {
    std::ofstream out(a.emit_proof);
    if (!out) throw std::ios_base::failure("cannot write '" + a.emit_proof + "'");
    out << render_certificate(*r.proof, logic);
  }
  return emit(doc, a.json_mode, code);
}

struct CheckProofArgs {
  std::string logic, file;
  bool allow_cut = false, json_mode = false;
};

int run_check_proof(const CheckProofArgs& a) {
  ParsedCertificate cert = parse_certificate(read_input(a.file));
  std::optional<LogicId> logic = cert.logic;
  if (!a.logic.empty()) logic = required_logic(a.logic);
  if (!logic) {
    std::cerr << "cn4k: certificate names no logic; pass --logic\n";
    return kExitUsage;
  }
  CheckReport rep = check_proof(cert.root, *logic, a.allow_cut);
  json doc{{"command", "check-proof"},
           {"logic", logic_name(*logic)},
           {"ok", rep.ok},
           {"height", proof_height(cert.root)},
           {"size", proof_size(cert.root)}};
  if (!rep.ok) {
    doc["path"] = rep.path;
    doc["reason"] = rep.reason;
  }
  if (!a.json_mode) {
    if (rep.ok)
      std::cout << "ok (height " << proof_height(cert.root) << ", size " << proof_size(cert.root)
                << ")\n";
    else
      std::cout << "rejected at " << rep.path << ": " << rep.reason << "\n";
  }
  return emit(doc, a.json_mode, rep.ok ? kExitYes : kExitNo);
}

struct CheckHilbertArgs {
  std::string file;
  bool json_mode = false;
};

int run_check_hilbert(const CheckHilbertArgs& a) {
  HilbertDerivation d = parse_derivation(read_input(a.file));
  HilbertVerdict v = check_derivation(d);
  json doc{{"command", "check-hilbert"},
           {"logic", logic_name(d.logic)},
           {"ok", v.ok},
           {"steps", d.steps.size()}};
  if (!v.ok) {
    doc["line"] = v.line;
    doc["reason"] = v.reason;
    doc["structural"] = v.structural;
  }
  if (!a.json_mode) {
    if (v.ok)
      std::cout << "ok (" << d.steps.size() << " steps)\n";
    else
      std::cout << "rejected at line " << v.line << ": " << v.reason << "\n";
  }
  return emit(doc, a.json_mode, v.ok ? kExitYes : kExitNo);
}

struct ModelEvalArgs {
  std::string model, world, polarity = "pos", formula;
  bool close_leq = false, json_mode = false;
};

int run_model_eval(const ModelEvalArgs& a) {
  ParsedModel pm = load_model(a.model, a.close_leq);
  Fml f = parse(a.formula);
  int w = pm.model.frame.world_index(a.world);
  if (w < 0) throw ModelFormatError("unknown world '" + a.world + "'");
  for (const auto& v : variables(f))
    if (!pm.model.declares(v))
      throw ModelFormatError("variable '" + v + "' not declared by the model");
  Polarity pol = a.polarity == "pos" ? Polarity::Pos : Polarity::Neg;
  bool res = supports(pm.model, w, pol, f);
  json doc{{"command", "model-eval"},
           {"world", a.world},
           {"polarity", a.polarity},
           {"formula", render(f)},
           {"supported", res}};
  if (!a.json_mode) std::cout << (res ? "true" : "false") << "\n";
  return emit(doc, a.json_mode, res ? kExitYes : kExitNo);
}

struct FrameValidateArgs {
  std::string model, formula;
  bool close_leq = false, json_mode = false;
};

int run_frame_validate(const FrameValidateArgs& a) {
  ParsedModel pm = load_model(a.model, a.close_leq);
  Fml f = parse(a.formula);
  FrameValidity fv = frame_validates(pm.model.frame, f);
  json doc{{"command", "frame-validate"}, {"formula", render(f)}, {"valid", fv.valid}};
  if (fv.valid) {
    if (!a.json_mode) std::cout << "valid on this frame\n";
    return emit(doc, a.json_mode, kExitYes);
  }
  doc["world"] = fv.countermodel->frame.world_names[fv.world];
  doc["model"] = model_to_json(*fv.countermodel);
  if (!a.json_mode)
    std::cout << "falsified at world " << fv.countermodel->frame.world_names[fv.world]
              << " under valuation:\n"
              << render_model(*fv.countermodel);
  return emit(doc, a.json_mode, kExitNo);
}

struct CountermodelArgs {
  std::string logic, formula;
  int max_worlds = 3;
  uint64_t max_candidates = 0;
  bool cap_set = false, json_mode = false;
};

int run_countermodel(const CountermodelArgs& a) {
  LogicId logic = required_logic(a.logic);
  Fml f = parse(a.formula);
  SearchBounds b;
  b.max_worlds = a.max_worlds;
  if (a.cap_set) b.max_candidates = a.max_candidates;
  auto cm = find_countermodel(f, frame_class_of(logic), b);
  json doc{{"command", "countermodel"},
           {"logic", logic_name(logic)},
           {"formula", render(f)},
           {"max_worlds", a.max_worlds},
           {"found", static_cast<bool>(cm)}};
  if (!cm) {
    if (!a.json_mode) std::cout << "no countermodel within " << a.max_worlds << " worlds\n";
    return emit(doc, a.json_mode, kExitNo);
  }
  doc["world"] = cm->model.frame.world_names[cm->world];
  doc["model"] = model_to_json(cm->model);
  if (!a.json_mode)
    std::cout << "countermodel found, fails at world " << cm->model.frame.world_names[cm->world]
              << ":\n"
              << render_model(cm->model);
  return emit(doc, a.json_mode, kExitYes);
}

struct ClosureArgs {
  std::string formula;
  bool json_mode = false;
};

int run_closure(const ClosureArgs& a) {
  Fml f = parse(a.formula);
  FmlSet cl = closure(f);
  std::vector<Fml> members(cl.begin(), cl.end());
  std::sort(members.begin(), members.end(), [](Fml x, Fml y) {
    if (complexity(x) != complexity(y)) return complexity(x) < complexity(y);
    return render(x) < render(y);
  });
  json arr = json::array();
  for (Fml g : members) arr.push_back(render(g));
  json doc{{"command", "closure"},
           {"formula", render(f)},
           {"count", members.size()},
           {"members", arr}};
  if (!a.json_mode)
    for (Fml g : members) std::cout << render(g) << "\n";
  return emit(doc, a.json_mode, kExitYes);
}

struct SelftestArgs {
  uint64_t seed = 0;
  bool json_mode = false;
};

struct Suite {
  std::string name;
  bool ok = true;
  int checks = 0;
  std::string detail;
};

int run_selftest(const SelftestArgs& a) {
  std::vector<Suite> suites;

  {
    Suite s{"evaluator-agreement"};
    std::vector<Fml> corpus = corpus_generate(a.seed ^ 0x5eedULL, {7, 2, 30});
    std::mt19937_64 rng(a.seed);
    std::vector<std::string> vars = {"p", "q"};
    for (int n = 1; n <= 3 && s.ok; ++n) {
      for (int trial = 0; trial < 25 && s.ok; ++trial) {
        Model m;
        const auto& pres = detail::canonical_preorders(n);
        for (int w = 0; w < n; ++w) m.frame.world_names.push_back("w" + std::to_string(w));
        m.frame.leq = pres[rng() % pres.size()];
        auto rnd_rel = [&] {
          Rel r(n);
          for (int w = 0; w < n; ++w) r.row[w] = static_cast<uint32_t>(rng() % (1u << n));
          return r;
        };
        m.frame.r_box_pos = rnd_rel();
        m.frame.r_box_neg = rnd_rel();
        m.frame.r_dia_pos = rnd_rel();
        m.frame.r_dia_neg = rnd_rel();
        auto ups = upward_closed_sets(m.frame.leq);
        for (const auto& v : vars) {
          m.v_pos[v] = ups[rng() % ups.size()];
          m.v_neg[v] = ups[rng() % ups.size()];
        }
        for (Fml f : corpus)
          for (int w = 0; w < n; ++w)
            for (Polarity pol : {Polarity::Pos, Polarity::Neg}) {
              ++s.checks;
              if (supports(m, w, pol, f) != reference_supports(m, w, pol, f)) {
                s.ok = false;
                s.detail = "evaluators disagree on " + render(f);
                break;
              }
            }
      }
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s{"proved-never-refuted"};
    std::vector<Fml> corpus = corpus_generate(a.seed + 1, {4, 2, 60});
    for (LogicId l : all_logics) {
      for (Fml f : corpus) {
        if (decide_formula(f, l).verdict != Verdict::Proved) continue;
        ++s.checks;
        SearchBounds b;
        b.max_worlds = 2;
        if (auto cm = find_countermodel(f, frame_class_of(l), b)) {
          s.ok = false;
          s.detail = "proved formula refuted: " + render(f) + " under " + logic_name(l);
          break;
        }
      }
      if (!s.ok) break;
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s{"countermodel-implies-unprovable"};
    std::vector<Fml> corpus = corpus_generate(a.seed + 2, {4, 2, 60});
    for (LogicId l : all_logics) {
      for (Fml f : corpus) {
        SearchBounds b;
        b.max_worlds = 2;
        b.max_candidates = 200'000;
        if (!find_countermodel(f, frame_class_of(l), b)) continue;
        ++s.checks;
        if (decide_formula(f, l).verdict != Verdict::NotProvable) {
          s.ok = false;
          s.detail = "refuted formula not rejected: " + render(f) + " under " + logic_name(l);
          break;
        }
      }
      if (!s.ok) break;
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s{"proofs-check"};
    std::vector<Fml> corpus = corpus_generate(a.seed + 3, {4, 2, 50});
    for (LogicId l : all_logics) {
      for (Fml f : corpus) {
        DecideResult r = decide_formula(f, l);
        if (r.verdict != Verdict::Proved) continue;
        ++s.checks;
        CheckReport rep = check_proof(*r.proof, l);
        if (!rep.ok) {
          s.ok = false;
          s.detail = "emitted proof rejected at " + rep.path + ": " + rep.reason;
          break;
        }
      }
      if (!s.ok) break;
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s{"cache-agreement"};
    std::vector<Fml> corpus = corpus_generate(a.seed + 4, {4, 2, 40});
    ProveOptions uncached;
    uncached.use_cache = false;
    for (LogicId l : all_logics) {
      for (Fml f : corpus) {
        ++s.checks;
        if (decide_formula(f, l).verdict != decide_formula(f, l, uncached).verdict) {
          s.ok = false;
          s.detail = "cache changes verdict on " + render(f) + " under " + logic_name(l);
          break;
        }
      }
      if (!s.ok) break;
    }
    suites.push_back(std::move(s));
  }

  bool all_ok = true;
  json jsuites = json::array();
  for (const Suite& s : suites) {
    all_ok = all_ok && s.ok;
    jsuites.push_back({{"name", s.name}, {"ok", s.ok}, {"checks", s.checks}, {"detail", s.detail}});
    if (!a.json_mode) {
      if (s.ok)
        std::cout << "suite " << s.name << ": ok (" << s.checks << " checks)\n";
      else
        std::cout << "suite " << s.name << ": FAILED: " << s.detail << "\n";
    }
  }
  json doc{{"command", "selftest"}, {"seed", a.seed}, {"ok", all_ok}, {"suites", jsuites}};
  return emit(doc, a.json_mode, all_ok ? kExitYes : kExitNo);
}

} // namespace

int main(int argc, char** argv) {
  g_start = std::chrono::steady_clock::now();
  CLI::App app{"decision kit for constructive modal logics over strong negation"};
  app.require_subcommand(1);
  const std::string logic_help = "logic: cn4k, pm, yv, join, one";
  auto logic_names = CLI::IsMember({"cn4k", "pm", "yv", "join", "one"});

  ProveArgs pa;
  auto* prove = app.add_subcommand("prove", "decide a sequent by backward proof search");
  prove->add_option("--logic", pa.logic, logic_help)->required()->check(logic_names);
  prove->add_option("--budget", pa.budget, "max visited goals, 0 = unlimited")
      ->capture_default_str();
  prove->add_flag("--stats", pa.stats, "print search statistics");
  prove->add_option("--emit-proof", pa.emit_proof, "write the proof certificate to FILE");
  prove->add_flag("--json", pa.json_mode, "structured output");
  prove->add_option("sequent", pa.goal, "'f1, f2 => g' or a bare formula")->required();

  CheckProofArgs cpa;
  auto* checkp = app.add_subcommand("check-proof", "verify a sequent proof certificate");
  checkp->add_option("--logic", cpa.logic, logic_help + " (overrides the certificate)")
      ->check(logic_names);
  checkp->add_flag("--allow-cut", cpa.allow_cut, "accept cut nodes");
  checkp->add_flag("--json", cpa.json_mode, "structured output");
  checkp->add_option("file", cpa.file, "certificate file, '-' for stdin")->required();

  CheckHilbertArgs cha;
  auto* checkh = app.add_subcommand("check-hilbert", "verify an axiomatic derivation file");
  checkh->add_flag("--json", cha.json_mode, "structured output");
  checkh->add_option("file", cha.file, "derivation file, '-' for stdin")->required();

  ModelEvalArgs mea;
  auto* meval = app.add_subcommand("model-eval", "evaluate a formula in a model");
  meval->add_option("--model", mea.model, "model file, '-' for stdin")->required();
  meval->add_option("--world", mea.world, "world name")->required();
  meval->add_option("--polarity", mea.polarity, "pos or neg")
      ->check(CLI::IsMember({"pos", "neg"}))
      ->capture_default_str();
  meval->add_flag("--close", mea.close_leq, "take the reflexive-transitive closure of leq first");
  meval->add_flag("--json", mea.json_mode, "structured output");
  meval->add_option("formula", mea.formula, "formula text")->required();

  FrameValidateArgs fva;
  auto* fval = app.add_subcommand("frame-validate", "test a formula on a frame, all valuations");
  fval->add_option("--model", fva.model, "model file (only its frame is used)")->required();
  fval->add_flag("--close", fva.close_leq, "take the reflexive-transitive closure of leq first");
  fval->add_flag("--json", fva.json_mode, "structured output");
  fval->add_option("formula", fva.formula, "formula text")->required();

  CountermodelArgs cma;
  auto* counter = app.add_subcommand("countermodel", "search small frames for a refuting model");
  counter->add_option("--logic", cma.logic, logic_help)->required()->check(logic_names);
  counter->add_option("--max-worlds", cma.max_worlds, "frame size bound")->capture_default_str();
  counter->add_option("--max-candidates", cma.max_candidates, "cap on enumerated structures");
  counter->add_flag("--json", cma.json_mode, "structured output");
  counter->add_option("formula", cma.formula, "formula text")->required();

  ClosureArgs cla;
  auto* clos = app.add_subcommand("closure", "print the negation-extended subformula closure");
  clos->add_flag("--json", cla.json_mode, "structured output");
  clos->add_option("formula", cla.formula, "formula text")->required();

  SelftestArgs sta;
  auto* self = app.add_subcommand("selftest", "run the differential test suites");
  self->add_option("--seed", sta.seed, "corpus seed")->capture_default_str();
  self->add_flag("--json", sta.json_mode, "structured output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  pa.budget_set = prove->count("--budget") > 0;
  cma.cap_set = counter->count("--max-candidates") > 0;

  try {
    if (*prove) return run_prove(pa);
    if (*checkp) return run_check_proof(cpa);
    if (*checkh) return run_check_hilbert(cha);
    if (*meval) return run_model_eval(mea);
    if (*fval) return run_frame_validate(fva);
    if (*counter) return run_countermodel(cma);
    if (*clos) return run_closure(cla);
    if (*self) return run_selftest(sta);
  } catch (const ParseError& e) {
    std::cerr << "cn4k: parse error at position " << e.pos << ": " << e.what() << "\n";
    return kExitBadInput;
  } catch (const ModelFormatError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const CertificateFormatError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DerivationFormatError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const SequentError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const HilbertError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const EvalError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "cn4k: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "cn4k: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
