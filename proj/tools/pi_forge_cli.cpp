// pi-forge: build PI models, sample data, run the structure learners and
// reproduce the analysis checkpoints. JSON goes to stdout (or --out), a short
// human-readable summary to stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pi_forge/dataset.hpp"
#include "pi_forge/error.hpp"
#include "pi_forge/graph_io.hpp"
#include "pi_forge/k2_analysis.hpp"
#include "pi_forge/learners.hpp"
#include "pi_forge/model_io.hpp"
#include "pi_forge/pi_models.hpp"
#include "pi_forge/repro.hpp"

namespace {

using namespace pi_forge;

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  return std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

// "fixture:NAME", "full-pi:eta=E,q=Q" or a model JSON path.
JointTable load_model(const std::string& source) {
  constexpr std::string_view kFixture = "fixture:";
  constexpr std::string_view kGenerated = "full-pi:";
  if (source.starts_with(kFixture)) return fixture(source.substr(kFixture.size()));
  if (source.starts_with(kGenerated)) {
    PiSpec spec;
    bool have_eta = false, have_q = false;
    std::string rest = source.substr(kGenerated.size());
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto end = rest.find(',', start);
      const std::string item = rest.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (item.starts_with("eta=")) {
        spec.eta = std::stoi(item.substr(4));
        have_eta = true;
      } else if (item.starts_with("q=")) {
        spec.q = std::stod(item.substr(2));
        have_q = true;
      } else {
        throw Error(ErrorCode::InvalidSpec, "unrecognized generator parameter '" + item + "'");
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (!have_eta || !have_q) throw Error(ErrorCode::InvalidSpec, "generator spec needs eta= and q=");
    return construct_full_pi(spec);
  }
  return table_from_json(Json::parse(read_file(source)));
}

Dataset load_dataset(const std::string& path) {
  const std::string text = read_file(path);
  if (path.ends_with(".json")) return dataset_from_json(Json::parse(text));
  return dataset_from_csv(text);
}

std::vector<std::size_t> parse_ordering(const std::string& text, const std::vector<VariableSpec>& vars) {
  std::vector<std::size_t> ordering;
  if (text.empty()) {
    for (std::size_t i = 0; i < vars.size(); ++i) ordering.push_back(i);
    return ordering;
  }
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(',', start);
    const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    std::optional<std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i].name == item) index = i;
    }
    if (!index) {
      try {
        index = static_cast<std::size_t>(std::stoul(item));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "unknown variable '" + item + "' in ordering");
      }
    }
    ordering.push_back(*index);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  validate_ordering(ordering, vars.size());
  return ordering;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

Json classification_json(const PiClassification& c, const std::vector<VariableSpec>& vars) {
  Json pairs = Json::array();
  for (const auto& [a, b] : c.independent_pairs) pairs.push_back({vars[a].name, vars[b].name});
  return {{"verdict", to_string(c.verdict)},
          {"s1_holds", c.s1_holds},
          {"s2_holds", c.s2_holds},
          {"independent_pairs", std::move(pairs)}};
}

struct GenerateArgs {
  int eta = 0;
  double q = 0.0;
  std::string out;
  bool embed_metadata = false;
};

int run_generate(const GenerateArgs& a) {
  const PiSpec spec{a.eta, a.q};
  const auto table = construct_full_pi(spec);
  const Json metadata = {{"generator", "full-pi"}, {"eta", a.eta}, {"q", a.q}};
  if (a.embed_metadata) {
    emit(a.out, serialize_table(table, metadata));
  } else {
    emit(a.out, serialize_table(table));
    if (!a.out.empty() && a.out != "-") {
      Json sidecar = metadata;
      sidecar["created_unix"] = timestamp();
      write_file(a.out + ".meta.json", sidecar.dump(2) + "\n");
    }
  }
  std::cerr << "generated full PI model over " << a.eta << " binary variables (q = " << a.q << ")\n";
  return 0;
}

struct SampleArgs {
  std::string model;
  std::uint64_t m = 1000;
  std::uint64_t seed = 0;
  bool exact = false;
  std::string format;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  const auto table = load_model(a.model);
  const auto data = a.exact ? exact_dataset(table, a.m) : sample(table, a.m, a.seed);
  std::string format = a.format;
  if (format.empty()) format = a.out.ends_with(".json") ? "json" : "csv";
  if (format == "json") {
    emit(a.out, dataset_to_json(data).dump(2) + "\n");
  } else if (format == "csv") {
    emit(a.out, dataset_to_csv(data));
  } else {
    throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  }
  std::cerr << (a.exact ? "exact" : "sampled") << " dataset with m = " << data.m() << "\n";
  return 0;
}

struct LearnArgs {
  std::string algo;
  std::string model;
  std::string data;
  std::size_t k = 1;
  std::string ordering;
  std::size_t max_parents = 3;
  std::uint64_t m = 1000;
  std::uint64_t seed = 0;
  bool sample = false;
  double tol = kDefaultIndependenceTolerance;
  std::optional<std::size_t> max_order;
  std::size_t budget = 1;
  std::optional<std::size_t> max_links;
  std::string out;
  std::string dot;
  std::string trace;
};

int run_learn(const LearnArgs& a) {
  if (a.model.empty() == a.data.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --model and --data");
  }
  std::optional<JointTable> table;
  std::optional<Dataset> data;
  if (!a.data.empty()) {
    data = load_dataset(a.data);
  } else {
    table = load_model(a.model);
  }
  const auto& vars = data ? data->vars() : table->vars();
  const auto dataset = [&]() -> Dataset {
    if (data) return *data;
    return a.sample ? sample(*table, a.m, a.seed) : exact_dataset(*table, a.m);
  };
  const auto source = [&]() -> JointTable { return data ? empirical(*data) : *table; };

  Json doc;
  doc["algo"] = a.algo;
  if (a.algo == "kutato" || a.algo == "k2") {
    const auto ordering = parse_ordering(a.ordering, vars);
    const auto result = a.algo == "kutato" ? kutato_learn(source(), ordering, a.k)
                                           : k2_learn(dataset(), ordering, a.max_parents, a.k);
    doc["graph"] = dag_to_json(result.dag, vars);
    doc["score"] = score_to_json(result.trace.final_score);
    doc["steps"] = result.trace.steps.size();
    if (!a.dot.empty()) write_file(a.dot, dag_to_dot(result.dag, vars));
    if (!a.trace.empty()) write_file(a.trace, trace_to_jsonl(result.trace, vars));
    std::cerr << a.algo << " (k = " << a.k << "): " << result.dag.num_arcs() << " arcs, "
              << to_string(result.trace.final_score.kind) << " " << result.trace.final_score.value << "\n";
  } else if (a.algo == "pc") {
    const auto result = pc_skeleton(source(), a.tol, a.max_order);
    doc["graph"] = ugraph_to_json(result.skeleton, vars);
    doc["passes"] = result.passes_run;
    if (!a.dot.empty()) write_file(a.dot, ugraph_to_dot(result.skeleton, vars));
    if (!a.trace.empty()) write_file(a.trace, pc_log_to_jsonl(result, vars));
    std::cerr << "pc: " << result.skeleton.links().size() << " links after " << result.passes_run
              << " passes, " << result.removals.size() << " removed\n";
  } else if (a.algo == "lam-bacchus") {
    LamBacchusOptions options;
    options.budget_per_class = a.budget;
    options.max_links = a.max_links;
    options.sample_size = static_cast<double>(a.m);
    const auto result = data ? lam_bacchus_learn(*data, options) : lam_bacchus_learn(*table, options);
    doc["graph"] = dag_to_json(result.dag, vars);
    doc["score"] = score_to_json(result.trace.final_score);
    Json list = Json::array();
    for (const auto& lw : result.trace.link_list) {
      list.push_back({{"link", {vars[lw.link.first].name, vars[lw.link.second].name}}, {"mi", lw.mi}});
    }
    doc["link_list"] = std::move(list);
    if (!a.dot.empty()) write_file(a.dot, dag_to_dot(result.dag, vars));
    if (!a.trace.empty()) write_file(a.trace, trace_to_jsonl(result.trace, vars));
    std::cerr << "lam-bacchus: " << result.dag.num_arcs() << " arcs, mdl "
              << result.trace.final_score.value << " bits\n";
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown learner '" + a.algo + "'");
  }
  emit(a.out, doc.dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  std::string model;
  double tol = kDefaultIndependenceTolerance;
  bool embedded = false;
  std::size_t max_subset = 5;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  const auto table = load_model(a.model);
  const auto& vars = table.vars();
  Json doc;
  doc["model"] = a.model;
  const auto verdict = classify(table, a.tol);
  doc["classification"] = classification_json(verdict, vars);
  std::cerr << a.model << ": " << to_string(verdict.verdict) << " (S1 " << (verdict.s1_holds ? "holds" : "fails")
            << ", S2 " << (verdict.s2_holds ? "holds" : "fails") << ")\n";
  if (a.embedded) {
    Json found = Json::array();
    for (const auto& e : find_embedded_pi(table, std::min(a.max_subset, table.num_vars()), a.tol)) {
      Json subset = Json::array();
      std::string label;
      for (auto i : e.subset) {
        subset.push_back(vars[i].name);
        label += (label.empty() ? "" : ",") + vars[i].name;
      }
      found.push_back({{"subset", std::move(subset)}, {"classification", classification_json(e.classification, vars)}});
      std::cerr << "  embedded {" << label << "}: " << to_string(e.classification.verdict) << "\n";
    }
    doc["embedded"] = std::move(found);
  }
  emit(a.out, doc.dump(2) + "\n");
  return 0;
}

struct K2AnalysisArgs {
  std::string range = "4..13";
  std::int64_t cap = kDefaultRatioSearchCap;
  std::string out;
};

int run_k2_analysis(const K2AnalysisArgs& a) {
  const auto dots = a.range.find("..");
  if (dots == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--m-range must look like A..B");
  const std::int64_t lo = std::stoll(a.range.substr(0, dots));
  const std::int64_t hi = std::stoll(a.range.substr(dots + 2));
  std::string csv = "m,min_r,argmin_w,argmin_v,argmin_u,argmin_z,min_r_prime,cells_examined\n";
  for (std::int64_t m = lo; m <= hi; ++m) {
    const auto report = exhaustive_min_r(m, a.cap);
    csv += std::to_string(m) + ",";
    if (report.min_r) {
      const auto& c = *report.argmin;
      csv += format_decimal(*report.min_r) + "," + std::to_string(c.w) + "," + std::to_string(c.v) + "," +
             std::to_string(c.u) + "," + std::to_string(c.z);
    } else {
      csv += ",,,,";
    }
    csv += "," + format_decimal(report.min_r_prime) + "," + std::to_string(report.cells_examined) + "\n";
  }
  emit(a.out, csv);
  return 0;
}

struct ReproArgs {
  std::string out;
};

int run_repro(const ReproArgs& a) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kCriterionCount; ++id) {
    results.push_back(run_criterion(id));
    const auto& r = results.back();
    std::fprintf(stderr, "[%s] %2d  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str());
  }
  const Json report = acceptance_report(results);
  emit(a.out, report.dump(2) + "\n");
  return report["passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pi-forge: pseudo-independent models and single- vs multi-link structure learning"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a full PI model over eta binary variables");
  generate->add_option("--eta", gen.eta, "Number of binary variables (>= 3)")->required();
  generate->add_option("--q", gen.q, "Parameter in [0, 1], not 0.5")->required();
  generate->add_option("--out", gen.out, "Output path (stdout when omitted)");
  generate->add_flag("--embed-metadata", gen.embed_metadata,
                     "Put generator metadata inside the model instead of a .meta.json sidecar");

  SampleArgs smp;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a dataset from a model");
  sample_cmd->add_option("--model", smp.model, "fixture:NAME, full-pi:eta=E,q=Q or a model JSON path")->required();
  sample_cmd->add_option("--m", smp.m, "Number of cases")->capture_default_str();
  sample_cmd->add_option("--seed", smp.seed, "Generator seed")->capture_default_str();
  sample_cmd->add_flag("--exact", smp.exact, "Counts equal m * P exactly instead of random draws");
  sample_cmd->add_option("--format", smp.format, "csv or json (default: from --out extension, else csv)");
  sample_cmd->add_option("--out", smp.out, "Output path (stdout when omitted)");

  LearnArgs lrn;
  auto* learn = app.add_subcommand("learn", "Run a structure learner");
  learn->add_option("--algo", lrn.algo, "kutato, k2, pc or lam-bacchus")
      ->required()
      ->check(CLI::IsMember({"kutato", "k2", "pc", "lam-bacchus"}));
  learn->add_option("--model", lrn.model, "fixture:NAME, full-pi:eta=E,q=Q or a model JSON path");
  learn->add_option("--data", lrn.data, "Dataset CSV or JSON");
  learn->add_option("--k", lrn.k, "Lookahead width")->capture_default_str();
  learn->add_option("--ordering", lrn.ordering, "Comma-separated names or indices (default: file order)");
  learn->add_option("--max-parents", lrn.max_parents, "K2 parent limit")->capture_default_str();
  learn->add_option("--m", lrn.m, "Cases for K2 datasets built from a model; MDL sample size")->capture_default_str();
  learn->add_option("--seed", lrn.seed, "Seed when --sample is given")->capture_default_str();
  learn->add_flag("--sample", lrn.sample, "Build the K2 dataset by sampling instead of exact counts");
  learn->add_option("--tol", lrn.tol, "PC independence tolerance")->capture_default_str();
  learn->add_option("--max-order", lrn.max_order, "PC largest conditioning-set size (default n-2)");
  learn->add_option("--budget", lrn.budget, "Lam-Bacchus candidates per link-count class")->capture_default_str();
  learn->add_option("--max-links", lrn.max_links, "Lam-Bacchus largest link-count class (default n-1)");
  learn->add_option("--out", lrn.out, "Result JSON path (stdout when omitted)");
  learn->add_option("--dot", lrn.dot, "Also write the graph as DOT");
  learn->add_option("--trace", lrn.trace, "Also write the search trace as JSON lines");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Classify a model as full PI, partial PI or non-PI");
  verify->add_option("model", ver.model, "fixture:NAME, full-pi:eta=E,q=Q or a model JSON path")->required();
  verify->add_option("--tol", ver.tol, "Independence tolerance")->capture_default_str();
  verify->add_flag("--embedded", ver.embedded, "Also search variable subsets for embedded PI submodels");
  verify->add_option("--max-subset", ver.max_subset, "Largest subset for --embedded")->capture_default_str();
  verify->add_option("--out", ver.out, "Output path (stdout when omitted)");

  K2AnalysisArgs k2a;
  auto* k2 = app.add_subcommand("k2-analysis", "Exhaustive min r and closed-form min r' per m, as CSV");
  k2->add_option("--m-range", k2a.range, "Inclusive range A..B")->capture_default_str();
  k2->add_option("--cap", k2a.cap, "Largest m accepted")->capture_default_str();
  k2->add_option("--out", k2a.out, "Output path (stdout when omitted)");

  ReproArgs rep;
  auto* repro = app.add_subcommand("repro", "Run every reproduction check and emit a JSON report");
  repro->add_option("--out", rep.out, "Report path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return run_generate(gen);
    if (*sample_cmd) return run_sample(smp);
    if (*learn) return run_learn(lrn);
    if (*verify) return run_verify(ver);
    if (*k2) return run_k2_analysis(k2a);
    if (*repro) return run_repro(rep);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
