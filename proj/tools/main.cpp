// Command-line front end: generate / cluster-mrp / cluster-entropy /
// diagnose / evaluate. Every artifact embeds the effective configuration
// and seed so runs are bit-reproducible.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mrp/cluster.hpp"
#include "mrp/entropy.hpp"
#include "mrp/graph.hpp"
#include "mrp/oracle.hpp"
#include "mrp/parallel.hpp"
#include "mrp/solar.hpp"
#include "mrp/walk.hpp"

using json = nlohmann::ordered_json;

namespace {

int default_threads() {
  if (const char* env = std::getenv("MRP_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_artifact(const std::string& path, const json& doc) {
  std::string body = doc.dump(2) + "\n";
  if (path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << body;
}

// Expands "--config file" into option tokens placed before the explicit
// flags, so command-line values win and CLI11 validators still apply.
std::vector<std::string> expand_config(CLI::App& app,
                                       std::vector<std::string> args) {
  std::string config_path;
  std::size_t config_pos = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      config_pos = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      config_pos = i;
      break;
    }
  }
  if (config_path.empty()) return args;
  if (args.empty() || args[0].rfind("-", 0) == 0)
    throw std::runtime_error("--config requires a subcommand");
  CLI::App* sub = app.get_subcommand(args[0]);

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config file: " + config_path);
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(config_path + ":" + std::to_string(line_no) +
                               ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (!sub->get_option_no_throw("--" + key))
      throw std::runtime_error(config_path + ":" + std::to_string(line_no) +
                               ": unknown config key '" + key + "'");
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  (void)config_pos;
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

mrp::WeightedGraph load_or_die(const std::string& path) {
  try {
    return mrp::load_graph_file(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(2);
  }
}

json clustering_to_json(const mrp::Clustering& c) {
  json doc;
  doc["clusters"] = c.clusters;
  doc["unassigned"] = c.unassigned;
  doc["tags"] = c.tags;
  return doc;
}

mrp::Clustering clustering_from_json(const json& doc) {
  mrp::Clustering c;
  for (const auto& cl : doc.at("clusters"))
    c.clusters.push_back(mrp::make_vertex_set(cl.get<std::vector<int>>()));
  if (doc.contains("unassigned"))
    c.unassigned = mrp::make_vertex_set(doc["unassigned"].get<std::vector<int>>());
  c.tags.assign(c.clusters.size(), "loaded");
  return c;
}

json run_diagnose(const mrp::WeightedGraph& g, int instances,
                  std::uint64_t seed, std::int64_t mc_samples) {
  json report;
  bool all_pass = true;
  std::mt19937_64 rng(seed);

  auto record = [&](const std::string& name, int count, double residual,
                    double tol) {
    bool pass = residual <= tol;
    all_pass = all_pass && pass;
    report[name] = {{"instances", count},
                    {"max_residual", residual},
                    {"tolerance", tol},
                    {"pass", pass}};
  };

  // random (A, c) and (A subset B) instances on the given graph
  auto random_subset = [&](double density) {
    mrp::VertexSet s;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int v = 0; v < g.size(); ++v)
      if (unif(rng) < density) s.push_back(v);
    if (s.empty()) s.push_back(std::uniform_int_distribution<int>(0, g.size() - 1)(rng));
    if (static_cast<int>(s.size()) == g.size()) s.pop_back();
    return s;
  };

  double green_res = 0.0;
  for (int i = 0; i < instances; ++i) {
    auto a = random_subset(0.4);
    mrp::Vertex c = a[std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng)];
    green_res = std::max(green_res, mrp::green_return_identity(g, a, c).residual);
  }
  record("green_return", instances, green_res, 1e-10);

  double exit_res = 0.0;
  for (int i = 0; i < instances; ++i) {
    auto b = random_subset(0.5);
    mrp::VertexSet a;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (mrp::Vertex v : b)
      if (unif(rng) < 0.5) a.push_back(v);
    if (a.empty()) a.push_back(b.front());
    exit_res = std::max(exit_res, mrp::last_exit_identity(g, a, b));
  }
  record("last_exit", instances, exit_res, 1e-10);

  auto kernel = mrp::transition_matrix(g);
  double duality_res = 0.0;
  for (int n = 0; n <= 8; ++n)
    duality_res = std::max(duality_res, mrp::verify_duality(kernel, n));
  record("duality", 9, duality_res, 1e-8);

  auto carne = mrp::carne_check(g, 30);
  all_pass = all_pass && carne.violations == 0;
  report["carne"] = {{"instances", carne.checked},
                     {"violations", carne.violations},
                     {"min_slack", carne.min_slack},
                     {"pass", carne.violations == 0}};

  auto hoeffding = mrp::hoeffding_tail_check(60);
  all_pass = all_pass && hoeffding.violations == 0;
  report["hoeffding_tail"] = {{"instances", hoeffding.checked},
                              {"violations", hoeffding.violations},
                              {"min_slack", hoeffding.min_slack},
                              {"pass", hoeffding.violations == 0}};

  // harmonic solver against the Monte-Carlo oracle
  double harmonic_gap = 0.0;
  bool harmonic_pass = true;
  int harmonic_runs = 0;
  for (int i = 0; i < instances; ++i) {
    auto b = random_subset(0.5);
    mrp::VertexSet u;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (mrp::Vertex v : b)
      if (unif(rng) < 0.3) u.push_back(v);
    auto interior = mrp::set_difference(b, u);
    if (interior.empty()) continue;
    auto field = mrp::harmonic_hit_probability(g, b, u);
    mrp::Vertex start = interior[interior.size() / 2];
    auto est = mrp::mc_hit_probability(g, b, u, start, mc_samples,
                                       mrp::derive_seed(seed, 1000 + i));
    double gap = std::abs(field.q[start] - est.value);
    double sigma = std::max(est.stderr_, 1e-3);
    harmonic_gap = std::max(harmonic_gap, gap / sigma);
    harmonic_pass = harmonic_pass && gap <= 4 * sigma;
    ++harmonic_runs;
  }
  all_pass = all_pass && harmonic_pass;
  report["harmonic_vs_mc"] = {{"instances", harmonic_runs},
                              {"max_sigma_gap", harmonic_gap},
                              {"tolerance_sigma", 4.0},
                              {"pass", harmonic_pass}};

  auto stats = mrp::walk_statistics(g, 0.25);
  all_pass = all_pass && stats.oliveira.satisfied;
  report["mixing"] = {
      {"mixing_time", stats.mixing_time ? json(*stats.mixing_time) : json()},
      {"relaxation_time", stats.relaxation_time},
      {"max_hitting_time", stats.max_hitting_time}};
  report["oliveira"] = {{"value", stats.oliveira.value},
                        {"bound", stats.oliveira.bound},
                        {"pass", stats.oliveira.satisfied}};
  if (stats.lovasz) {
    all_pass = all_pass && stats.lovasz->satisfied;
    report["lovasz"] = {{"value", stats.lovasz->value},
                        {"bound", stats.lovasz->bound},
                        {"pass", stats.lovasz->satisfied}};
  }

  report["pass"] = all_pass;
  return report;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-cut toolkit: solar-system and entropy clustering"};
  app.require_subcommand(1);

  int threads = default_threads();

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "draw a planted-partition graph");
  std::vector<int> gen_sizes{30, 30};
  double gen_pin = 0.5, gen_pout = 0.01;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "graph.txt", gen_truth = "truth.json";
  gen->add_option("--sizes", gen_sizes, "block sizes");
  gen->add_option("--p-in", gen_pin, "within-block edge probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--p-out", gen_pout, "cross-block edge probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "rng seed")->required();
  gen->add_option("--out", gen_out, "edge-list output path");
  gen->add_option("--truth", gen_truth, "ground-truth partition JSON path");

  // ---- cluster-mrp ----
  auto* cmrp = app.add_subcommand("cluster-mrp",
                                  "solar-system clustering (rings process)");
  std::string cmrp_graph, cmrp_out = "-", cmrp_config;
  mrp::MrpParams mp;
  cmrp->add_option("--config", cmrp_config, "flat key=value config file");
  cmrp->add_option("--graph", cmrp_graph, "edge-list input")->required();
  cmrp->add_option("--seed", mp.seed, "master seed")->required();
  cmrp->add_option("--centers", mp.centers, "solar-system centers")
      ->check(CLI::PositiveNumber);
  cmrp->add_option("--scale", mp.scale, "ring width exponent s")
      ->check(CLI::NonNegativeNumber);
  cmrp->add_option("--blocks", mp.blocks_per_ring, "blocks per ring")
      ->check(CLI::PositiveNumber);
  cmrp->add_option("--fraction", mp.fraction, "candidate fraction per block")
      ->check(CLI::Range(1e-9, 1.0));
  cmrp->add_option("--ra-al", mp.ra_threshold, "relative absorption threshold")
      ->check(CLI::PositiveNumber);
  cmrp->add_option("--phi-al", mp.phi_threshold, "merge conductance threshold")
      ->check(CLI::NonNegativeNumber);
  cmrp->add_option("--repeats", mp.repeats, "randomization repeats")
      ->check(CLI::PositiveNumber);
  cmrp->add_option("--threads", threads, "parallelism bound")
      ->check(CLI::PositiveNumber);
  cmrp->add_option("--output", cmrp_out, "artifact path ('-' for stdout)");

  // ---- cluster-entropy ----
  auto* cent = app.add_subcommand("cluster-entropy",
                                  "rank random sets by beta-entropy");
  std::string cent_graph, cent_out = "-", cent_config;
  mrp::EntropyParams ep;
  cent->add_option("--config", cent_config, "flat key=value config file");
  cent->add_option("--graph", cent_graph, "edge-list input")->required();
  cent->add_option("--seed", ep.seed, "master seed")->required();
  cent->add_option("--cardinality", ep.cardinality, "vertices per set")
      ->check(CLI::PositiveNumber);
  cent->add_option("--n-sets", ep.n_sets, "random sets to draw")
      ->check(CLI::PositiveNumber);
  cent->add_option("--top-m", ep.top_m, "sets to keep")
      ->check(CLI::PositiveNumber);
  cent->add_option("--radius", ep.radius, "covering-ball radius")
      ->check(CLI::NonNegativeNumber);
  cent->add_option("--horizon", ep.horizon,
                   "stopping horizon (0 = 4 * diameter)")
      ->check(CLI::NonNegativeNumber);
  cent->add_option("--threads", threads, "parallelism bound")
      ->check(CLI::PositiveNumber);
  cent->add_option("--output", cent_out, "artifact path ('-' for stdout)");

  // ---- diagnose ----
  auto* diag = app.add_subcommand("diagnose",
                                  "verify the probabilistic identities");
  std::string diag_graph, diag_out = "-";
  int diag_instances = 20;
  std::int64_t diag_samples = 10000;
  std::uint64_t diag_seed = 0;
  diag->add_option("--graph", diag_graph, "edge-list input")->required();
  diag->add_option("--seed", diag_seed, "rng seed")->required();
  diag->add_option("--instances", diag_instances, "random instances per identity")
      ->check(CLI::PositiveNumber);
  diag->add_option("--mc-samples", diag_samples, "Monte-Carlo sample count")
      ->check(CLI::PositiveNumber);
  diag->add_option("--threads", threads, "parallelism bound")
      ->check(CLI::PositiveNumber);
  diag->add_option("--output", diag_out, "artifact path ('-' for stdout)");

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "score a stored clustering");
  std::string eval_graph, eval_clustering, eval_reference, eval_out = "-";
  eval->add_option("--graph", eval_graph, "edge-list input")->required();
  eval->add_option("--clustering", eval_clustering, "clustering artifact JSON")
      ->required();
  eval->add_option("--reference", eval_reference,
                   "reference partition JSON (clusters or membership)");
  eval->add_option("--output", eval_out, "artifact path ('-' for stdout)");

  // a value on the command line beats the same key in the config file
  for (auto* sub : {cmrp, cent})
    for (auto* opt : sub->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(app, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      mrp::SbmSpec spec{gen_sizes, gen_pin, gen_pout, gen_seed};
      auto inst = mrp::generate_sbm(spec);
      std::ostringstream edges;
      for (int u = 0; u < inst.graph.size(); ++u)
        for (const auto& [v, w] : inst.graph.neighbors(u))
          if (u < v) edges << u << " " << v << " " << w << "\n";
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot write " + gen_out);
      out << edges.str();
      json truth;
      truth["membership"] = inst.membership;
      truth["config"] = {{"sizes", gen_sizes}, {"p_in", gen_pin},
                         {"p_out", gen_pout}, {"seed", gen_seed}};
      truth["regenerated"] = inst.regenerated;
      truth["connected"] = inst.graph.connected();
      write_artifact(gen_truth, truth);
      return 0;
    }

    if (*cmrp) {
      auto g = load_or_die(cmrp_graph);
      mp.threads = threads;
      auto clustering = mrp::cluster_mrp(g, mp);
      auto metrics = mrp::evaluate_clustering(g, clustering);
      json doc = clustering_to_json(clustering);
      json conds = json::array();
      for (double phi : metrics.cluster_conductance)
        conds.push_back(std::isnan(phi) ? json() : json(phi));
      doc["metrics"] = {{"cluster_conductance", conds},
                        {"mean_conductance",
                         std::isfinite(metrics.mean_conductance)
                             ? json(metrics.mean_conductance)
                             : json()},
                        {"coverage", metrics.coverage}};
      doc["params"] = {{"graph", cmrp_graph},   {"centers", mp.centers},
                       {"scale", mp.scale},     {"blocks", mp.blocks_per_ring},
                       {"fraction", mp.fraction}, {"ra_al", mp.ra_threshold},
                       {"phi_al", mp.phi_threshold}, {"repeats", mp.repeats}};
      doc["seed"] = mp.seed;
      write_artifact(cmrp_out, doc);
      return 0;
    }

    if (*cent) {
      auto g = load_or_die(cent_graph);
      ep.threads = threads;
      auto ranked = mrp::cluster_entropy(g, ep);
      json doc;
      doc["ranked"] = json::array();
      for (const auto& r : ranked)
        doc["ranked"].push_back(
            {{"vertices", r.vertices}, {"score", r.score}});
      doc["params"] = {{"graph", cent_graph},
                       {"cardinality", ep.cardinality},
                       {"n_sets", ep.n_sets},
                       {"top_m", ep.top_m},
                       {"radius", ep.radius},
                       {"horizon", ep.horizon}};
      doc["seed"] = ep.seed;
      write_artifact(cent_out, doc);
      return 0;
    }

    if (*diag) {
      auto g = load_or_die(diag_graph);
      json doc = run_diagnose(g, diag_instances, diag_seed, diag_samples);
      doc["params"] = {{"graph", diag_graph},
                       {"instances", diag_instances},
                       {"mc_samples", diag_samples}};
      doc["seed"] = diag_seed;
      write_artifact(diag_out, doc);
      return doc["pass"].get<bool>() ? 0 : 1;
    }

    if (*eval) {
      auto g = load_or_die(eval_graph);
      std::ifstream in(eval_clustering);
      if (!in) throw std::runtime_error("cannot open " + eval_clustering);
      auto clustering = clustering_from_json(json::parse(in));
      auto metrics = mrp::evaluate_clustering(g, clustering);
      json doc;
      json conds = json::array();
      for (double phi : metrics.cluster_conductance)
        conds.push_back(std::isnan(phi) ? json() : json(phi));
      doc["metrics"] = {{"cluster_conductance", conds},
                        {"mean_conductance",
                         std::isfinite(metrics.mean_conductance)
                             ? json(metrics.mean_conductance)
                             : json()},
                        {"coverage", metrics.coverage}};
      if (!eval_reference.empty()) {
        std::ifstream rin(eval_reference);
        if (!rin) throw std::runtime_error("cannot open " + eval_reference);
        json ref = json::parse(rin);
        mrp::Clustering reference;
        if (ref.contains("membership"))
          reference = mrp::clustering_from_labels(
              ref["membership"].get<std::vector<int>>());
        else
          reference = clustering_from_json(ref);
        doc["metrics"]["ari"] =
            mrp::adjusted_rand_index(clustering, reference, g.size());
      }
      doc["params"] = {{"graph", eval_graph},
                       {"clustering", eval_clustering},
                       {"reference", eval_reference}};
      write_artifact(eval_out, doc);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
