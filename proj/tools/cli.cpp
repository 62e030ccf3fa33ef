#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "plap/cluster.hpp"
#include "plap/data.hpp"
#include "plap/graph.hpp"
#include "plap/scf.hpp"
#include "plap/text.hpp"

namespace plap::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write " + path.string());
  out << contents;
  if (!out) throw IoFailure("write failed: " + path.string());
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json manifest_base(const std::string& command) {
  return {{"tool", "plap"}, {"version", kToolVersion}, {"command", command}};
}

json scf_to_json(const ScfConfig& c) {
  return {{"p_target", c.p_target},       {"delta_p", c.delta_p},
          {"a", c.a},                     {"tol", c.tol},
          {"max_iter_per_p", c.max_iter_per_p}, {"record_true_residual", c.record_true_residual},
          {"seed", c.seed}};
}

ScfConfig scf_from_json(const json& j) {
  ScfConfig c;
  c.p_target = j.at("p_target").get<double>();
  c.delta_p = j.at("delta_p").get<double>();
  c.a = j.at("a").get<double>();
  c.tol = j.at("tol").get<double>();
  c.max_iter_per_p = j.at("max_iter_per_p").get<int>();
  c.record_true_residual = j.at("record_true_residual").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

// ---------------------------------------------------------------- gen

int gen_sbm(const SbmParams& params, const fs::path& out) {
  const SbmGraph sbm = sbm_generate(params);
  json manifest = manifest_base("gen sbm");
  manifest["sbm"] = {{"nc", params.n_c}, {"q_in", params.q_in}, {"q_out", params.q_out},
                     {"seed", params.seed}, {"seed_used", sbm.seed_used}};
  prepare_dir(out);
  write_edge_list_file((out / "graph.edges").string(), sbm.graph);
  std::ostringstream labels;
  write_labels(labels, sbm.truth);
  write_file(out / "labels.txt", labels.str());
  write_file(out / "manifest.json", dump(manifest));
  return kOk;
}

int gen_moons(const MoonsParams& params, ScaleRule rule, const fs::path& out) {
  const PointCloud cloud = moons_generate(params);
  const Graph g = knn_similarity_graph(cloud, params.k, rule);
  json manifest = manifest_base("gen moons");
  manifest["moons"] = {{"nc", params.n_c},
                       {"d", params.d},
                       {"sigma2", params.sigma2},
                       {"k", params.k},
                       {"seed", params.seed},
                       {"equispaced", params.equispaced},
                       {"scale", rule == ScaleRule::NearestNeighbor ? "nearest" : "kth"}};
  prepare_dir(out);
  write_edge_list_file((out / "graph.edges").string(), g);
  std::ostringstream csv;
  write_point_csv(csv, cloud);
  write_file(out / "points.csv", csv.str());
  std::ostringstream labels;
  write_labels(labels, cloud.truth);
  write_file(out / "labels.txt", labels.str());
  write_file(out / "manifest.json", dump(manifest));
  return kOk;
}

// ---------------------------------------------------------------- solve / cluster

std::string trace_csv(const ScfTrace& trace) {
  std::string s = "p_i,iter,lambda,step_error,relres_reg,relres_true\n";
  for (const ScfRecord& r : trace.records) {
    s += format_double(r.p) + ',' + std::to_string(r.iter) + ',' + format_double(r.lambda) + ',' +
         format_double(r.step_error) + ',' + format_double(r.relres_reg) + ',' +
         format_double(r.relres_true) + '\n';
  }
  return s;
}

std::string iterates_csv(const ScfTrace& trace) {
  std::string s = "p_i,iter,values\n";
  for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
    s += format_double(trace.records[i].p) + ',' + std::to_string(trace.records[i].iter);
    for (Index j = 0; j < trace.iterates[i].size(); ++j) s += ',' + format_double(trace.iterates[i][j]);
    s += '\n';
  }
  return s;
}

json result_json(const ScfResult& r, const json& manifest) {
  json stages = json::array();
  for (const StageSummary& s : r.trace.stages) {
    stages.push_back({{"p_i", s.p},
                      {"iters", s.iterations},
                      {"converged", s.converged},
                      {"lambda", s.lambda},
                      {"delta_gap", s.delta_gap}});
  }
  std::vector<double> v(r.vector.data(), r.vector.data() + r.vector.size());
  return {{"lambda", r.lambda},
          {"eigenvector", v},
          {"converged", r.converged},
          {"initial", {{"p_i", 2.0}, {"lambda", r.initial.lambda}, {"delta_gap", r.initial.delta_gap}}},
          {"stages", stages},
          {"manifest", manifest}};
}

struct SolveRequest {
  std::string graph_path;
  ScfConfig scf;
  bool cluster = false;
  std::optional<std::string> truth_path;
};

int solve(const SolveRequest& req, const fs::path& out) {
  const Graph g = read_edge_list_file(req.graph_path);
  std::optional<Partition> truth;
  if (req.truth_path) {
    std::ifstream in(*req.truth_path);
    if (!in) throw std::invalid_argument("cannot open " + *req.truth_path);
    truth = read_labels(in);
    if (truth->size() != g.num_nodes()) {
      throw std::invalid_argument("truth labels: expected " + std::to_string(g.num_nodes()) +
                                  " labels, got " + std::to_string(truth->size()));
    }
  }

  json manifest = manifest_base(req.cluster ? "cluster" : "solve");
  manifest["graph"] = req.graph_path;
  manifest["nodes"] = g.num_nodes();
  manifest["edges"] = g.num_edges();
  manifest["scf"] = scf_to_json(req.scf);
  if (req.cluster) manifest["truth"] = req.truth_path ? json(*req.truth_path) : json(nullptr);

  const ScfResult r = scf_continuation(g, req.scf);
  json result = result_json(r, manifest);

  prepare_dir(out);
  write_file(out / "trace.csv", trace_csv(r.trace));
  if (req.scf.record_true_residual) write_file(out / "iterates.csv", iterates_csv(r.trace));

  if (req.cluster) {
    std::string table = truth ? "p_i,threshold,cut,rcut,rcc,ncut,ncc,accuracy\n"
                              : "p_i,threshold,cut,rcut,rcc,ncut,ncc\n";
    json rows = json::array();
    auto add_row = [&](double p, const NodeVector& v) {
      const SweepResult sw = threshold_sweep(g, v);
      const CutMetrics& m = sw.metrics;
      table += format_double(p) + ',' + format_double(sw.threshold) + ',' + format_double(m.cut) +
               ',' + format_double(m.rcut) + ',' + format_double(m.rcc) + ',' +
               format_double(m.ncut) + ',' + format_double(m.ncc);
      json row = {{"p_i", p},       {"threshold", sw.threshold}, {"cut", m.cut}, {"rcut", m.rcut},
                  {"rcc", m.rcc},   {"ncut", m.ncut},            {"ncc", m.ncc}};
      if (truth) {
        const double acc = partition_accuracy(sw.partition, *truth);
        table += ',' + format_double(acc);
        row["accuracy"] = acc;
      }
      table += '\n';
      rows.push_back(row);
    };
    add_row(2.0, r.initial.vector);
    for (const StageSummary& s : r.trace.stages) {
      if (s.converged) add_row(s.p, s.vector);
    }
    const SweepResult final_split = threshold_sweep(g, r.vector);
    std::ostringstream labels;
    write_labels(labels, final_split.partition);
    write_file(out / "labels.txt", labels.str());
    write_file(out / "cluster_table.csv", table);
    result["clusters"] = rows;
  }
  write_file(out / "result.json", dump(result));
  write_file(out / "manifest.json", dump(manifest));

  if (!r.converged) {
    std::cerr << "plap: SCF did not converge at p = " << r.trace.stages.back().p << " within "
              << req.scf.max_iter_per_p << " iterations; partial outputs written to "
              << out.string() << "\n";
    return kNotConverged;
  }
  return kOk;
}

// ---------------------------------------------------------------- replay

int replay(const std::string& manifest_path, const fs::path& out) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("cannot open " + manifest_path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  try {
    const std::string command = m.at("command").get<std::string>();
    if (command == "gen sbm") {
      const json& s = m.at("sbm");
      return gen_sbm({s.at("nc").get<Index>(), s.at("q_in").get<double>(),
                      s.at("q_out").get<double>(), s.at("seed").get<std::uint64_t>()},
                     out);
    }
    if (command == "gen moons") {
      const json& s = m.at("moons");
      MoonsParams p{s.at("nc").get<Index>(),  s.at("d").get<Index>(),
                    s.at("sigma2").get<double>(), s.at("k").get<Index>(),
                    s.at("seed").get<std::uint64_t>(), s.at("equispaced").get<bool>()};
      const auto rule =
          s.at("scale").get<std::string>() == "kth" ? ScaleRule::KthNeighbor : ScaleRule::NearestNeighbor;
      return gen_moons(p, rule, out);
    }
    if (command == "solve" || command == "cluster") {
      SolveRequest req;
      req.graph_path = m.at("graph").get<std::string>();
      req.scf = scf_from_json(m.at("scf"));
      req.cluster = command == "cluster";
      if (req.cluster && !m.at("truth").is_null()) req.truth_path = m.at("truth").get<std::string>();
      return solve(req, out);
    }
    throw std::invalid_argument("manifest: unknown command '" + command + "'");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
}

void add_scf_flags(CLI::App& app, ScfConfig& c) {
  app.add_option("--p-target", c.p_target, "Target exponent p in (1, 2]")->capture_default_str();
  app.add_option("--delta-p", c.delta_p, "Decrement of p between continuation stages")
      ->capture_default_str();
  app.add_option("--a", c.a, "Softabs smoothing parameter")->capture_default_str();
  app.add_option("--tol", c.tol, "Step-error tolerance per stage")->capture_default_str();
  app.add_option("--max-iter", c.max_iter_per_p, "Iteration cap per stage")->capture_default_str();
  app.add_option("--seed", c.seed, "Seed recorded in the manifest")->capture_default_str();
  app.add_flag("--record-true-residual", c.record_true_residual,
               "Keep every iterate and write iterates.csv");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"p-Laplacian spectral clustering via SCF iteration with p-continuation", "plap"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string out = ".";

  auto* gen = app.add_subcommand("gen", "Generate a benchmark graph");
  gen->require_subcommand(1);

  SbmParams sbm;
  auto* gen_sbm_cmd = gen->add_subcommand("sbm", "Two-community stochastic block model");
  gen_sbm_cmd->add_option("--nc", sbm.n_c, "Nodes per community")->capture_default_str();
  gen_sbm_cmd->add_option("--q-in", sbm.q_in, "Intra-community edge probability")->capture_default_str();
  gen_sbm_cmd->add_option("--q-out", sbm.q_out, "Inter-community edge probability")->capture_default_str();
  gen_sbm_cmd->add_option("--seed", sbm.seed, "Random seed")->capture_default_str();
  gen_sbm_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  MoonsParams moons;
  bool kth_scale = false;
  auto* gen_moons_cmd = gen->add_subcommand("moons", "Noisy two moons with a kNN similarity graph");
  gen_moons_cmd->add_option("--nc", moons.n_c, "Points per moon")->capture_default_str();
  gen_moons_cmd->add_option("--d", moons.d, "Ambient dimension")->capture_default_str();
  gen_moons_cmd->add_option("--sigma2", moons.sigma2, "Noise variance")->capture_default_str();
  gen_moons_cmd->add_option("--k", moons.k, "Nearest neighbours per point")->capture_default_str();
  gen_moons_cmd->add_option("--seed", moons.seed, "Random seed")->capture_default_str();
  gen_moons_cmd->add_flag("--equispaced", moons.equispaced, "Even angle grid instead of sampling");
  gen_moons_cmd->add_flag("--kth-neighbor-scale", kth_scale,
                          "Kernel width from the k-th instead of the nearest neighbour");
  gen_moons_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  SolveRequest solve_req;
  auto* solve_cmd = app.add_subcommand("solve", "Second eigenpair of the graph p-Laplacian");
  solve_cmd->add_option("graph", solve_req.graph_path, "Edge-list file")->required();
  add_scf_flags(*solve_cmd, solve_req.scf);
  solve_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  SolveRequest cluster_req;
  cluster_req.cluster = true;
  std::string truth;
  auto* cluster_cmd = app.add_subcommand("cluster", "Solve, then threshold every stage's eigenvector");
  cluster_cmd->add_option("graph", cluster_req.graph_path, "Edge-list file")->required();
  add_scf_flags(*cluster_cmd, cluster_req.scf);
  cluster_cmd->add_option("--truth", truth, "Ground-truth labels, one 0/1 per line");
  cluster_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json")->required();
  replay_cmd->add_option("--out", out, "Output directory")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*gen_sbm_cmd) return gen_sbm(sbm, out);
    if (*gen_moons_cmd) {
      return gen_moons(moons, kth_scale ? ScaleRule::KthNeighbor : ScaleRule::NearestNeighbor, out);
    }
    if (*solve_cmd) return solve(solve_req, out);
    if (*cluster_cmd) {
      if (!truth.empty()) cluster_req.truth_path = truth;
      return solve(cluster_req, out);
    }
    if (*replay_cmd) return replay(manifest_path, out);
  } catch (const DisconnectedGraphError& e) {
    std::cerr << "plap: " << e.what() << "\n";
    return kDisconnected;
  } catch (const IoFailure& e) {
    std::cerr << "plap: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "plap: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace plap::cli
