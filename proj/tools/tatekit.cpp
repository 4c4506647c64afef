#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tatekit/job.hpp"

namespace fs = std::filesystem;
using namespace tatekit;

namespace {

unsigned precision_from_env() {
  const char* env = std::getenv("TATEKIT_PRECISION");
  if (!env || !*env) return kDefaultPrecision;
  Int v = parse_int(env);
  if (v < 1 || v > 4096) throw Error(ErrorCode::InvalidArgument, "TATEKIT_PRECISION must be in [1, 4096]");
  return static_cast<unsigned>(v);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out);
  f << text;
}

std::string error_json(const std::string& command, const Error& e) {
  io::Json j;
  j["command"] = command;
  j["error"] = {{"code", code_name(e.code())}, {"message", e.message()}};
  return j.dump(2) + "\n";
}

struct Outcome {
  int code = 0;
  std::string text;
};

Outcome execute(const Job& job, const RunContext& ctx) {
  try {
    return {0, run_job(job, ctx).dump()};
  } catch (const Error& e) {
    return {exit_code_for(e), error_json(job.command, e)};
  }
}

int run_batch(const fs::path& dir, const std::string& out_dir, const RunContext& base) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::InvalidArgument, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" && entry.path().string().find(".report.") == std::string::npos)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<std::future<Outcome>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [f, base] {
      RunContext ctx = base;
      ctx.base_dir = f.parent_path();
      try {
        return execute(parse_job(read_file(f)), ctx);
      } catch (const Error& e) {
        return Outcome{exit_code_for(e), error_json("", e)};
      }
    }));
  }
  const fs::path target = out_dir.empty() ? dir : fs::path(out_dir);
  fs::create_directories(target);
  int worst = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    Outcome o = jobs[i].get();
    emit(o.text, (target / (files[i].stem().string() + ".report.json")).string());
    std::cout << files[i].filename().string() << ": " << (o.code == 0 ? "ok" : "exit " + std::to_string(o.code)) << "\n";
    worst = std::max(worst, o.code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tatekit: Tate cohomology, local square classes, Sha kernels and splitting towers"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string out, batch;
  bool trace = false;
  app.add_option("--out", out, "Write the report here instead of stdout (a directory with --batch)");
  app.add_flag("--trace", trace, "Include the full derivation detail");
  app.add_option("--batch", batch, "Run every job file in a directory");

  Job job;
  std::string input_file;
  auto with_input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", input_file, what)->required()->check(CLI::ExistingFile);
  };
  auto opt = [&](CLI::App* sub, const std::string& name, const std::string& help, bool required) {
    auto* o = sub->add_option_function<std::string>("--" + name, [&job, name](const std::string& v) { job.options[name] = v; }, help);
    if (required) o->required();
  };

  with_input(app.add_subcommand("snf", "Smith normal form of {\"matrix\": ...}"), "JSON input file");
  with_input(app.add_subcommand("tate", "Coinvariants and Tate groups of a module"), "JSON input file");
  with_input(app.add_subcommand("transfer", "Transfer between torsion coinvariants"), "JSON input file");
  with_input(app.add_subcommand("sha1", "Sha^1 kernel of a place scenario, both descriptions"), "scenario file");
  with_input(app.add_subcommand("tate-obstruction", "Decide whether local classes come from a global class"), "scenario file");
  with_input(app.add_subcommand("subgroup-bound", "Count subgroups against theta^lambda"), "group file");
  auto* split = app.add_subcommand("split-sim", "Simulate the splitting tower on a scenario");
  with_input(split, "scenario file with a tower section");
  opt(split, "n", "Order killing alpha (overrides tower.n)", false);

  auto* cex = app.add_subcommand("counterexample-local", "Period 2 / index 4 certificate over a local field");
  opt(cex, "p", "Residue characteristic", true);
  opt(cex, "q", "Residue field size, 1 mod 4", true);
  auto* teich = app.add_subcommand("teichmuller", "Teichmuller lift of a residue class");
  opt(teich, "p", "Prime", true);
  opt(teich, "alpha", "Residue class", true);
  opt(teich, "precision", "p-adic precision N (default TATEKIT_PRECISION or 8)", false);
  auto* quad = app.add_subcommand("quad-sub", "Quadratic subextension of a tame descriptor");
  opt(quad, "p", "Residue characteristic", true);
  opt(quad, "r", "Degree of k_K over F_p (default 1)", false);
  opt(quad, "wild", "Wild exponent", false);
  opt(quad, "f", "Residue degree", true);
  opt(quad, "e", "Ramification index", true);
  opt(quad, "alpha", "Unit residue in k_E as comma-separated coefficients", false);
  auto* expo = app.add_subcommand("exponents", "lambda, rho and d for a group order");
  opt(expo, "theta-order", "Group order", true);
  auto* run = app.add_subcommand("run", "Run a job file");
  std::string job_file;
  run->add_option("job", job_file, "Job JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  RunContext ctx;
  ctx.verbose = trace;
  try {
    ctx.default_precision = precision_from_env();
    if (!batch.empty()) return run_batch(batch, out, ctx);
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 1;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (sub == run) {
      job = parse_job(read_file(job_file));
      ctx.base_dir = fs::path(job_file).parent_path();
    } else {
      job.command = sub->get_name();
      if (!input_file.empty()) job.input_path = fs::absolute(input_file).string();
    }
  } catch (const Error& e) {
    std::cerr << error_json(job.command, e);
    return exit_code_for(e);
  }
  Outcome o = execute(job, ctx);
  if (o.code != 0) {
    std::cerr << o.text;
    return o.code;
  }
  try {
    emit(o.text, out);
  } catch (const Error& e) {
    std::cerr << error_json(job.command, e);
    return 1;
  }
  return 0;
}
