#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glevy/cli/config.hpp"
#include "glevy/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sublinear expectations of G-Levy processes via the nonlinear integro-PDE"};

  std::string config_path;
  glevy::cli::RunOptions opts;
  app.add_option("--config", config_path, "Job file (key = value lines)")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", opts.seed, "Seed for randomized check suites");
  app.add_option("--threads", opts.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out, "Output path (overrides the job's output key)");
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path);
    std::stringstream text;
    text << in.rdbuf();
    const auto job = glevy::cli::parse_config(text.str());
    return glevy::cli::run(job, opts, std::cout);
  } catch (const glevy::Error& e) {
    std::cerr << "glevy: " << e.what() << '\n';
    return 2;
  }
}
