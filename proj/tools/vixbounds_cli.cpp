// vixbounds: price VIX derivatives with primal/dual Monte Carlo bounds.
//
//   vixbounds price       --config run.cfg --out results/
//   vixbounds sweep       --param rho --values -0.8,-0.6,0 --out results/
//   vixbounds convergence --paths 10000,50000,100000 --out results/
//   vixbounds oracle      --out results/
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vixb/config.hpp"
#include "vixb/error.hpp"
#include "vixb/experiment.hpp"
#include "vixb/kernels.hpp"
#include "vixb/table_io.hpp"

namespace fs = std::filesystem;
using namespace vixb;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_fit, seed_eval;
  unsigned threads = 0;
  std::optional<std::string> kernel;
  std::string param;
  std::string values;
  std::string paths;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "key = value configuration file");
  sub->add_option("--out", o.out_dir, "output directory (created if missing)");
  sub->add_option("--seed-fit", o.seed_fit, "seed of the regression batch");
  sub->add_option("--seed-eval", o.seed_eval, "seed of the evaluation batch and oracle");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores");
  sub->add_option("--kernel", o.kernel, "auto, scalar or avx2");
}

RunConfig resolve(const Options& o) {
  RunConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file " + o.config_path);
    c = parse_config(in, o.config_path);
  }
  if (o.seed_fit) c.seed_fit = *o.seed_fit;
  if (o.seed_eval) c.seed_eval = *o.seed_eval;
  if (o.kernel) c.kernel = *o.kernel;
  validate_config(c);
  c.kernel = kernels::select(c.kernel).name;
  return c;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_real_expression(item));
  if (out.empty()) throw ConfigError("empty value list");
  return out;
}

std::vector<std::size_t> parse_counts(const std::string& csv) {
  std::vector<std::size_t> out;
  for (double x : parse_values(csv)) {
    if (!(x >= 1) || x != static_cast<double>(static_cast<std::size_t>(x)))
      throw ConfigError("path counts must be positive integers");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

template <typename Writer>
void write_pair(const fs::path& dir, const std::string& stem, Writer&& w) {
  std::ostringstream fixed, raw;
  w(fixed, NumberFormat::Fixed);
  w(raw, NumberFormat::Raw);
  write_text_file(dir / (stem + ".csv"), fixed.str());
  write_text_file(dir / (stem + "_raw.csv"), raw.str());
}

std::string manifest(const RunConfig& c, const std::string& command) {
  return "# vixbounds " + command + "\n" + to_manifest(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo price bounds for VIX futures and options"};
  app.require_subcommand(1);
  Options o;
  auto* price = app.add_subcommand("price", "bounds table for the future, calls, puts, caps, swaps");
  auto* sweep = app.add_subcommand("sweep", "future bounds across values of one model parameter");
  auto* conv = app.add_subcommand("convergence", "future bounds against the number of paths");
  auto* oracle = app.add_subcommand("oracle", "nested Monte Carlo benchmark only");
  for (auto* sub : {price, sweep, conv, oracle}) add_common(sub, o);
  sweep->add_option("--param", o.param, "rho, eta, alpha, kappa, theta, v0 or s0")->required();
  sweep->add_option("--values", o.values, "comma-separated values")->required();
  conv->add_option("--paths", o.paths, "comma-separated increasing path counts")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const RunConfig config = resolve(o);
    Exec exec;
    exec.threads = o.threads;
    const fs::path dir = o.out_dir;
    fs::create_directories(dir);

    if (*price) {
      const PriceRun run = run_price(config, exec);
      write_pair(dir, "table", [&](std::ostream& os, NumberFormat f) { write_table(os, run.table, f); });
      write_fit(dir / "fit.txt", run.fit);
      write_text_file(dir / "manifest.txt", manifest(run.config, "price"));
    } else if (*sweep) {
      const auto values = parse_values(o.values);
      const auto rows = run_sweep(config, o.param, values, exec);
      write_pair(dir, "sweep", [&](std::ostream& os, NumberFormat f) { write_sweep(os, o.param, rows, f); });
      write_text_file(dir / "manifest.txt",
                      manifest(config, "sweep --param " + o.param + " --values " + o.values));
    } else if (*conv) {
      const auto counts = parse_counts(o.paths);
      const auto result = run_convergence(config, counts, exec);
      write_pair(dir, "convergence",
                 [&](std::ostream& os, NumberFormat f) { write_convergence(os, result, f); });
      write_text_file(dir / "manifest.txt", manifest(config, "convergence --paths " + o.paths));
    } else {
      const TableColumn col = run_oracle(config, exec);
      write_pair(dir, "oracle", [&](std::ostream& os, NumberFormat f) {
        write_oracle_column(os, config.strikes, col, f);
      });
      write_text_file(dir / "manifest.txt", manifest(config, "oracle"));
    }
    std::cout << "wrote " << dir.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
