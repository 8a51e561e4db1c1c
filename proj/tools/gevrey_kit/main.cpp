#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace gevrey_kit;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, std::string& eps, std::string& z) {
  sub->add_option("--problem", cfg.problem_path, "problem file (JSON)");
  sub->add_option("--builtin", cfg.builtin, "builtin problem")->check(CLI::IsMember({"riccati"}));
  sub->add_option("--eps", eps, "comma-separated eps values, e.g. 0.1,0.05+0.01i");
  sub->add_option("--z", z, "comma-separated z values");
  sub->add_option("--K", cfg.K, "z truncation of the per-eps series");
  sub->add_option("--Kz", cfg.Kz, "z truncation of the eps-coefficients a_i");
  sub->add_option("--I", cfg.I, "eps truncation");
  sub->add_option("--theta", cfg.theta, "summation direction");
  sub->add_option("--gamma", cfg.gamma, "sector opening");
  sub->add_option("--E", cfg.E, "sector radius");
  sub->add_option("--out", cfg.out, "report path (stdout when absent)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--precision", cfg.precision, "double or quad")->check(CLI::IsMember({"double", "quad"}));
  sub->add_flag("--timestamp", cfg.timestamp, "record the generation time in meta");
}

void emit(const RunConfig& cfg, const Outcome& out) {
  if (cfg.format == "json") {
    const std::string text = out.report.dump(2) + "\n";
    if (cfg.out.empty()) std::fwrite(text.data(), 1, text.size(), stdout);
    else write_atomic(cfg.out, text);
    return;
  }
  if (cfg.out.empty()) {
    for (std::size_t i = 0; i < out.tables.size(); ++i) std::cout << (i ? "\n" : "") << out.tables[i].str();
    return;
  }
  write_atomic(cfg.out, out.tables.front().str());
  if (out.tables.size() > 1) write_atomic(sibling(cfg.out, "remainder"), out.tables[1].str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gevrey-kit: Gevrey series, Borel summation and diagnostics for eps z f' = F(eps, z, f)"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string eps, z;
  for (const char* name : {"check-sector", "solve", "resum", "diagnose", "validate-riccati"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub, cfg, eps, z);
    if (std::string(name) == "diagnose") sub->add_option("--norms", cfg.norms_path, "file of norms ||a_i||, i = 0..I");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!eps.empty()) cfg.eps = parse_list(eps);
    if (!z.empty()) cfg.z = parse_list(z);
    const auto out = run_command(cfg);
    emit(cfg, out);
    return out.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "gevrey-kit " << cfg.command << ": " << e.what() << "\n";
    std::cout << error_report(cfg, e).dump(2) << "\n";
    return kError;
  }
}
