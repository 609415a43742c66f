#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "crosscap/cli.hpp"

int main(int argc, char** argv) {
  namespace cc = crosscap::cli;
  CLI::App app{"Counting and classifying cross-caps of polynomial maps R^m -> R^(2m-1)"};
  app.require_subcommand(1);

  cc::Options opt;
  std::string input;
  std::string format = "text";
  std::string radius_sq;
  std::vector<std::string> annulus;
  std::string region;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", input, "problem file (JSON)")->required();
    sub->add_option("--seed", opt.seed, "seed for the numeric layer")->capture_default_str();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->add_option("--tol-residual", opt.tol.residual, "residual acceptance threshold")->capture_default_str();
    sub->add_option("--tol-dedup", opt.tol.dedup, "distance below which points are merged")->capture_default_str();
  };

  CLI::App* generic = app.add_subcommand("generic", "check that every singular point is a cross-cap");
  common(generic);

  CLI::App* zeta = app.add_subcommand("zeta", "signed cross-cap count over a region");
  common(zeta);
  auto* r_opt = zeta->add_option("--radius-squared", radius_sq, "closed ball |x|^2 <= Q");
  auto* a_opt = zeta->add_option("--annulus", annulus, "closed annulus Q1 <= |x|^2 <= Q2")->expected(2);
  auto* u_opt = zeta->add_option("--region", region, "region u >= 0 for a polynomial u");
  r_opt->excludes(a_opt)->excludes(u_opt);
  a_opt->excludes(u_opt);
  zeta->add_option("--max-retries", opt.max_retries, "target transforms tried before giving up")->capture_default_str();

  CLI::App* crosscaps = app.add_subcommand("crosscaps", "locate and sign the real cross-caps");
  common(crosscaps);

  CLI::App* inumber = app.add_subcommand("inumber", "intersection number of an immersed sphere");
  common(inumber);
  auto* ir_opt = inumber->add_option("--radius-squared", radius_sq, "sphere |x|^2 = Q");
  auto* auto_opt = inumber->add_flag("--auto-large-radius", opt.auto_large_radius, "use a radius enclosing every singular point");
  ir_opt->excludes(auto_opt);
  inumber->add_option("--max-retries", opt.max_retries, "target transforms tried before giving up")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (!radius_sq.empty()) opt.radius_squared = radius_sq;
  if (annulus.size() == 2) opt.annulus = std::make_pair(annulus[0], annulus[1]);
  if (!region.empty()) opt.region = region;

  std::string command = app.get_subcommands().front()->get_name();
  cc::Outcome out = cc::run(command, input, opt);
  if (format == "json")
    std::cout << out.report.dump(2) << "\n";
  else
    (out.report.contains("error") ? std::cerr : std::cout) << out.text;
  return out.exit_code;
}
