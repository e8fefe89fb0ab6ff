#include "slipflow/app.hpp"

#include <CLI11.hpp>

#include <iostream>

int
main(int argc, char** argv)
{
  CLI::App app{"Pseudospectral variable-density channel flow solver"};
  app.require_subcommand(1);

  slipflow::CliArgs args;
  std::string config;

  for (const char* name : {"simulate", "sweep", "verify"})
  {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config, "JSON configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  }
  app.get_subcommand("simulate")->description("run one simulation, write snapshots and a log");
  app.get_subcommand("sweep")->description("vanishing-viscosity sweep with rate fit and report");
  app.get_subcommand("verify")->description("check initial data and invariants over a short run");

  auto* cmp = app.add_subcommand("compare", "H^s distance between two snapshot files");
  cmp->add_option("--a", args.a, "first snapshot")->required()->check(CLI::ExistingFile);
  cmp->add_option("--b", args.b, "second snapshot")->required()->check(CLI::ExistingFile);
  cmp->add_option("--norm", args.norm, "Sobolev order s (0..3)")->default_val(0);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : slipflow::exit_config;
  }

  args.subcommand = app.get_subcommands().front()->get_name();
  if (!config.empty())
    args.config = config;
  return slipflow::dispatch(args, std::cout, std::cerr);
}
