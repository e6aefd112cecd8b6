#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "axioquad/cli.hpp"

using namespace axioquad;
using namespace axioquad::cli;

namespace {

struct Flags {
  std::string f;
  std::optional<std::string> df, F;
  double a = 0.0, b = 1.0;
  std::optional<double> eps;
  double tol = 1e-6;
  std::optional<double> h0, ratio;
  std::optional<int> count;
  std::optional<Side> side;
  Format format = Format::table;
  std::optional<std::uint64_t> seed;
  AxiomChoice axiom = AxiomChoice::both;
  int trials = 200;
  std::optional<int> n;
};

const std::map<std::string, Format> kFormats{{"table", Format::table}, {"json", Format::json}, {"csv", Format::csv}};
const std::map<std::string, Side> kSides{{"positive", Side::positive}, {"negative", Side::negative}, {"both", Side::both}};
const std::map<std::string, AxiomChoice> kAxioms{
    {"additivity", AxiomChoice::additivity}, {"asymptotic", AxiomChoice::asymptotic}, {"both", AxiomChoice::both}};

CLI::App* add_command(CLI::App& app, const char* name, const char* help, Flags& fl, bool interval, bool limits) {
  CLI::App* c = app.add_subcommand(name, help);
  c->add_option("--f", fl.f, "function of x")->required();
  c->add_option("--format", fl.format, "table, json or csv")->transform(CLI::CheckedTransformer(kFormats));
  c->add_option("--seed", fl.seed, "random seed (default AXIOQUAD_SEED or 42)");
  if (interval) {
    c->add_option("--df", fl.df, "derivative of f, checked against the symbolic one");
    c->add_option("--F", fl.F, "antiderivative of f");
    c->add_option("--a", fl.a, "left end")->required();
    c->add_option("--b", fl.b, "right end")->required();
    c->add_option("--eps", fl.eps, "bracket width target");
  }
  if (limits) {
    c->add_option("--tol", fl.tol, "limit tolerance");
    c->add_option("--h0", fl.h0, "first step");
    c->add_option("--ratio", fl.ratio, "step ratio in (0, 1)");
    c->add_option("--count", fl.count, "number of steps");
    c->add_option("--side", fl.side, "positive, negative or both")->transform(CLI::CheckedTransformer(kSides));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"axioquad: integrals from the additivity and asymptotic axioms"};
  app.require_subcommand(1);
  Flags fl;
  struct Entry {
    CLI::App* app;
    Subcommand sub;
  };
  std::vector<Entry> entries{
      {add_command(app, "integrate", "integral of f over [a, b]", fl, true, false), Subcommand::integrate},
      {add_command(app, "area", "area under f >= 0", fl, true, false), Subcommand::area},
      {add_command(app, "arclength", "length of the graph of f", fl, true, false), Subcommand::arclength},
      {add_command(app, "volume", "volume of revolution about the y-axis by shells", fl, true, false),
       Subcommand::volume},
      {add_command(app, "order", "exponent p in |g(h)| ~ C|h|^p, g given as f of x", fl, false, true),
       Subcommand::order},
      {add_command(app, "verify", "check the two axioms for the integral of f", fl, true, true), Subcommand::verify},
  };
  entries[4].app->add_option("--n", fl.n, "also decide g = o(h^n)");
  entries[5].app->add_option("--axiom", fl.axiom, "additivity, asymptotic or both")
      ->transform(CLI::CheckedTransformer(kAxioms));
  entries[5].app->add_option("--trials", fl.trials, "random additivity triples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "error: usage: " << msg << '\n';
    return kExitPrecondition;
  }

  CommandRequest req;
  for (const auto& e : entries)
    if (e.app->parsed()) req.subcommand = e.sub;
  req.f = fl.f;
  req.df = fl.df;
  req.F = fl.F;
  req.a = fl.a;
  req.b = fl.b;
  req.tol = fl.tol;
  if (req.subcommand == Subcommand::verify)
    req.candidate_eps = fl.eps;
  else if (fl.eps)
    req.eps = *fl.eps;
  req.h0 = fl.h0;
  req.ratio = fl.ratio;
  req.count = fl.count;
  req.side = fl.side;
  req.format = fl.format;
  req.seed = fl.seed;
  req.axiom = fl.axiom;
  req.trials = fl.trials;
  req.n = fl.n;
  return run(req, std::cout, std::cerr);
}
